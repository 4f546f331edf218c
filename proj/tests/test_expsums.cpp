#include <gtest/gtest.h>

#include <random>

#include "kloos/expsums.hpp"

using namespace kloos;

namespace {

// Independent reference: plain double loop with std::polar.
cplx naive_kloosterman(i64 m, i64 n, i64 c) {
  cplx s{0.0, 0.0};
  for (i64 a = 0; a < c; ++a) {
    for (i64 d = 0; d < c; ++d) {
      if ((a * d) % c != 1 % c) continue;
      s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod(a * m + d * n, c)) / c);
    }
  }
  return s;
}

cplx naive_gauss(i64 a, i64 b, i64 c) {
  cplx s{0.0, 0.0};
  for (i64 x = 0; x < c; ++x) {
    s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod(a * x * x + b * x, c)) / c);
  }
  return s;
}

cplx naive_t(i64 m, i64 n, i64 q, i64 c, i64 f) {
  cplx s{0.0, 0.0};
  for (i64 a = 0; a < c; ++a) {
    if (std::gcd(a, c) != 1 || mod(a - f, q) != 0) continue;
    const i64 d = mod_inverse(a, c);
    s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod(a * m + d * n, c)) / c);
  }
  return s;
}

void expect_close(cplx got, cplx want, double tol = 1e-8) {
  EXPECT_NEAR(got.real(), want.real(), tol);
  EXPECT_NEAR(got.imag(), want.imag(), tol);
}

}  // namespace

TEST(Kloosterman, Examples) {
  expect_close(kloosterman(1, 1, 1).value, {1.0, 0.0});
  expect_close(kloosterman(1, 1, 3).value, {-1.0, 0.0});
  expect_close(kloosterman(1, 1, 4).value, {-2.0, 0.0});
  expect_close(kloosterman(0, 0, 12).value, {4.0, 0.0});
  EXPECT_EQ(kloosterman(1, 1, 12).term_count, 4u);
}

TEST(Kloosterman, DirectMatchesNaive) {
  for (i64 c = 1; c <= 60; ++c) {
    for (i64 m : {-3, 0, 1, 2, 7}) {
      for (i64 n : {-1, 0, 1, 5}) {
        const auto s = kloosterman(m, n, c);
        expect_close(s.value, naive_kloosterman(m, n, c));
        EXPECT_NEAR(s.value.imag(), 0.0, sum_tolerance(static_cast<double>(s.term_count)));
      }
    }
  }
}

TEST(Kloosterman, FastMatchesDirect) {
  for (i64 c = 1; c <= 400; ++c) {
    for (i64 m : {-5, -1, 0, 1, 2, 6}) {
      for (i64 n : {-2, 0, 1, 3}) {
        const auto d = kloosterman(m, n, c), f = kloosterman_fast(m, n, c);
        EXPECT_TRUE(approx_equal(d.value, f.value, static_cast<double>(c))) << m << ' ' << n << ' ' << c;
        EXPECT_EQ(d.term_count, f.term_count);
      }
    }
  }
}

TEST(Kloosterman, FastLargePrimeAgainstDirect) {
  for (i64 p : {10007, 65537, 99991}) {
    EXPECT_TRUE(approx_equal(kloosterman(3, -7, p).value, kloosterman_fast(3, -7, p).value,
                             static_cast<double>(p)));
  }
}

TEST(Kloosterman, TwistedMultiplicativity) {
  // S(m,n;c1 c2) = S(m c2', n c2'; c1) S(m c1', n c1'; c2) with ci' the inverse of ci.
  const i64 c1 = 5, c2 = 7;
  const i64 i2 = mod_inverse(c2, c1), i1 = mod_inverse(c1, c2);
  for (i64 m = -3; m <= 3; ++m) {
    for (i64 n = -3; n <= 3; ++n) {
      const cplx lhs = kloosterman(m, n, c1 * c2).value;
      const cplx rhs = kloosterman(m * i2, n * i2, c1).value * kloosterman(m * i1, n * i1, c2).value;
      expect_close(lhs, rhs);
    }
  }
}

TEST(Kloosterman, WeilBound) {
  EXPECT_NEAR(weil_margin(1, 1, 4), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(weil_margin(1, 1, 1), 1.0, 1e-12);
  EXPECT_NEAR(weil_margin(1, 1, 3), 1.0 / (2.0 * std::sqrt(3.0)), 1e-12);
  for (i64 c = 1; c <= 500; ++c) {
    for (i64 m = -4; m <= 4; ++m) {
      for (i64 n = -4; n <= 4; ++n) {
        if (m == 0 && n == 0) continue;
        EXPECT_LE(weil_margin(m, n, c), 1.0 + 1e-10);
      }
    }
  }
}

TEST(Gauss, Examples) {
  expect_close(gauss_sum(1, 0, 3).value, {0.0, std::sqrt(3.0)});
  expect_close(gauss_sum(1, 0, 4).value, {2.0, 2.0});
  expect_close(gauss_sum(2, 1, 4).value, {0.0, 0.0});
  EXPECT_FALSE(gauss_reduce(3, 1, 9).has_value());
  const auto r = gauss_reduce(2, 2, 4);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->scale, 2);
  EXPECT_EQ(r->a, 1);
  EXPECT_EQ(r->b, 1);
  EXPECT_EQ(r->c, 2);
  const auto u = gauss_reduce(1, 5, 7);
  ASSERT_TRUE(u.has_value());
  EXPECT_EQ(u->scale, 1);
  EXPECT_EQ(u->c, 7);
}

TEST(Gauss, NaiveReductionAndBound) {
  for (i64 c = 1; c <= 80; ++c) {
    for (i64 a = -6; a <= 6; ++a) {
      for (i64 b = -6; b <= 6; ++b) {
        const cplx g = gauss_sum(a, b, c).value;
        expect_close(g, naive_gauss(a, b, c));
        const auto red = gauss_reduce(a, b, c);
        if (!red) {
          EXPECT_LT(std::abs(g), 1e-8) << a << ' ' << b << ' ' << c;
          continue;
        }
        expect_close(g, static_cast<double>(red->scale) * naive_gauss(red->a, red->b, red->c));
        EXPECT_LE(std::abs(g), gauss_bound(a, c) + 1e-8);
      }
    }
  }
}

TEST(TSum, Examples) {
  for (i64 m : {1, 2}) {
    for (i64 n : {1, 4}) {
      expect_close(t_sum(m, n, 5, 5, 2).value, unit_root(2 * m + 3 * n, 5));
    }
  }
  expect_close(t_sum(1, 1, 2, 4, 1).value, {-2.0, 0.0});
  expect_close(t_sum_fast(1, 1, 4, 8, 1).value, {0.0, 2.0});
  expect_close(t_sum_fast(1, 3, 4, 8, 1).value, naive_t(1, 3, 4, 8, 1));
  EXPECT_THROW(t_sum(1, 1, 3, 8, 1), PreconditionViolation);
}

TEST(TSum, FastMatchesNaive) {
  for (i64 c = 1; c <= 128; ++c) {
    for (i64 q : divisors(c)) {
      for (i64 f = 0; f <= std::min<i64>(q, 6); ++f) {
        if (std::gcd(f, q) != 1) continue;
        for (i64 m : {-2, 0, 1, 3}) {
          for (i64 n : {-1, 0, 2}) {
            const cplx want = naive_t(m, n, q, c, f);
            expect_close(t_sum(m, n, q, c, f).value, want);
            expect_close(t_sum_fast(m, n, q, c, f).value, want);
          }
        }
      }
    }
  }
}

TEST(TSum, ClosedFormOnPrimePowers) {
  for (i64 p : {2, 3, 5, 7}) {
    i64 pa = 1;
    for (int alpha = 1; pa * p <= 1024; ++alpha) {
      pa *= p;
      for (int gamma = (alpha + 1) / 2; gamma <= alpha; ++gamma) {
        i64 pg = 1;
        for (int k = 0; k < gamma; ++k) pg *= p;
        for (i64 f = 1; f <= std::min<i64>(pg, 8); ++f) {
          if (f % p == 0) continue;
          for (i64 m : {-2, 1, 3}) {
            for (i64 n : {1, 5}) {
              expect_close(t_sum_closed_form(m, n, p, alpha, gamma, f), naive_t(m, n, pg, pa, f));
            }
          }
        }
      }
    }
  }
}

TEST(TSum, Bound) {
  EXPECT_NEAR(t_margin(1, 1, 1, 3, 0), 1.0 / (2.0 * std::sqrt(8.0) * std::sqrt(3.0)), 1e-12);
  for (i64 c = 1; c <= 200; ++c) {
    for (i64 q : divisors(c)) {
      for (i64 f = 0; f <= std::min<i64>(q, 4); ++f) {
        if (std::gcd(f, q) != 1) continue;
        for (i64 m : {-3, 1, 2, 6}) {
          for (i64 n : {-2, 1, 4}) EXPECT_LE(t_margin(m, n, q, c, f), 1.0 + 1e-10);
        }
      }
    }
  }
}

TEST(TSum, SumOverResiduesIsKloosterman) {
  for (i64 c : {12, 30, 64, 90}) {
    for (i64 q : divisors(c)) {
      cplx total{0.0, 0.0};
      for (i64 f = 0; f < q; ++f) {
        if (std::gcd(f, q) == 1) total += t_sum_fast(2, -3, q, c, f).value;
      }
      expect_close(total, kloosterman(2, -3, c).value);
    }
  }
}

TEST(FastMod, ReducesLikePercent) {
  std::mt19937_64 rng(3);
  for (i64 n : {i64{1}, i64{2}, i64{7}, i64{1000003}, (i64{1} << 26) - 5}) {
    const detail::FastMod fm(n);
    for (int i = 0; i < 2000; ++i) {
      const i64 v = std::uniform_int_distribution<i64>(0, (n - 1) * (n - 1))(rng);
      EXPECT_EQ(fm.reduce(v), v % n);
    }
  }
}
