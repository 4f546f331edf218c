#include <gtest/gtest.h>

#include <random>

#include "kloos/modular.hpp"

using namespace kloos;

namespace {

i64 naive_gcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  for (i64 d = std::max(a, b); d >= 1; --d) {
    if (a % d == 0 && b % d == 0) return d;
  }
  return 0;
}

i64 naive_phi(i64 n) {
  i64 count = 0;
  for (i64 k = 1; k <= n; ++k) count += naive_gcd(k, n) == 1;
  return count;
}

}  // namespace

TEST(Mod, LeastNonNegativeResidue) {
  EXPECT_EQ(mod(-7, 5), 3);
  EXPECT_EQ(mod(7, 5), 2);
  EXPECT_EQ(mod(0, 1), 0);
  EXPECT_EQ(mod_wide(-(static_cast<i128>(1) << 80), 7), 3);  // 2^80 = 4 (mod 7)
  EXPECT_EQ(mulmod(-3, 4, 7), 2);
  EXPECT_EQ(mulmod(i64{1} << 40, i64{1} << 40, 1'000'000'007), static_cast<i64>((static_cast<i128>(1) << 80) % 1'000'000'007));
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(7, 40), 23);
  EXPECT_EQ(mod_inverse(3, 1), 0);
  EXPECT_EQ(mod_inverse(-1, 10), 9);
  EXPECT_THROW(mod_inverse(6, 9), NotInvertible);
  EXPECT_THROW(mod_inverse(0, 4), NotInvertible);
}

TEST(ModInverse, IsInverseForAllUnits) {
  for (i64 n = 1; n <= 200; ++n) {
    for (i64 a = 0; a < n; ++a) {
      if (std::gcd(a, n) != 1) continue;
      EXPECT_EQ(mulmod(a, mod_inverse(a, n), n), 1 % n) << a << " mod " << n;
    }
  }
}

TEST(IsPrime, SmallAgainstTrialDivision) {
  for (u64 n = 0; n < 5000; ++n) {
    bool prime = n >= 2;
    for (u64 d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
    EXPECT_EQ(is_prime(n), prime) << n;
  }
}

TEST(IsPrime, LargeKnownValues) {
  EXPECT_TRUE(is_prime(9999999967ULL));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest prime below 2^64
  EXPECT_FALSE(is_prime(3215031751ULL));           // strong pseudoprime to 2,3,5,7
  EXPECT_FALSE(is_prime(3825123056546413051ULL));
}

TEST(Factorize, Examples) {
  const auto f = factorize(9999999967);
  ASSERT_EQ(f.factors.size(), 1u);
  EXPECT_EQ(f.factors[0], (PrimePower{9999999967, 1}));

  const auto g = factorize(720);
  EXPECT_EQ(g.factors, (std::vector<PrimePower>{{2, 4}, {3, 2}, {5, 1}}));
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_THROW(factorize(0), PreconditionViolation);
}

TEST(Factorize, SemiprimeBeyondTrialDivision) {
  const i64 p = 1'000'003, q = 1'000'033;
  const auto f = factorize(p * q);
  EXPECT_EQ(f.factors, (std::vector<PrimePower>{{p, 1}, {q, 1}}));
  const auto g = factorize(p * p * 3);
  EXPECT_EQ(g.factors, (std::vector<PrimePower>{{3, 1}, {p, 2}}));
}

TEST(Factorize, ProductRoundTripRandom) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const i64 n = std::uniform_int_distribution<i64>(1, i64{1} << 62)(rng);
    const auto f = factorize(n);
    EXPECT_EQ(f.product(), n);
    for (std::size_t k = 0; k < f.factors.size(); ++k) {
      EXPECT_TRUE(is_prime(static_cast<u64>(f.factors[k].prime)));
      if (k > 0) {
        EXPECT_LT(f.factors[k - 1].prime, f.factors[k].prime);
      }
    }
  }
}

TEST(MultiplicativeFunctions, AgainstNaive) {
  for (i64 n = 1; n <= 300; ++n) {
    EXPECT_EQ(euler_phi(n), naive_phi(n)) << n;
    i64 t = 0;
    for (i64 d = 1; d <= n; ++d) t += n % d == 0;
    EXPECT_EQ(tau(n), t) << n;
  }
  EXPECT_EQ(moebius(1), 1);
  EXPECT_EQ(moebius(30), -1);
  EXPECT_EQ(moebius(12), 0);
  EXPECT_EQ(moebius(35), 1);
}

TEST(MultiplicativeFunctions, MoebiusSumsToDelta) {
  for (i64 n = 1; n <= 500; ++n) {
    i64 s = 0;
    for (i64 d : divisors(n)) s += moebius(d);
    EXPECT_EQ(s, n == 1 ? 1 : 0) << n;
  }
}

TEST(Divisors, SortedAndComplete) {
  EXPECT_EQ(divisors(12), (std::vector<i64>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(1), (std::vector<i64>{1}));
  for (i64 n = 1; n <= 200; ++n) {
    const auto d = divisors(n);
    EXPECT_EQ(static_cast<i64>(d.size()), tau(n));
    EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
    for (i64 x : d) EXPECT_EQ(n % x, 0);
  }
}

TEST(Divisors, LimitExceeded) {
  Factorization f;
  f.value = 0;  // never multiplied out
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71}) {
    f.factors.push_back({p, 1});
  }
  EXPECT_THROW(divisors(f), DivisorLimitExceeded);
}

TEST(Valuation, Basics) {
  EXPECT_EQ(valuation(48, 2, 10), 4);
  EXPECT_EQ(valuation(48, 3, 10), 1);
  EXPECT_EQ(valuation(0, 5, 7), 7);
  EXPECT_EQ(valuation(1024, 2, 3), 3);
}

TEST(Crt, Examples) {
  EXPECT_EQ(crt_combine({{1, 2}, {2, 3}}), 5);
  i64 scan = 0;
  while (!(scan % 5 == 3 && scan % 7 == 4 && scan % 9 == 1)) ++scan;
  EXPECT_EQ(scan, 298);
  EXPECT_EQ(crt_combine({{3, 5}, {4, 7}, {1, 9}}), scan);
  EXPECT_EQ(crt_combine({{0, 1}}), 0);
  EXPECT_THROW(crt_combine({{1, 4}, {3, 6}}), NonCoprimeModuli);
}

TEST(Crt, SolutionSatisfiesEveryCongruence) {
  std::mt19937_64 rng(11);
  const std::vector<i64> moduli{8, 9, 25, 7, 11, 13};
  for (int i = 0; i < 200; ++i) {
    std::vector<Congruence> sys;
    for (i64 m : moduli) sys.push_back({std::uniform_int_distribution<i64>(-1000, 1000)(rng), m});
    const i64 x = crt_combine(sys);
    EXPECT_GE(x, 0);
    EXPECT_LT(x, 8 * 9 * 25 * 7 * 11 * 13);
    for (const auto& c : sys) EXPECT_EQ(mod(x, c.modulus), mod(c.residue, c.modulus));
  }
}

TEST(PrimitiveRoot, GeneratesUnitGroup) {
  for (i64 pk : {3, 5, 7, 9, 25, 27, 49, 121, 125, 343}) {
    const auto f = factorize(pk);
    const i64 p = f.factors[0].prime;
    const i64 g = primitive_root(p, pk);
    i64 x = 1, order = 0;
    do {
      x = mulmod(x, g, pk);
      ++order;
    } while (x != 1);
    EXPECT_EQ(order, euler_phi(pk)) << pk;
  }
}
