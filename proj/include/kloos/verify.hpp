#pragma once

// Verification suites: every check reduces to a ratio that must not exceed 1
// (delta/tolerance for identities, |value|/bound for inequalities). A suite
// reports its worst ratio and the tuple that produced it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kloos/angle.hpp"
#include "kloos/apsums.hpp"
#include "kloos/characters.hpp"
#include "kloos/cusp_kloosterman.hpp"
#include "kloos/cusps.hpp"
#include "kloos/expsums.hpp"
#include "kloos/modular.hpp"
#include "kloos/parallel.hpp"

namespace kloos {

/// Slack granted to inequalities with explicit constants.
inline constexpr double kBoundSlack = 1e-10;

/// Grid maximum of |sum_r S_{r/q,r/q}| / ((c,Q/q) min{...}) over Q <= 24,
/// c q w_q <= 4Q, m, n in {-2,-1,1,2} (3.75877...), rounded up.
inline constexpr double kCor33RsumRatioMax = 3.759;

struct SuiteReport {
  std::string suite;
  u64 checks = 0;
  u64 failures = 0;
  double worst = 0.0;  // largest ratio seen; <= 1 means pass
  std::string worst_case;
  std::vector<std::string> failing;  // first few offending tuples

  bool passed() const { return failures == 0; }

  void record(double ratio, const std::function<std::string()>& label) {
    if (std::isnan(ratio)) ratio = std::numeric_limits<double>::infinity();
    ++checks;
    if (!(ratio <= 1.0)) {
      ++failures;
      if (failing.size() < 5) failing.push_back(label());
    }
    if (checks == 1 || ratio > worst) {
      worst = ratio;
      worst_case = label();
    }
  }

  void merge(const SuiteReport& o) {
    if (o.checks == 0) return;
    if (checks == 0 || o.worst > worst) {
      worst = o.worst;
      worst_case = o.worst_case;
    }
    checks += o.checks;
    failures += o.failures;
    for (const auto& f : o.failing) {
      if (failing.size() < 5) failing.push_back(f);
    }
  }
};

struct VerifyOptions {
  i64 max_Q = 0;   // 0: suite default
  i64 max_c = 0;   // 0: suite default
  i64 max_mn = 0;  // m, n range [-max_mn, max_mn]; 0: suite default
  int threads = 1;
  // decomposition: a single instance when prog is set
  std::optional<ProgressionSpec> prog;
  double C = 40.0;
  double B = 5.0;
  i64 m = 1;
  i64 n = 1;
};

namespace detail {

inline std::string describe_chi(const DirichletCharacter& chi) {
  std::ostringstream os;
  os << "chi=[";
  for (std::size_t i = 0; i < chi.exponents().size(); ++i) os << (i ? "," : "") << chi.exponents()[i];
  os << "]";
  return os.str();
}

inline std::vector<i64> mn_range(i64 max_mn, std::vector<i64> fallback, bool with_zero = false) {
  if (max_mn <= 0) return fallback;
  std::vector<i64> out;
  for (i64 v = -max_mn; v <= max_mn; ++v) {
    if (v != 0 || with_zero) out.push_back(v);
  }
  return out;
}

inline double identity_ratio(const IdentityCheck& chk) { return chk.delta / chk.tolerance; }

inline double bound_ratio(double margin) { return margin / (1.0 + kBoundSlack); }

// Runs body(item, report) for every item, spread over workers, and merges the
// per-item reports in item order.
template <typename Item, typename Body>
SuiteReport run_items(const std::string& name, const std::vector<Item>& items, int threads,
                      Body&& body) {
  std::vector<SuiteReport> parts(items.size());
  for_each_chunk(static_cast<i64>(items.size()), threads, [&](i64 i) {
    body(items[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(i)]);
  });
  SuiteReport out;
  out.suite = name;
  for (const auto& p : parts) out.merge(p);
  return out;
}

inline std::vector<i64> iota_from(i64 first, i64 last) {
  std::vector<i64> v;
  for (i64 x = first; x <= last; ++x) v.push_back(x);
  return v;
}

}  // namespace detail

/// (infinity, r/q) sums for Gamma_0(Q): evaluated formula against the coset
/// enumeration.
inline SuiteReport verify_lemma23(const VerifyOptions& o = {}) {
  const i64 max_q = o.max_Q ? o.max_Q : 36, max_c = o.max_c ? o.max_c : 12;
  const auto mns = detail::mn_range(o.max_mn, {-2, -1, 1, 2, 3});
  return detail::run_items("lemma23", detail::iota_from(1, max_q), o.threads, [&](i64 level, SuiteReport& rep) {
    for (i64 q : divisors(level)) {
      const i64 big_l = level / q;
      const auto chars = characters_mod(big_l);
      for (i64 r : cusp_numerators(level, q)) {
        for (const auto& chi : chars) {
          for (i64 c = 1; c <= max_c; ++c) {
            if (std::gcd(c, big_l) != 1) continue;
            for (i64 m : mns) {
              for (i64 n : mns) {
                CuspPairSumSpec s{level, q, r, chi, chi.parity(), m, n, c};
                const auto chk = make_identity_check(s_infty_rq(s), s_infty_rq_oracle(s));
                rep.record(detail::identity_ratio(chk), [&] {
                  std::ostringstream os;
                  os << "Q=" << level << " q=" << q << " r=" << r << " " << detail::describe_chi(chi)
                     << " m=" << m << " n=" << n << " c=" << c << " delta=" << chk.delta;
                  return os.str();
                });
              }
            }
          }
        }
      }
    }
  });
}

/// sum_r S_{infty,r/q} = (-i)^kappa conj(chi(c)) S(m,n;cq).
inline SuiteReport verify_rsum23(const VerifyOptions& o = {}) {
  const i64 max_q = o.max_Q ? o.max_Q : 36, max_c = o.max_c ? o.max_c : 12;
  const auto mns = detail::mn_range(o.max_mn, {-2, -1, 1, 2, 3});
  return detail::run_items("rsum23", detail::iota_from(1, max_q), o.threads, [&](i64 level, SuiteReport& rep) {
    for (i64 q : divisors(level)) {
      const i64 big_l = level / q;
      for (const auto& chi : characters_mod(big_l)) {
        for (i64 c = 1; c <= max_c; ++c) {
          if (std::gcd(c, big_l) != 1) continue;
          for (i64 m : mns) {
            for (i64 n : mns) {
              const auto chk = s_infty_rq_rsum(level, q, chi, chi.parity(), m, n, c);
              rep.record(detail::identity_ratio(chk), [&] {
                std::ostringstream os;
                os << "Q=" << level << " q=" << q << " " << detail::describe_chi(chi) << " m=" << m
                   << " n=" << n << " c=" << c << " delta=" << chk.delta;
                return os.str();
              });
            }
          }
        }
      }
    }
  });
}

namespace detail {

// Calls fn(q, kappa, c) for the Gamma_{0,+-1} grid: c q w_q a multiple of Q,
// at most mult * Q; kappa = 0 only when Q/q <= 2.
template <typename Fn>
void for_each_lemma24_tuple(i64 level, i64 mult, Fn&& fn) {
  for (i64 q : divisors(level)) {
    const i64 w = width(level, q);
    const int kappa_max = level / q > 2 ? 1 : 0;
    for (int kappa = 0; kappa <= kappa_max; ++kappa) {
      for (i64 c = 1; c * q * w <= mult * level; ++c) {
        if (c * q * w % level != 0) continue;
        fn(q, kappa, c);
      }
    }
  }
}

}  // namespace detail

/// (r/q, r/q) sums for Gamma_{0,+-1}(Q; Q/q): formula against coset enumeration.
inline SuiteReport verify_lemma24(const VerifyOptions& o = {}) {
  const i64 max_q = o.max_Q ? o.max_Q : 24, mult = o.max_c ? o.max_c : 4;
  const auto mns = detail::mn_range(o.max_mn, {-2, -1, 1, 2});
  return detail::run_items("lemma24", detail::iota_from(1, max_q), o.threads, [&](i64 level, SuiteReport& rep) {
    detail::for_each_lemma24_tuple(level, mult, [&](i64 q, int kappa, i64 c) {
      for (i64 r : cusp_numerators(level, q)) {
        for (i64 m : mns) {
          for (i64 n : mns) {
            CuspPairSumSpec s{level, q, r, std::nullopt, kappa, m, n, c};
            const auto chk = make_identity_check(s_rq_rq(s), s_rq_rq_oracle(s));
            rep.record(detail::identity_ratio(chk), [&] {
              std::ostringstream os;
              os << "Q=" << level << " q=" << q << " r=" << r << " kappa=" << kappa << " m=" << m
                 << " n=" << n << " c=" << c << " delta=" << chk.delta;
              return os.str();
            });
          }
        }
      }
    });
  });
}

/// Moebius-inverted expression for sum_r S_{r/q,r/q}.
inline SuiteReport verify_rsum24(const VerifyOptions& o = {}) {
  const i64 max_q = o.max_Q ? o.max_Q : 24, mult = o.max_c ? o.max_c : 4;
  const auto mns = detail::mn_range(o.max_mn, {-2, -1, 1, 2});
  return detail::run_items("rsum24", detail::iota_from(1, max_q), o.threads, [&](i64 level, SuiteReport& rep) {
    detail::for_each_lemma24_tuple(level, mult, [&](i64 q, int kappa, i64 c) {
      for (i64 m : mns) {
        for (i64 n : mns) {
          const auto chk = s_rq_rq_rsum(level, q, kappa, m, n, c);
          rep.record(detail::identity_ratio(chk), [&] {
            std::ostringstream os;
            os << "Q=" << level << " q=" << q << " kappa=" << kappa << " m=" << m << " n=" << n
               << " c=" << c << " delta=" << chk.delta;
            return os.str();
          });
        }
      }
    });
  });
}

/// |S(m,n;c)| <= tau(c) (m,n,c)^1/2 c^1/2.
inline SuiteReport verify_weil(const VerifyOptions& o = {}) {
  const i64 max_c = o.max_c ? o.max_c : 2000;
  const auto mns = detail::mn_range(o.max_mn ? o.max_mn : 5, {}, true);
  return detail::run_items("weil", detail::iota_from(1, max_c), o.threads, [&](i64 c, SuiteReport& rep) {
    for (i64 m : mns) {
      for (i64 n : mns) {
        if (m == 0 && n == 0) continue;
        const double margin = weil_margin(m, n, c);
        rep.record(detail::bound_ratio(margin), [&] {
          return "m=" + std::to_string(m) + " n=" + std::to_string(n) + " c=" + std::to_string(c) +
                 " margin=" + format_double(margin);
        });
      }
    }
  });
}

/// Gauss sums: vanishing unless (a,c) | b, the reduction by (a,c), and the
/// bound (a,c)^1/2 c^1/2 (times sqrt 2 when 2 | c/(a,c)).
inline SuiteReport verify_gauss(const VerifyOptions& o = {}) {
  const i64 max_c = o.max_c ? o.max_c : 500;
  const auto ab = detail::mn_range(o.max_mn ? o.max_mn : 6, {}, true);
  return detail::run_items("gauss", detail::iota_from(1, max_c), o.threads, [&](i64 c, SuiteReport& rep) {
    const ModulusTable table(c);
    for (i64 a : ab) {
      for (i64 b : ab) {
        const auto g = table.gauss(a, b);
        auto label = [&](const char* what) {
          return [=] {
            return std::string(what) + " a=" + std::to_string(a) + " b=" + std::to_string(b) +
                   " c=" + std::to_string(c) + " |G|=" + format_double(g.abs());
          };
        };
        const double tol = 1e-9 * static_cast<double>(c);
        const auto red = gauss_reduce(a, b, c);
        if (!red) {
          rep.record(g.abs() / tol, label("vanishing"));
        } else {
          const auto inner = gauss_sum(red->a, red->b, red->c);
          rep.record(std::abs(g.value - static_cast<double>(red->scale) * inner.value) / tol,
                     label("reduction"));
        }
        rep.record(detail::bound_ratio(g.abs() / gauss_bound(a, c)), label("bound"));
      }
    }
  });
}

/// |T_f(m,n;q|c)| <= 2^3/2 tau(c) min{c/q, (c/q,m,n)^1/2 c^1/2}.
inline SuiteReport verify_t_bound(const VerifyOptions& o = {}) {
  const i64 max_c = o.max_c ? o.max_c : 1000;
  const auto mns = detail::mn_range(o.max_mn ? o.max_mn : 3, {}, true);
  return detail::run_items("tbound", detail::iota_from(1, max_c), o.threads, [&](i64 c, SuiteReport& rep) {
    for (i64 q : divisors(c)) {
      for (i64 f = 1; f <= std::min<i64>(10, q); ++f) {
        if (std::gcd(f, q) != 1) continue;
        for (i64 m : mns) {
          for (i64 n : mns) {
            const double margin = t_margin(m, n, q, c, f);
            rep.record(detail::bound_ratio(margin), [&] {
              std::ostringstream os;
              os << "m=" << m << " n=" << n << " q=" << q << " c=" << c << " f=" << f
                 << " margin=" << format_double(margin);
              return os.str();
            });
          }
        }
      }
    }
  });
}

/// T_f(m,n;q|c) = T_f(m c2^-1, n c2^-1; q1|c1) T_f(m c1^-1, n c1^-1; q2|c2) for
/// every split c = c1 c2 with (c1,c2) = 1, q_i = (q, c_i). All three sums are
/// enumerated directly; q = 1 is the classical Kloosterman case.
inline SuiteReport verify_twisted_multiplicativity(const VerifyOptions& o = {}) {
  const i64 max_c = o.max_c ? o.max_c : 1000;
  const auto mns = detail::mn_range(o.max_mn ? o.max_mn : 3, {}, true);
  std::vector<std::optional<ModulusTable>> tables(static_cast<std::size_t>(max_c + 1));
  for (i64 c = 1; c <= max_c; ++c) tables[static_cast<std::size_t>(c)].emplace(c);
  auto table = [&](i64 c) -> const ModulusTable& { return *tables[static_cast<std::size_t>(c)]; };
  return detail::run_items("multiplicativity", detail::iota_from(1, max_c), o.threads,
                           [&](i64 c, SuiteReport& rep) {
    std::vector<i64> splits;
    for (i64 c1 : divisors(c)) {
      if (c1 > 1 && c1 * c1 < c && std::gcd(c1, c / c1) == 1) splits.push_back(c1);
    }
    if (splits.empty()) return;
    for (i64 q : divisors(c)) {
      for (i64 f = 1; f <= std::min<i64>(10, q); ++f) {
        if (std::gcd(f, q) != 1) continue;
        for (i64 m : mns) {
          for (i64 n : mns) {
            const auto whole = table(c).t_sum(m, n, q, f);
            for (i64 c1 : splits) {
              const i64 c2 = c / c1;
              const i64 q1 = std::gcd(q, c1), q2 = std::gcd(q, c2);
              const i64 u1 = mod_inverse(c2, c1), u2 = mod_inverse(c1, c2);
              const auto left = table(c1).t_sum(mulmod(mod(m, c1), u1, c1), mulmod(mod(n, c1), u1, c1), q1, f);
              const auto right = table(c2).t_sum(mulmod(mod(m, c2), u2, c2), mulmod(mod(n, c2), u2, c2), q2, f);
              const auto chk = make_identity_check(whole, {left.value * right.value, whole.term_count});
              rep.record(detail::identity_ratio(chk), [&] {
                std::ostringstream os;
                os << "m=" << m << " n=" << n << " q=" << q << " c=" << c1 << "*" << c2 << " f=" << f
                   << " delta=" << chk.delta;
                return os.str();
              });
            }
          }
        }
      }
    }
  });
}

/// For 1 <= gamma <= alpha <= 2 gamma the closed form of T_f(m,n;p^gamma|p^alpha)
/// agrees with direct enumeration, on all p^alpha <= max_c.
inline SuiteReport verify_closed_form(const VerifyOptions& o = {}) {
  const i64 max_pa = o.max_c ? o.max_c : 2048;
  const auto mns = detail::mn_range(o.max_mn ? o.max_mn : 3, {}, true);
  std::vector<PrimePower> powers;
  for (i64 x = 2; x <= max_pa; ++x) {
    const auto fac = factorize(x);
    if (fac.factors.size() == 1) powers.push_back(fac.factors.front());
  }
  return detail::run_items("closedform", powers, o.threads, [&](const PrimePower& pp, SuiteReport& rep) {
    const auto [p, alpha] = pp;
    const i64 pa = pp.value();
    const ModulusTable table(pa);
    for (int gamma = (alpha + 1) / 2; gamma <= alpha; ++gamma) {
      const i64 pg = PrimePower{p, gamma}.value();
      for (i64 f = 1; f <= std::min<i64>(10, pg); ++f) {
        if (f % p == 0) continue;
        for (i64 m : mns) {
          for (i64 n : mns) {
            const auto direct = table.t_sum(m, n, pg, f);
            const cplx closed = t_sum_closed_form(m, n, p, alpha, gamma, f);
            const double delta = std::abs(direct.value - closed);
            rep.record(delta / sum_tolerance(static_cast<double>(direct.term_count)), [&] {
              std::ostringstream os;
              os << "p=" << p << " alpha=" << alpha << " gamma=" << gamma << " f=" << f << " m=" << m
                 << " n=" << n << " delta=" << delta;
              return os.str();
            });
          }
        }
      }
    }
  });
}

inline SuiteReport verify_tsum_suite(const VerifyOptions& o = {}) {
  SuiteReport out;
  out.suite = "tbound";
  out.merge(verify_t_bound(o));
  out.merge(verify_twisted_multiplicativity(o));
  out.merge(verify_closed_form(o));
  return out;
}

/// |S^{sign,kappa}_{infty,infty}(m,n;c)| <= 2^5/2 tau(c) min{c/(Q/q), (c/(Q/q),m,n)^1/2 c^1/2}
/// for Q | c <= max_c Q.
inline SuiteReport verify_cor33_first(const VerifyOptions& o = {}) {
  const i64 max_q = o.max_Q ? o.max_Q : 24, mult = o.max_c ? o.max_c : 4;
  const auto mns = detail::mn_range(o.max_mn, {-2, -1, 1, 2});
  return detail::run_items("cor33", detail::iota_from(1, max_q), o.threads, [&](i64 level, SuiteReport& rep) {
    for (i64 q : divisors(level)) {
      const int kappa_max = level / q > 2 ? 1 : 0;
      for (int kappa = 0; kappa <= kappa_max; ++kappa) {
        for (i64 c = level; c <= mult * level; c += level) {
          for (i64 m : mns) {
            for (i64 n : mns) {
              const double margin = cor33_infty_margin(level, q, kappa, m, n, c);
              rep.record(detail::bound_ratio(margin), [&] {
                std::ostringstream os;
                os << "Q=" << level << " q=" << q << " kappa=" << kappa << " m=" << m << " n=" << n
                   << " c=" << c << " margin=" << format_double(margin);
                return os.str();
              });
            }
          }
        }
      }
    }
  });
}

/// Largest r-summed ratio over the rq-rq grid.
inline double cor33_rsum_grid_max(const VerifyOptions& o = {}) {
  const i64 max_q = o.max_Q ? o.max_Q : 24, mult = o.max_c ? o.max_c : 4;
  const auto mns = detail::mn_range(o.max_mn, {-2, -1, 1, 2});
  double worst = 0.0;
  for (i64 level = 1; level <= max_q; ++level) {
    detail::for_each_lemma24_tuple(level, mult, [&](i64 q, int kappa, i64 c) {
      for (i64 m : mns) {
        for (i64 n : mns) worst = std::max(worst, cor33_rsum_ratio(level, q, kappa, m, n, c));
      }
    });
  }
  return worst;
}

/// The r-summed ratio stays below the frozen grid maximum.
inline SuiteReport verify_cor33_second(const VerifyOptions& o = {}) {
  const i64 max_q = o.max_Q ? o.max_Q : 24, mult = o.max_c ? o.max_c : 4;
  const auto mns = detail::mn_range(o.max_mn, {-2, -1, 1, 2});
  return detail::run_items("cor33-rsum", detail::iota_from(1, max_q), o.threads, [&](i64 level, SuiteReport& rep) {
    detail::for_each_lemma24_tuple(level, mult, [&](i64 q, int kappa, i64 c) {
      for (i64 m : mns) {
        for (i64 n : mns) {
          const double ratio = cor33_rsum_ratio(level, q, kappa, m, n, c);
          rep.record(ratio / kCor33RsumRatioMax, [&] {
            std::ostringstream os;
            os << "Q=" << level << " q=" << q << " kappa=" << kappa << " m=" << m << " n=" << n
               << " c=" << c << " ratio=" << format_double(ratio);
            return os.str();
          });
        }
      }
    });
  });
}

inline SuiteReport verify_cor33(const VerifyOptions& o = {}) {
  SuiteReport out;
  out.suite = "cor33";
  out.merge(verify_cor33_first(o));
  out.merge(verify_cor33_second(o));
  return out;
}

/// Row orthogonality of the characters mod N for every N <= max_c. For
/// chi != psi the angles of chi psi-bar over the units form a multiset that is
/// invariant under the shift by a nonzero angle, which forces the sum to
/// vanish; this is checked exactly, the complex sum is checked to 1e-10.
inline SuiteReport verify_orthogonality(const VerifyOptions& o = {}) {
  const i64 max_n = o.max_c ? o.max_c : 60;
  return detail::run_items("orthogonality", detail::iota_from(1, max_n), o.threads, [&](i64 big_n, SuiteReport& rep) {
    const auto chars = characters_mod(big_n);
    std::vector<i64> units;
    for (i64 x = 1; x <= big_n; ++x) {
      if (std::gcd(x, big_n) == 1) units.push_back(x);
    }
    rep.record(static_cast<i64>(chars.size()) == euler_phi(big_n) ? 0.0 : 2.0,
               [&] { return "N=" + std::to_string(big_n) + " wrong character count"; });
    std::vector<std::vector<RationalAngle>> table;
    for (const auto& chi : chars) {
      std::vector<RationalAngle> row;
      for (i64 x : units) row.push_back(*chi.eval(x));
      table.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = 0; j < chars.size(); ++j) {
        std::vector<RationalAngle> diff;
        CompensatedComplexSum sum;
        for (std::size_t k = 0; k < units.size(); ++k) {
          diff.push_back(table[i][k] - table[j][k]);
          sum.add(to_complex(diff.back()));
        }
        const auto shift = std::find_if(diff.begin(), diff.end(), [](RationalAngle a) { return !a.is_zero(); });
        bool exact;
        if (shift == diff.end()) {
          exact = i == j;
        } else {
          auto moved = diff;
          for (auto& a : moved) a = a + *shift;
          std::sort(diff.begin(), diff.end());
          std::sort(moved.begin(), moved.end());
          exact = i != j && diff == moved;
        }
        const double expected = i == j ? static_cast<double>(units.size()) : 0.0;
        const double deviation = std::abs(sum.value() - expected);
        const double ratio = exact ? deviation / 1e-10 : 2.0 + deviation;
        rep.record(ratio, [&] {
          return "N=" + std::to_string(big_n) + " pair " + detail::describe_chi(chars[i]) + " " +
                 detail::describe_chi(chars[j]) + (exact ? "" : " (exact check failed)");
        });
      }
    }
  });
}

/// Smooth dyadic sum against its cusp decomposition; the default grid is
/// Q <= 12, m in {1,2}, n in {+-1,+-2}, C in {40,80}, B = C/8.
inline SuiteReport verify_decomposition(const VerifyOptions& o = {}) {
  struct Case {
    i64 m, n;
    ProgressionSpec prog;
    double C, B;
  };
  std::vector<Case> cases;
  if (o.prog) {
    cases.push_back({o.m, o.n, *o.prog, o.C, o.B});
  } else {
    const i64 max_q = o.max_Q ? o.max_Q : 12;
    for (i64 level = 1; level <= max_q; ++level) {
      for (i64 q : divisors(level)) {
        for (i64 a = 1; a <= level / q; ++a) {
          if (std::gcd(a, level / q) != 1) continue;
          for (i64 m : {1, 2}) {
            for (i64 n : {-2, -1, 1, 2}) {
              for (double C : {40.0, 80.0}) cases.push_back({m, n, {a, q, level}, C, C / 8.0});
            }
          }
        }
      }
    }
  }
  return detail::run_items("decomposition", cases, o.threads, [&](const Case& k, SuiteReport& rep) {
    const auto d = decomposition_check(k.m, k.n, k.prog, k.C, k.B);
    rep.record(d.delta / d.tolerance, [&] {
      std::ostringstream os;
      os << "m=" << k.m << " n=" << k.n << " a=" << k.prog.a << " q=" << k.prog.q << " Q=" << k.prog.level
         << " C=" << k.C << " B=" << k.B << " delta=" << d.delta << " terms=" << d.terms;
      return os.str();
    });
  });
}

/// kloosterman_fast and t_sum_fast against direct enumeration: every c <= max_c
/// (m, n in [-3,3]; all q | c, f <= 10), then `samples` random c <= 10^6.
inline SuiteReport verify_fast_paths(const VerifyOptions& o = {}, int samples = 1000,
                                     u64 seed = 20240601) {
  const i64 max_c = o.max_c ? o.max_c : 600;
  const auto mns = detail::mn_range(o.max_mn ? o.max_mn : 3, {}, true);
  auto exhaustive = detail::run_items("fastpath", detail::iota_from(1, max_c), o.threads, [&](i64 c, SuiteReport& rep) {
    const ModulusTable table(c);
    for (i64 m : mns) {
      for (i64 n : mns) {
        const auto chk = make_identity_check(table.kloosterman(m, n), kloosterman_fast(m, n, c));
        rep.record(detail::identity_ratio(chk), [&] {
          return "S m=" + std::to_string(m) + " n=" + std::to_string(n) + " c=" + std::to_string(c);
        });
        for (i64 q : divisors(c)) {
          for (i64 f = 1; f <= std::min<i64>(10, q); ++f) {
            if (std::gcd(f, q) != 1) continue;
            const auto t = make_identity_check(table.t_sum(m, n, q, f), t_sum_fast(m, n, q, c, f));
            rep.record(detail::identity_ratio(t), [&] {
              return "T m=" + std::to_string(m) + " n=" + std::to_string(n) + " q=" + std::to_string(q) +
                     " c=" + std::to_string(c) + " f=" + std::to_string(f);
            });
          }
        }
      }
    }
  });

  struct Sample {
    i64 c, q, f, m, n;
  };
  std::mt19937_64 rng(seed);
  std::vector<Sample> picks;
  for (int i = 0; i < samples; ++i) {
    const i64 c = std::uniform_int_distribution<i64>(1, 1'000'000)(rng);
    const auto divs = divisors(c);
    const i64 q = divs[std::uniform_int_distribution<std::size_t>(0, divs.size() - 1)(rng)];
    i64 f = std::uniform_int_distribution<i64>(1, q)(rng);
    while (std::gcd(f, q) != 1) f = f % q + 1;
    const i64 m = std::uniform_int_distribution<i64>(-50, 50)(rng);
    const i64 n = std::uniform_int_distribution<i64>(-50, 50)(rng);
    picks.push_back({c, q, f, m, n});
  }
  auto random = detail::run_items("fastpath-random", picks, o.threads, [&](const Sample& s, SuiteReport& rep) {
    const ModulusTable table(s.c);
    auto label = [&](const char* what) {
      return [=] {
        std::ostringstream os;
        os << what << " m=" << s.m << " n=" << s.n << " q=" << s.q << " c=" << s.c << " f=" << s.f;
        return os.str();
      };
    };
    rep.record(detail::identity_ratio(make_identity_check(table.kloosterman(s.m, s.n),
                                                          kloosterman_fast(s.m, s.n, s.c))),
               label("S"));
    rep.record(detail::identity_ratio(make_identity_check(table.t_sum(s.m, s.n, s.q, s.f),
                                                          t_sum_fast(s.m, s.n, s.q, s.c, s.f))),
               label("T"));
  });
  SuiteReport out;
  out.suite = "fastpath";
  out.merge(exhaustive);
  out.merge(random);
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma23", "lemma24", "rsum23",        "rsum24",
                                              "weil",    "gauss",   "tbound",        "cor33",
                                              "orthogonality", "decomposition", "fastpath"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const VerifyOptions& o) {
  static const std::map<std::string, std::function<SuiteReport(const VerifyOptions&)>> table{
      {"lemma23", [](const VerifyOptions& x) { return verify_lemma23(x); }},
      {"lemma24", [](const VerifyOptions& x) { return verify_lemma24(x); }},
      {"rsum23", [](const VerifyOptions& x) { return verify_rsum23(x); }},
      {"rsum24", [](const VerifyOptions& x) { return verify_rsum24(x); }},
      {"weil", [](const VerifyOptions& x) { return verify_weil(x); }},
      {"gauss", [](const VerifyOptions& x) { return verify_gauss(x); }},
      {"tbound", [](const VerifyOptions& x) { return verify_tsum_suite(x); }},
      {"cor33", [](const VerifyOptions& x) { return verify_cor33(x); }},
      {"orthogonality", [](const VerifyOptions& x) { return verify_orthogonality(x); }},
      {"decomposition", [](const VerifyOptions& x) { return verify_decomposition(x); }},
      {"fastpath", [](const VerifyOptions& x) { return verify_fast_paths(x); }},
  };
  const auto it = table.find(name);
  require(it != table.end(), "unknown suite '" + name + "'");
  auto rep = it->second(o);
  rep.suite = name;
  return rep;
}

}  // namespace kloos
