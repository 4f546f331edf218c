#pragma once

// Kloosterman sums attached to cusp pairs of Gamma_0(Q) (character multiplier
// chi mod Q/q) and of Gamma_{0,+-1}(Q; Q/q) (multiplier sign^kappa_{Q/q}).
//
// Every closed-form evaluator has a companion *_oracle that enumerates the
// double cosets B \ sigma_a^-1 Gamma sigma_b / B directly, with d lifted to
// the full modulus c q w_q and the multiplier read off the conjugated matrix.
// The two are meant to be compared, never merged.

#include <cmath>
#include <optional>
#include <vector>

#include "kloos/angle.hpp"
#include "kloos/characters.hpp"
#include "kloos/cusps.hpp"
#include "kloos/expsums.hpp"
#include "kloos/modular.hpp"

namespace kloos {

/// The tuple (Q, q, r, chi, kappa, m, n, c). chi is only consulted by the
/// (infinity, r/q) sums for Gamma_0(Q).
struct CuspPairSumSpec {
  i64 level = 1;
  i64 q = 1;
  i64 r = 1;
  std::optional<DirichletCharacter> chi;
  int kappa = 0;
  i64 m = 1;
  i64 n = 1;
  i64 c = 1;
};

/// Both sides of an identity, evaluated independently.
struct IdentityCheck {
  RootOfUnitySum lhs;
  RootOfUnitySum rhs;
  double delta = 0.0;
  double tolerance = 0.0;

  bool holds() const { return delta <= tolerance; }
};

inline IdentityCheck make_identity_check(RootOfUnitySum lhs, RootOfUnitySum rhs) {
  const double terms = static_cast<double>(std::max(lhs.term_count, rhs.term_count));
  return {lhs, rhs, std::abs(lhs.value - rhs.value), sum_tolerance(terms)};
}

namespace detail {

template <typename Fn>
void for_each_unit_pair(i64 modulus, Fn&& fn) {
  for (i64 a = 0; a < modulus; ++a) {
    if (std::gcd(a, modulus) != 1) continue;
    fn(a, mod_inverse(a, modulus));
  }
}

inline i64 lin_mod(i64 m, i64 a, i64 n, i64 d, i64 modulus) {
  return mod_wide(static_cast<i128>(m) * a + static_cast<i128>(n) * d, modulus);
}

inline void check_kappa(int kappa) { require(kappa == 0 || kappa == 1, "kappa must be 0 or 1"); }

inline void check_infty_rq(const CuspPairSumSpec& s) {
  check_cusp(s.level, s.q, s.r);
  check_kappa(s.kappa);
  require(s.c >= 1, "c must be >= 1");
  require(s.chi.has_value(), "(infinity, r/q) sums need a character");
  const i64 big_l = s.level / s.q;
  require(s.chi->modulus() == big_l, "character modulus must be Q/q");
  require(s.chi->parity() == s.kappa, "character parity must equal kappa");
  require(allowed_modulus_infty_rq(s.level, s.q, s.c), "c must be coprime to Q/q");
}

inline void check_gamma01_kappa(i64 level, i64 q, int kappa) {
  check_kappa(kappa);
  require(level / q > 2 || kappa == 0, "kappa must be 0 when Q/q is 1 or 2");
}

inline void check_rq_rq(i64 level, i64 q, i64 r, int kappa, i64 c) {
  check_cusp(level, q, r);
  check_gamma01_kappa(level, q, kappa);
  require(c >= 1, "c must be >= 1");
  const i64 w = width(level, q);
  require(static_cast<i128>(c) * q * w % level == 0, "c q w_q must be a multiple of Q");
}

// The sign classes +1 and -1 mod Q/q are distinct exactly when Q/q > 2.
inline std::vector<int> sign_branches(i64 big_l) {
  return big_l > 2 ? std::vector<int>{1, -1} : std::vector<int>{1};
}

inline double sign_weight(int eps, int kappa) { return (eps < 0 && kappa == 1) ? -1.0 : 1.0; }

}  // namespace detail

/// S^{chi,kappa}_{infty,r/q}(m, n w_q; c q sqrt w_q)
///   = (-i)^kappa conj(chi(c)) sum_{ad = 1 (cq), d = c r^-1 ((q,Q/q))} e((ma+nd)/(cq)).
inline RootOfUnitySum s_infty_rq(const CuspPairSumSpec& s) {
  detail::check_infty_rq(s);
  const i64 big_l = s.level / s.q;
  const i64 g = std::gcd(s.q, big_l);
  const i64 target = mulmod(s.c, mod_inverse(s.r, g), g);
  const i64 modulus = s.c * s.q;
  CompensatedComplexSum sum;
  u64 terms = 0;
  detail::for_each_unit_pair(modulus, [&](i64 a, i64 d) {
    if (d % g != target) return;
    sum.add(unit_root(detail::lin_mod(s.m, a, s.n, d, modulus), modulus));
    ++terms;
  });
  const cplx prefactor = minus_i_pow(s.kappa) * std::conj(s.chi->value(s.c));
  return {prefactor * sum.value(), terms};
}

/// Coset enumeration: a mod cq, d mod c q w_q, ad = 1 (cq), d = c y (Q/q),
/// weighted by conj(chi(d r - c q x)).
inline RootOfUnitySum s_infty_rq_oracle(const CuspPairSumSpec& s) {
  detail::check_infty_rq(s);
  const auto sm = scaling_matrix(s.level, s.q, s.r);
  const i64 big_l = s.level / s.q;
  const i64 modulus = s.c * s.q;
  const i64 lift = sm.width;
  const i64 dy = mulmod(s.c, sm.y, big_l);
  const i64 cqx = mulmod(modulus, sm.x, big_l);
  CompensatedComplexSum sum;
  u64 terms = 0;
  detail::for_each_unit_pair(modulus, [&](i64 a, i64 d0) {
    for (i64 l = 0; l < lift; ++l) {
      const i64 d = d0 + l * modulus;
      if (mod(d, big_l) != dy) continue;
      const auto angle = s.chi->eval(mod_wide(static_cast<i128>(mulmod(d, s.r, big_l)) - cqx, big_l));
      require(angle.has_value(), "oracle: multiplier argument not a unit");
      sum.add(unit_root(detail::lin_mod(s.m, a, s.n, d, modulus), modulus) * to_complex(-*angle));
      ++terms;
    }
  });
  return {minus_i_pow(s.kappa) * sum.value(), terms};
}

/// sum_r S_{infty,r/q} against (-i)^kappa conj(chi(c)) S(m,n;cq).
inline IdentityCheck s_infty_rq_rsum(i64 level, i64 q, const DirichletCharacter& chi, int kappa,
                                     i64 m, i64 n, i64 c) {
  CuspPairSumSpec s{level, q, 1, chi, kappa, m, n, c};
  CompensatedComplexSum left;
  u64 terms = 0;
  for (i64 r : cusp_numerators(level, q)) {
    s.r = r;
    const auto part = s_infty_rq(s);
    left.add(part.value);
    terms += part.term_count;
  }
  const auto classical = kloosterman(m, n, c * q);
  const cplx prefactor = minus_i_pow(kappa) * std::conj(chi.value(c));
  return make_identity_check({left.value(), terms},
                             {prefactor * classical.value, classical.term_count});
}

/// S^{sign,kappa}_{infty,infty}(m,n;c) for Gamma_{0,+-1}(Q;Q/q), Q | c.
inline RootOfUnitySum s_gamma01_infty_infty(i64 level, i64 q, int kappa, i64 m, i64 n, i64 c) {
  check_divides(q, level);
  detail::check_gamma01_kappa(level, q, kappa);
  require(c >= 1 && c % level == 0, "c must be a positive multiple of Q");
  const i64 big_l = level / q;
  const i64 plus = mod(1, big_l), minus = mod(-1, big_l);
  CompensatedComplexSum sum;
  u64 terms = 0;
  detail::for_each_unit_pair(c, [&](i64 a, i64 d) {
    const i64 ar = a % big_l, dr = d % big_l;
    double w;
    if (ar == plus && dr == plus) {
      w = 1.0;
    } else if (ar == minus && dr == minus) {
      w = detail::sign_weight(-1, kappa);
    } else {
      return;
    }
    sum.add(w * unit_root(detail::lin_mod(m, a, n, d, c), c));
    ++terms;
  });
  return {minus_i_pow(kappa) * sum.value(), terms};
}

/// S^{sign,kappa}_{r/q,r/q}(m w_q, n w_q; c q w_q)
///   = (-i)^kappa (c,w_q) sum_eps eps^kappa
///       sum_{a,d mod cq, ad = 1, a + cy = d - cy = eps ((cq,Q/q))} e((ma+nd)/(cq)).
/// The eps branches are counted separately whenever Q/q > 2, even if they
/// coincide modulo (cq, Q/q).
inline RootOfUnitySum s_rq_rq(const CuspPairSumSpec& s) {
  detail::check_rq_rq(s.level, s.q, s.r, s.kappa, s.c);
  const auto sm = scaling_matrix(s.level, s.q, s.r);
  const i64 big_l = s.level / s.q;
  const i64 modulus = s.c * s.q;
  const i64 f = std::gcd(modulus, big_l);
  const i64 cw = std::gcd(s.c, sm.width);
  const i64 cy = mulmod(s.c, sm.y, f);
  CompensatedComplexSum sum;
  u64 terms = 0;
  for (int eps : detail::sign_branches(big_l)) {
    const double weight = detail::sign_weight(eps, s.kappa);
    detail::for_each_unit_pair(modulus, [&](i64 a, i64 d) {
      if (mod(a + cy - eps, f) != 0 || mod(d - cy - eps, f) != 0) return;
      sum.add(weight * unit_root(detail::lin_mod(s.m, a, s.n, d, modulus), modulus));
      ++terms;
    });
  }
  return {minus_i_pow(s.kappa) * static_cast<double>(cw) * sum.value(),
          terms * static_cast<u64>(cw)};
}

/// Coset enumeration before the (c, w_q)-to-1 collapse: a, d mod c q w_q with
/// a + cy = d - cy = +-1 (Q/q), ad = 1 (cq), (a + cy)(d - cy) = 1 (c Q/q).
inline RootOfUnitySum s_rq_rq_oracle(const CuspPairSumSpec& s) {
  detail::check_rq_rq(s.level, s.q, s.r, s.kappa, s.c);
  const auto sm = scaling_matrix(s.level, s.q, s.r);
  const i64 big_l = s.level / s.q;
  const i64 modulus = s.c * s.q;
  const i64 lift = sm.width;
  const i64 cl = s.c * big_l;
  const i64 cy = mulmod(s.c, sm.y, cl);
  const i64 plus = mod(1, big_l), minus = mod(-1, big_l);
  CompensatedComplexSum sum;
  u64 terms = 0;
  detail::for_each_unit_pair(modulus, [&](i64 a0, i64 d0) {
    for (i64 l1 = 0; l1 < lift; ++l1) {
      const i64 a = a0 + l1 * modulus;
      const i64 upper = mod(a + cy, cl);
      for (i64 l2 = 0; l2 < lift; ++l2) {
        const i64 d = d0 + l2 * modulus;
        const i64 lower = mod(d - cy, cl);
        double w;
        if (upper % big_l == plus && lower % big_l == plus) {
          w = 1.0;
        } else if (upper % big_l == minus && lower % big_l == minus) {
          w = detail::sign_weight(-1, s.kappa);
        } else {
          continue;
        }
        if (mulmod(upper, lower, cl) != mod(1, cl)) continue;
        sum.add(w * unit_root(detail::lin_mod(s.m, a, s.n, d, modulus), modulus));
        ++terms;
      }
    }
  });
  return {minus_i_pow(s.kappa) * sum.value(), terms};
}

/// sum_r S_{r/q,r/q} against the Moebius-inverted expression
///   (-i)^kappa (c,w_q) phi((q,Q/q)) / phi((q, Q/(q (c,Q/q))))
///     sum_{(c,Q/q) | f | (cq,Q/q)} mu(f/(c,Q/q))
///       sum_eps eps^kappa sum_{a,d mod cq, a = d = eps (f), ad = 1 (cq)} e((ma+nd)/(cq)).
inline IdentityCheck s_rq_rq_rsum(i64 level, i64 q, int kappa, i64 m, i64 n, i64 c) {
  CuspPairSumSpec s{level, q, 1, std::nullopt, kappa, m, n, c};
  CompensatedComplexSum left;
  u64 left_terms = 0;
  for (i64 r : cusp_numerators(level, q)) {
    s.r = r;
    const auto part = s_rq_rq(s);
    left.add(part.value);
    left_terms += part.term_count;
  }

  const i64 big_l = level / q;
  const i64 modulus = c * q;
  const i64 c1 = std::gcd(c, big_l);
  const i64 f_max = std::gcd(modulus, big_l);
  const i64 cw = std::gcd(c, width(level, q));
  const double ratio = static_cast<double>(euler_phi(std::gcd(q, big_l))) /
                       static_cast<double>(euler_phi(std::gcd(q, big_l / c1)));
  CompensatedComplexSum right;
  u64 right_terms = 0;
  for (i64 f : divisors(f_max)) {
    if (f % c1 != 0) continue;
    const int mu = moebius(f / c1);
    if (mu == 0) continue;
    for (int eps : detail::sign_branches(big_l)) {
      const double weight = mu * detail::sign_weight(eps, kappa);
      detail::for_each_unit_pair(modulus, [&](i64 a, i64 d) {
        if (mod(a - eps, f) != 0 || mod(d - eps, f) != 0) return;
        right.add(weight * unit_root(detail::lin_mod(m, a, n, d, modulus), modulus));
        ++right_terms;
      });
    }
  }
  const cplx prefactor = minus_i_pow(kappa) * (static_cast<double>(cw) * ratio);
  return make_identity_check({left.value(), left_terms},
                             {prefactor * right.value(), right_terms * static_cast<u64>(cw)});
}

/// |S_{infty,infty}| / (2^(5/2) tau(c) min{c/(Q/q), (c/(Q/q), m, n)^1/2 c^1/2}).
inline double cor33_infty_margin(i64 level, i64 q, int kappa, i64 m, i64 n, i64 c) {
  const auto s = s_gamma01_infty_infty(level, q, kappa, m, n, c);
  const i64 cl = c / (level / q);
  const double second =
      std::sqrt(static_cast<double>(gcd(cl, m, n))) * std::sqrt(static_cast<double>(c));
  const double bound = 4.0 * std::numbers::sqrt2 * static_cast<double>(tau(c)) *
                       std::min(static_cast<double>(cl), second);
  return s.abs() / bound;
}

/// |sum_r S_{r/q,r/q}| / ((c,Q/q) min{cq/(c,Q/q), (cq/(c,Q/q), m, n)^1/2 (cq)^1/2}).
/// The true bound carries an unquantified (cQ)^o(1) constant, so this ratio is
/// tracked empirically rather than compared with 1.
inline double cor33_rsum_ratio(i64 level, i64 q, int kappa, i64 m, i64 n, i64 c) {
  const auto check = s_rq_rq_rsum(level, q, kappa, m, n, c);
  const i64 c1 = std::gcd(c, level / q);
  const i64 cq = c * q;
  const double second =
      std::sqrt(static_cast<double>(gcd(cq / c1, m, n))) * std::sqrt(static_cast<double>(cq));
  const double bound = static_cast<double>(c1) * std::min(static_cast<double>(cq / c1), second);
  return check.lhs.abs() / bound;
}

}  // namespace kloos
