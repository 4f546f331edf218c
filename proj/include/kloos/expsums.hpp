#pragma once

// Classical Kloosterman sums S(m,n;c), quadratic Gauss sums G(a,b;c) and the
// restricted sums
//
//   T_f(m,n; q|c) = sum*_{a mod c, a = f (q)} e((m a + n a^-1)/c),
//
// each with a direct evaluator (the oracle) and, where one exists, a fast
// path built from CRT twisted multiplicativity and the prime-power
// reductions.

#include <cmath>
#include <optional>
#include <vector>

#include "kloos/angle.hpp"
#include "kloos/modular.hpp"

namespace kloos {

namespace detail {

// inv[a] = a^-1 mod p^k for units a, 0 elsewhere.
inline std::vector<i64> prime_power_inverses(i64 p, i64 pk) {
  std::vector<i64> inv(static_cast<std::size_t>(pk), 0);
  if (pk == 1) return inv;
  inv[1] = 1;
  if (pk == p) {
    for (i64 i = 2; i < pk; ++i) {
      inv[static_cast<std::size_t>(i)] =
          mulmod(pk - pk / i, inv[static_cast<std::size_t>(pk % i)], pk);
    }
    return inv;
  }
  // Batch inversion over the units via prefix products.
  std::vector<i64> prefix;
  prefix.reserve(static_cast<std::size_t>(pk));
  i64 acc = 1;
  for (i64 a = 1; a < pk; ++a) {
    if (a % p == 0) continue;
    acc = mulmod(acc, a, pk);
    prefix.push_back(acc);
  }
  i64 back = mod_inverse(acc, pk);
  std::size_t idx = prefix.size();
  for (i64 a = pk - 1; a >= 1; --a) {
    if (a % p == 0) continue;
    --idx;
    const i64 before = idx == 0 ? 1 : prefix[idx - 1];
    inv[static_cast<std::size_t>(a)] = mulmod(back, before, pk);
    back = mulmod(back, a, pk);
  }
  return inv;
}

// Products of residues below 2^26 stay exact in a double, so the quotient
// can be taken in floating point.
inline constexpr i64 kFastModLimit = i64{1} << 26;

struct FastMod {
  i64 n;
  double inv;

  explicit FastMod(i64 modulus) : n(modulus), inv(1.0 / static_cast<double>(modulus)) {}

  // v in [0, 2^53)
  i64 reduce(i64 v) const {
    i64 r = v - static_cast<i64>(static_cast<double>(v) * inv) * n;
    if (r < 0) r += n;
    if (r >= n) r -= n;
    return r;
  }
};

// cos(2 pi j/n) for 0 <= j <= n/2, rotating by e(1/n) and re-anchoring every
// 64 steps. Callers fold j > n/2 to n - j.
inline std::vector<double> cos_table(i64 n) {
  std::vector<double> out(static_cast<std::size_t>(n / 2 + 1));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  const double wr = std::cos(step), wi = std::sin(step);
  double zr = 1.0, zi = 0.0;
  for (i64 j = 0; j <= n / 2; ++j) {
    if (j % 64 == 0) {
      const cplx z = unit_root(j, n);
      zr = z.real();
      zi = z.imag();
    }
    out[static_cast<std::size_t>(j)] = zr;
    const double t = zr * wr - zi * wi;
    zi = zr * wi + zi * wr;
    zr = t;
  }
  return out;
}

// e(j/n) for 0 <= j < n, by the same anchored rotation as cos_table.
inline std::vector<cplx> root_table(i64 n) {
  std::vector<cplx> out(static_cast<std::size_t>(n));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  const double wr = std::cos(step), wi = std::sin(step);
  double zr = 1.0, zi = 0.0;
  for (i64 j = 0; j < n; ++j) {
    if (j % 64 == 0) {
      const cplx z = unit_root(j, n);
      zr = z.real();
      zi = z.imag();
    }
    out[static_cast<std::size_t>(j)] = {zr, zi};
    const double t = zr * wr - zi * wi;
    zi = zr * wi + zi * wr;
    zr = t;
  }
  return out;
}

// S(m,n;p) for an odd prime p < 2^26: a = g^k runs over one of each pair
// {a, -a} for 0 <= k < (p-1)/2, and a^-1 = g^-k.
inline double kloosterman_odd_prime_real(i64 m, i64 n, i64 p) {
  const FastMod fm(p);
  const i64 g = primitive_root(p, p);
  const i64 g_inv = mod_inverse(g, p);
  const auto table = cos_table(p);
  const i64 mr = mod(m, p), nr = mod(n, p);
  i64 x = 1, y = 1;
  CompensatedSum sum;
  for (i64 k = 0; 2 * k < p - 1; ++k) {
    const i64 j = fm.reduce(mr * x + nr * y);
    sum.add(table[static_cast<std::size_t>(2 * j > p ? p - j : j)]);
    x = fm.reduce(x * g);
    y = fm.reduce(y * g_inv);
  }
  return 2.0 * sum.value();
}

// S(m,n;p^k) by pairing a with -a; the result is exactly real.
inline double kloosterman_prime_power_real(i64 m, i64 n, i64 p, i64 pk) {
  if (pk <= 2) {
    return pk == 1 ? 1.0 : unit_root_real(m + n, 2);
  }
  if (pk == p && p < kFastModLimit) return kloosterman_odd_prime_real(m, n, p);
  const auto inv = prime_power_inverses(p, pk);
  const i64 mr = mod(m, pk), nr = mod(n, pk);
  CompensatedSum sum;
  for (i64 a = 1; 2 * a < pk; ++a) {
    if (a % p == 0) continue;
    const i64 k = mod_wide(static_cast<i128>(mr) * a + static_cast<i128>(nr) * inv[static_cast<std::size_t>(a)], pk);
    sum.add(2.0 * unit_root_real(k, pk));
  }
  return sum.value();
}

}  // namespace detail

/// Everything needed to evaluate many sums to one modulus: the table of
/// c-th roots of unity and the unit pairs (a, a^-1).
class ModulusTable {
 public:
  explicit ModulusTable(i64 c) : c_(c) {
    require(c >= 1, "modulus must be >= 1");
    roots_ = detail::root_table(c);
    const auto fac = factorize(c);
    std::vector<char> unit(static_cast<std::size_t>(c), 1);
    for (const auto& pp : fac.factors) {
      for (i64 k = 0; k < c; k += pp.prime) unit[static_cast<std::size_t>(k)] = 0;
    }
    if (c == 1) unit[0] = 1;
    units_.reserve(static_cast<std::size_t>(euler_phi(fac)));
    for (i64 a = 0; a < c; ++a) {
      if (unit[static_cast<std::size_t>(a)]) units_.push_back({a, 0});
    }
    // Batch inversion: prefix products, one inverse, then unwind.
    const detail::FastMod fm(c);
    auto mul = [&](i64 x, i64 y) { return c < detail::kFastModLimit ? fm.reduce(x * y) : mulmod(x, y, c); };
    std::vector<i64> prefix(units_.size());
    i64 acc = 1 % c;
    for (std::size_t i = 0; i < units_.size(); ++i) {
      acc = mul(acc, units_[i].a);
      prefix[i] = acc;
    }
    i64 back = mod_inverse(acc, c);
    for (std::size_t i = units_.size(); i-- > 0;) {
      units_[i].inverse = i == 0 ? back : mul(back, prefix[i - 1]);
      back = mul(back, units_[i].a);
    }
  }

  struct UnitPair {
    i64 a;
    i64 inverse;
  };

  i64 modulus() const { return c_; }
  const std::vector<UnitPair>& units() const { return units_; }
  cplx root(i64 k) const { return roots_[static_cast<std::size_t>(mod(k, c_))]; }

  /// sum of e((m a + n a^-1)/c) over the given unit pairs.
  template <typename Pred>
  RootOfUnitySum pair_sum(i64 m, i64 n, Pred&& keep) const {
    const i64 mr = mod(m, c_), nr = mod(n, c_);
    const bool small = c_ < (i64{1} << 31);
    CompensatedComplexSum sum;
    u64 terms = 0;
    for (const auto& [a, d] : units_) {
      if (!keep(a)) continue;
      const i64 k = small ? (mr * a + nr * d) % c_
                          : mod_wide(static_cast<i128>(mr) * a + static_cast<i128>(nr) * d, c_);
      sum.add(roots_[static_cast<std::size_t>(k)]);
      ++terms;
    }
    return {sum.value(), terms};
  }

  RootOfUnitySum kloosterman(i64 m, i64 n) const {
    return pair_sum(m, n, [](i64) { return true; });
  }

  RootOfUnitySum t_sum(i64 m, i64 n, i64 q, i64 f) const {
    const i64 fr = mod(f, q);
    return pair_sum(m, n, [&](i64 a) { return a % q == fr; });
  }

  RootOfUnitySum gauss(i64 a, i64 b) const {
    const i64 ar = mod(a, c_), br = mod(b, c_);
    CompensatedComplexSum sum;
    for (i64 x = 0; x < c_; ++x) {
      const i64 k = mod_wide(static_cast<i128>(ar) * x % c_ * x + static_cast<i128>(br) * x, c_);
      sum.add(roots_[static_cast<std::size_t>(k)]);
    }
    return {sum.value(), static_cast<u64>(c_)};
  }

 private:
  i64 c_;
  std::vector<cplx> roots_;
  std::vector<UnitPair> units_;
};

/// S(m,n;c) by direct enumeration of ad = 1 (mod c).
inline RootOfUnitySum kloosterman(i64 m, i64 n, i64 c) {
  require(c >= 1, "kloosterman: c must be >= 1");
  return ModulusTable(c).kloosterman(m, n);
}

/// S(m,n;c) = prod_i S(m u_i, n u_i; p_i^k_i), u_i = (c / p_i^k_i)^-1 mod p_i^k_i.
inline RootOfUnitySum kloosterman_fast(i64 m, i64 n, i64 c) {
  require(c >= 1, "kloosterman_fast: c must be >= 1");
  const auto fac = factorize(c);
  double value = 1.0;
  for (const auto& pp : fac.factors) {
    const i64 r = pp.value();
    const i64 u = mod_inverse(c / r, r);
    value *= detail::kloosterman_prime_power_real(mulmod(m, u, r), mulmod(n, u, r), pp.prime, r);
  }
  return {{value, 0.0}, static_cast<u64>(euler_phi(fac))};
}

/// G(a,b;c) = sum_{n mod c} e((a n^2 + b n)/c).
inline RootOfUnitySum gauss_sum(i64 a, i64 b, i64 c) {
  require(c >= 1, "gauss_sum: c must be >= 1");
  return ModulusTable(c).gauss(a, b);
}

struct GaussReduction {
  i64 scale = 1;  // (a,c)
  i64 a = 0;
  i64 b = 0;
  i64 c = 1;
};

/// G(a,b;c) = (a,c) G(a/(a,c), b/(a,c); c/(a,c)) when (a,c) | b; nullopt when
/// the sum vanishes because (a,c) does not divide b.
inline std::optional<GaussReduction> gauss_reduce(i64 a, i64 b, i64 c) {
  require(c >= 1, "gauss_reduce: c must be >= 1");
  const i64 d = std::gcd(a, c);
  if (b % d != 0) return std::nullopt;
  return GaussReduction{d, a / d, b / d, c / d};
}

/// |G(a,b;c)| <= (a,c)^1/2 c^1/2, times sqrt 2 when 2 | c/(a,c).
inline double gauss_bound(i64 a, i64 c) {
  const i64 d = std::gcd(a, c);
  const double base = std::sqrt(static_cast<double>(d)) * std::sqrt(static_cast<double>(c));
  return (c / d) % 2 == 0 ? base * std::numbers::sqrt2 : base;
}

inline void check_t_args(i64 q, i64 c, i64 f) {
  require(c >= 1 && q >= 1, "t_sum: q and c must be positive");
  require(c % q == 0, "t_sum: q must divide c");
  require(std::gcd(mod(f, q), q) == 1, "t_sum: gcd(f, q) must be 1");
}

/// T_f(m,n; q|c) by direct enumeration over a = f (mod q), (a,c) = 1.
inline RootOfUnitySum t_sum(i64 m, i64 n, i64 q, i64 c, i64 f) {
  check_t_args(q, c, f);
  return ModulusTable(c).t_sum(m, n, q, f);
}

/// Number of a mod c with (a,c) = 1 and a = f (mod q), for (f,q) = 1.
inline u64 t_term_count(i64 q, i64 c) {
  u64 count = 1;
  for (const auto& [p, e] : factorize(c).factors) {
    const int g = valuation(q, p, e);
    const i64 pe = PrimePower{p, e}.value();
    count *= static_cast<u64>(g >= 1 ? pe / PrimePower{p, g}.value() : pe / p * (p - 1));
  }
  return count;
}

/// Evaluation of T_f(m,n; p^gamma | p^alpha) valid for 1 <= gamma <= alpha <= 2 gamma:
///   p^(alpha-gamma) e((m f + n f^-1)/p^alpha) if p^(alpha-gamma) | f^2 m - n, else 0.
inline cplx t_sum_closed_form(i64 m, i64 n, i64 p, int alpha, int gamma, i64 f) {
  require(gamma >= 1 && gamma <= alpha && alpha <= 2 * gamma,
          "t_sum_closed_form: needs 1 <= gamma <= alpha <= 2 gamma");
  require(f % p != 0, "t_sum_closed_form: f must be coprime to p");
  const i64 pa = PrimePower{p, alpha}.value();
  const i64 k = PrimePower{p, alpha - gamma}.value();
  const i64 fbar = mod_inverse(f, pa);
  if (mod_wide(static_cast<i128>(mulmod(f, f, k)) * mod(m, k) - n, k) != 0) return {0.0, 0.0};
  const i64 phase = mod_wide(static_cast<i128>(mod(m, pa)) * mod(f, pa) +
                            static_cast<i128>(mod(n, pa)) * fbar,
                        pa);
  return static_cast<double>(k) * unit_root(phase, pa);
}

namespace detail {

// T_f over a single prime power, m and n already twisted.
inline cplx t_sum_prime_power(i64 m, i64 n, i64 p, int alpha, int gamma, i64 f) {
  const i64 pa = PrimePower{p, alpha}.value();
  if (gamma == 0) return {kloosterman_prime_power_real(m, n, p, pa), 0.0};
  const int delta = std::min(valuation(mod(m, pa), p, alpha), valuation(mod(n, pa), p, alpha));
  // Pull out p^delta = (m, n, p^alpha); gamma >= 1 keeps a a unit throughout.
  const double scale = static_cast<double>(PrimePower{p, std::min(alpha - gamma, delta)}.value());
  const i64 pd = PrimePower{p, delta}.value();
  const i64 m1 = mod(m, pa) / pd, n1 = mod(n, pa) / pd;
  const int a1 = alpha - delta;
  const int g1 = std::min(alpha - delta, gamma);
  if (a1 == 0) return {scale, 0.0};
  if (g1 >= 1 && a1 <= 2 * g1) return scale * t_sum_closed_form(m1, n1, p, a1, g1, f);
  const i64 modulus = PrimePower{p, a1}.value();
  const i64 step = PrimePower{p, g1}.value();
  const auto inv = prime_power_inverses(p, modulus);
  CompensatedComplexSum sum;
  for (i64 a = mod(f, step); a < modulus; a += step) {
    const i64 k = mod_wide(static_cast<i128>(m1) * a + static_cast<i128>(n1) * inv[static_cast<std::size_t>(a)], modulus);
    sum.add(unit_root(k, modulus));
  }
  return scale * sum.value();
}

}  // namespace detail

/// T_f via twisted multiplicativity, the (m,n,p^alpha) pull-out and the
/// closed form for alpha <= 2 gamma; remaining prime powers are enumerated.
inline RootOfUnitySum t_sum_fast(i64 m, i64 n, i64 q, i64 c, i64 f) {
  check_t_args(q, c, f);
  cplx value{1.0, 0.0};
  for (const auto& [p, e] : factorize(c).factors) {
    const i64 r = PrimePower{p, e}.value();
    const i64 u = mod_inverse(c / r, r);
    const int g = valuation(q, p, e);
    value *= detail::t_sum_prime_power(mulmod(m, u, r), mulmod(n, u, r), p, e, g, f);
  }
  return {value, t_term_count(q, c)};
}

/// tau(c) (m,n,c)^1/2 c^1/2.
inline double weil_bound(i64 m, i64 n, i64 c) {
  return static_cast<double>(tau(c)) * std::sqrt(static_cast<double>(gcd(m, n, c))) *
         std::sqrt(static_cast<double>(c));
}

/// |S(m,n;c)| / weil_bound; never exceeds 1.
inline double weil_margin(i64 m, i64 n, i64 c) {
  require(c >= 1, "weil_margin: c must be >= 1");
  require(m != 0 || n != 0, "weil_margin: (m, n) must not be (0, 0)");
  return kloosterman_fast(m, n, c).abs() / weil_bound(m, n, c);
}

/// 2^(3/2) tau(c) min{c/q, (c/q,m,n)^1/2 c^1/2}.
inline double t_bound(i64 m, i64 n, i64 q, i64 c) {
  const i64 cq = c / q;
  const double second =
      std::sqrt(static_cast<double>(gcd(cq, m, n))) * std::sqrt(static_cast<double>(c));
  return 2.0 * std::numbers::sqrt2 * static_cast<double>(tau(c)) *
         std::min(static_cast<double>(cq), second);
}

inline double t_margin(i64 m, i64 n, i64 q, i64 c, i64 f) {
  const auto t = t_sum_fast(m, n, q, c, f);
  return t.abs() / t_bound(m, n, q, c);
}

}  // namespace kloos
