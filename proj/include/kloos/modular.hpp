#pragma once

// Exact integer arithmetic: gcd/inverse/CRT, deterministic 64-bit
// factorisation and the multiplicative functions phi, tau, mu.
//
// All modular products go through 128-bit intermediates, so every routine is
// exact for moduli below 2^63.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "kloos/errors.hpp"

namespace kloos {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Least non-negative residue of a modulo n (n >= 1).
constexpr i64 mod(i64 a, i64 n) {
  const i64 r = a % n;
  return r < 0 ? r + n : r;
}

constexpr i64 mod_wide(i128 a, i64 n) {
  const i128 r = a % n;
  return static_cast<i64>(r < 0 ? r + n : r);
}

constexpr i64 mulmod(i64 a, i64 b, i64 n) {
  constexpr i64 kHalf = i64{1} << 31;
  if (a >= 0 && b >= 0 && a < kHalf && b < kHalf) return a * b % n;
  return mod_wide(static_cast<i128>(a) * b, n);
}

constexpr u64 mulmod_u(u64 a, u64 b, u64 n) {
  return static_cast<u64>(static_cast<u128>(a) * b % n);
}

constexpr u64 powmod_u(u64 base, u64 exp, u64 n) {
  u64 result = 1 % n;
  base %= n;
  while (exp > 0) {
    if (exp & 1) result = mulmod_u(result, base, n);
    base = mulmod_u(base, base, n);
    exp >>= 1;
  }
  return result;
}

constexpr i64 powmod(i64 base, u64 exp, i64 n) {
  return static_cast<i64>(powmod_u(static_cast<u64>(mod(base, n)), exp, static_cast<u64>(n)));
}

constexpr i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }
constexpr i64 gcd(i64 a, i64 b, i64 c) { return std::gcd(std::gcd(a, b), c); }

/// Inverse of a modulo n in [0, n). For n = 1 the result is 0.
inline i64 mod_inverse(i64 a, i64 n) {
  require(n >= 1, "mod_inverse: modulus must be >= 1");
  i64 old_r = mod(a, n), r = n;
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
  }
  if (old_r != 1 && n != 1) {
    throw NotInvertible("mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(n) +
                        ") != 1");
  }
  return mod(old_s, n);
}

/// Deterministic Miller-Rabin; the witness set is exact for all n < 2^64.
constexpr bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod_u(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  i64 prime = 0;
  int exponent = 0;

  i64 value() const {
    i64 v = 1;
    for (int i = 0; i < exponent; ++i) v *= prime;
    return v;
  }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  i64 value = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing

  i64 product() const {
    i64 p = 1;
    for (const auto& f : factors) p *= f.value();
    return p;
  }
};

namespace detail {

// Brent's variant of Pollard rho. n must be odd and composite.
inline u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    auto step = [&](u64 x) { return (mulmod_u(x, x, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 kBatch = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = step(y);
          q = mulmod_u(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void collect_prime_factors(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  collect_prime_factors(d, out);
  collect_prime_factors(n / d, out);
}

}  // namespace detail

/// Trial division up to 10^6, Pollard rho for whatever cofactor remains.
inline Factorization factorize(i64 n) {
  require(n >= 1, "factorize: n must be >= 1");
  Factorization result;
  result.value = n;
  u64 rest = static_cast<u64>(n);
  auto pull = [&](u64 p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) result.factors.push_back({static_cast<i64>(p), e});
  };
  pull(2);
  pull(3);
  constexpr u64 kTrialLimit = 1'000'000;
  for (u64 p = 5; p <= kTrialLimit && p * p <= rest; p += 6) {
    pull(p);
    pull(p + 2);
  }
  if (rest > 1) {
    std::vector<u64> big;
    detail::collect_prime_factors(rest, big);
    std::sort(big.begin(), big.end());
    for (std::size_t i = 0; i < big.size();) {
      std::size_t j = i;
      while (j < big.size() && big[j] == big[i]) ++j;
      result.factors.push_back({static_cast<i64>(big[i]), static_cast<int>(j - i)});
      i = j;
    }
  }
  return result;
}

inline i64 euler_phi(const Factorization& f) {
  i64 phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (int i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}
inline i64 euler_phi(i64 n) { return euler_phi(factorize(n)); }

inline i64 tau(const Factorization& f) {
  i64 t = 1;
  for (const auto& pp : f.factors) t *= pp.exponent + 1;
  return t;
}
inline i64 tau(i64 n) { return tau(factorize(n)); }

inline int moebius(const Factorization& f) {
  for (const auto& pp : f.factors) {
    if (pp.exponent > 1) return 0;
  }
  return f.factors.size() % 2 == 0 ? 1 : -1;
}
inline int moebius(i64 n) { return moebius(factorize(n)); }

/// Least primitive root modulo the odd prime power p^k.
inline i64 primitive_root(i64 p, i64 pk) {
  const i64 phi = pk / p * (p - 1);
  const auto phi_primes = factorize(phi).factors;
  for (i64 g = 2;; ++g) {
    if (g % p == 0) continue;
    bool primitive = true;
    for (const auto& f : phi_primes) {
      if (powmod(g, static_cast<u64>(phi / f.prime), pk) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
}

inline constexpr i64 kMaxDivisorCount = 1'000'000;

/// All positive divisors in increasing order.
inline std::vector<i64> divisors(const Factorization& f) {
  if (tau(f) > kMaxDivisorCount) {
    throw DivisorLimitExceeded("divisors: tau(" + std::to_string(f.value) + ") exceeds 10^6");
  }
  std::vector<i64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}
inline std::vector<i64> divisors(i64 n) { return divisors(factorize(n)); }

/// p-adic valuation; v_p(0) is reported as `cap`.
constexpr int valuation(i64 x, i64 p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

struct Congruence {
  i64 residue = 0;
  i64 modulus = 1;
};

/// Solution in [0, prod m_i) of x = r_i (mod m_i) for pairwise coprime m_i.
inline i64 crt_combine(std::span<const Congruence> system) {
  i64 x = 0, m = 1;
  for (const auto& [r, mi] : system) {
    require(mi >= 1, "crt_combine: moduli must be positive");
    if (std::gcd(m, mi) != 1) {
      throw NonCoprimeModuli("crt_combine: modulus " + std::to_string(mi) +
                             " shares a factor with the others");
    }
    // x + m*t = r (mod mi)
    const i64 t = mulmod(mod(r - x, mi), mod_inverse(m, mi), mi);
    x = static_cast<i64>(static_cast<i128>(m) * t + x);
    m *= mi;
  }
  return x;
}

inline i64 crt_combine(std::initializer_list<Congruence> system) {
  return crt_combine(std::span<const Congruence>(system.begin(), system.size()));
}

}  // namespace kloos
