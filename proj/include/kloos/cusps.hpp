#pragma once

// Cusps r/q of Gamma_0(Q): representatives, widths, stabiliser generators and
// the integer part [[r, x], [q, y]] of their scaling matrices. The factor
// diag(sqrt w, 1/sqrt w) is kept implicit; every downstream formula needs only
// the integers.

#include <array>
#include <vector>

#include "kloos/modular.hpp"

namespace kloos {

/// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2 {
  i64 a = 1, b = 0, c = 0, d = 1;

  i64 det() const { return a * d - b * c; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  /// Inverse of a determinant-one matrix.
  Mat2 inverse_sl2() const { return {d, -b, -c, a}; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

struct CuspData {
  i64 level = 1;  // Q
  i64 q = 1;
  i64 r = 1;
  i64 width = 1;  // w_q = Q / (Q, q^2)
  int eta = 0;    // only singular cusps are modelled
};

struct ScalingMatrix {
  i64 r = 1, x = 0, q = 1, y = 1;
  i64 width = 1;

  Mat2 integer_part() const { return {r, x, q, y}; }
};

inline void check_divides(i64 q, i64 level) {
  require(level >= 1 && q >= 1 && level % q == 0, "q must be a positive divisor of Q");
}

/// w_q = Q / (Q, q^2).
inline i64 width(i64 level, i64 q) {
  check_divides(q, level);
  return level / std::gcd(level, mulmod(q, q, level));
}

/// One entry per q | Q and class r mod (q, Q/q) coprime to it; r is the least
/// positive member of its class with (r, Q) = 1.
inline std::vector<CuspData> cusp_representatives(i64 level) {
  require(level >= 1, "cusp_representatives: Q must be >= 1");
  std::vector<CuspData> out;
  for (i64 q : divisors(level)) {
    const i64 g = std::gcd(q, level / q);
    const i64 w = width(level, q);
    for (i64 r0 = 1; r0 <= g; ++r0) {
      if (std::gcd(r0, g) != 1) continue;
      i64 r = r0;
      while (std::gcd(r, level) != 1) r += g;
      out.push_back({level, q, r, w, 0});
    }
  }
  return out;
}

/// Representatives r for a fixed q, in increasing class order.
inline std::vector<i64> cusp_numerators(i64 level, i64 q) {
  check_divides(q, level);
  std::vector<i64> out;
  for (const auto& cusp : cusp_representatives(level)) {
    if (cusp.q == q) out.push_back(cusp.r);
  }
  return out;
}

inline void check_cusp(i64 level, i64 q, i64 r) {
  check_divides(q, level);
  require(std::gcd(r, level) == 1, "cusp numerator r must be coprime to Q");
}

/// y = r^-1 mod Q taken in [1, Q], x = (r y - 1)/q; then r y - q x = 1 and Q/q | x.
inline ScalingMatrix scaling_matrix(i64 level, i64 q, i64 r) {
  check_cusp(level, q, r);
  i64 y = mod_inverse(r, level);
  if (y == 0) y = level;
  const i64 x = (r * y - 1) / q;
  return {r, x, q, y, width(level, q)};
}

/// [[1 - r q w, r^2 w], [-q^2 w, 1 + r q w]].
inline Mat2 stabilizer_generator(i64 level, i64 q, i64 r) {
  check_cusp(level, q, r);
  const i64 w = width(level, q);
  return {1 - r * q * w, r * r * w, -q * q * w, 1 + r * q * w};
}

/// Is c q sqrt(w_q) an allowed modulus for the pair (infinity, r/q)?
inline bool allowed_modulus_infty_rq(i64 level, i64 q, i64 c) {
  check_divides(q, level);
  return std::gcd(c, level / q) == 1;
}

}  // namespace kloos
