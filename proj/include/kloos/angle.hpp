#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "kloos/modular.hpp"

namespace kloos {

using cplx = std::complex<double>;

/// An element num/den of Q/Z in lowest terms, 0 <= num < den.
class RationalAngle {
 public:
  constexpr RationalAngle() = default;
  RationalAngle(i64 num, i64 den) : num_(0), den_(1) {
    require(den >= 1, "RationalAngle: denominator must be positive");
    const i64 r = mod(num, den);
    const i64 g = std::gcd(r, den);
    num_ = r / g;
    den_ = den / g;
  }

  constexpr i64 numerator() const { return num_; }
  constexpr i64 denominator() const { return den_; }
  constexpr bool is_zero() const { return num_ == 0; }

  RationalAngle operator+(RationalAngle o) const {
    const i64 l = std::lcm(den_, o.den_);
    return {static_cast<i64>(mod_wide(static_cast<i128>(num_) * (l / den_) +
                                     static_cast<i128>(o.num_) * (l / o.den_),
                                 l)),
            l};
  }
  RationalAngle operator-() const { return {den_ - num_, den_}; }
  RationalAngle operator-(RationalAngle o) const { return *this + (-o); }

  friend constexpr bool operator==(RationalAngle, RationalAngle) = default;
  friend constexpr auto operator<=>(RationalAngle a, RationalAngle b) {
    return static_cast<i128>(a.num_) * b.den_ <=> static_cast<i128>(b.num_) * a.den_;
  }

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

/// e(k/n) = exp(2 pi i k/n). The angle is folded into (-1/2, 1/2] first so the
/// argument handed to sin/cos stays small.
inline cplx unit_root(i64 k, i64 n) {
  i64 r = mod(k, n);
  if (2 * r > n) r -= n;
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(theta), std::sin(theta)};
}

/// cos(2 pi k/n) alone, for sums known to be real.
inline double unit_root_real(i64 k, i64 n) {
  i64 r = mod(k, n);
  if (2 * r > n) r -= n;
  return std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

inline cplx to_complex(RationalAngle a) { return unit_root(a.numerator(), a.denominator()); }

/// (-i)^kappa for kappa in {0,1}.
inline cplx minus_i_pow(int kappa) { return kappa == 0 ? cplx{1.0, 0.0} : cplx{0.0, -1.0}; }

/// Neumaier-compensated accumulation of a real stream.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// A finite sum of unit-modulus terms together with how many terms it has;
/// the count sets the error budget for every equality check.
struct RootOfUnitySum {
  cplx value{0.0, 0.0};
  u64 term_count = 0;

  double abs() const { return std::abs(value); }
};

/// Repo-wide equality tolerance: 1e-9 * max(1, terms).
inline double sum_tolerance(double terms) { return 1e-9 * std::max(1.0, terms); }

inline bool approx_equal(cplx a, cplx b, double terms) {
  return std::abs(a - b) <= sum_tolerance(terms);
}

}  // namespace kloos
