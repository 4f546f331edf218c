#pragma once

// Kloosterman sums along arithmetic progressions c = a q (mod Q) and against
// periodic weights, smoothed dyadic sums, the cusp decomposition of the
// smoothed sum, truncated Kloosterman zeta values and log-log exponent fits.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "kloos/angle.hpp"
#include "kloos/characters.hpp"
#include "kloos/cusp_kloosterman.hpp"
#include "kloos/cusps.hpp"
#include "kloos/expsums.hpp"
#include "kloos/modular.hpp"
#include "kloos/parallel.hpp"

namespace kloos {

struct ProgressionSpec {
  i64 a = 1;
  i64 q = 1;
  i64 level = 1;  // Q

  i64 modulus_q() const { return level / q; }  // Q/q
  /// Least positive c with c = a q (mod Q).
  i64 first() const {
    const i64 r = mulmod(a, q, level);
    return r == 0 ? level : r;
  }
  bool contains(i64 c) const { return mod(c, level) == mulmod(a, q, level); }

  friend bool operator==(const ProgressionSpec&, const ProgressionSpec&) = default;
};

inline void check_progression(const ProgressionSpec& p) {
  require(p.a >= 1 && p.q >= 1 && p.level >= 1, "progression: a, q, Q must be positive");
  require(p.level % p.q == 0, "progression: q must divide Q");
  require(std::gcd(p.a, p.level / p.q) == 1, "progression: gcd(a, Q/q) must be 1");
}

/// F(c) = values[c mod P].
struct PeriodicFunction {
  i64 period = 1;
  std::vector<cplx> values{cplx{1.0, 0.0}};

  cplx operator()(i64 c) const { return values[static_cast<std::size_t>(mod(c, period))]; }

  static PeriodicFunction constant_one() { return {}; }

  /// F(c) = e(c/P).
  static PeriodicFunction additive_character(i64 period) {
    require(period >= 1, "periodic function: period must be >= 1");
    PeriodicFunction f{period, {}};
    for (i64 k = 0; k < period; ++k) f.values.push_back(unit_root(k, period));
    return f;
  }

  /// Indicator of c = a (mod P).
  static PeriodicFunction indicator(i64 a, i64 period) {
    require(period >= 1, "periodic function: period must be >= 1");
    PeriodicFunction f{period, std::vector<cplx>(static_cast<std::size_t>(period), cplx{0.0, 0.0})};
    f.values[static_cast<std::size_t>(mod(a, period))] = 1.0;
    return f;
  }

  /// Indicator of the progression c = a q (mod Q).
  static PeriodicFunction indicator(const ProgressionSpec& p) {
    check_progression(p);
    return indicator(mulmod(p.a, p.q, p.level), p.level);
  }

  /// P lines "re im" (or "re,im"); the line count is the period.
  static PeriodicFunction from_stream(std::istream& in) {
    PeriodicFunction f{0, {}};
    std::string line;
    while (std::getline(in, line)) {
      for (char& ch : line) {
        if (ch == ',') ch = ' ';
      }
      std::istringstream ls(line);
      double re = 0.0, im = 0.0;
      if (!(ls >> re)) continue;
      ls >> im;
      f.values.emplace_back(re, im);
    }
    f.period = static_cast<i64>(f.values.size());
    require(f.period >= 1, "periodic function file holds no values");
    return f;
  }

  /// "e:P", "ind:a,P", or a path to a values file.
  static PeriodicFunction parse(const std::string& text) {
    if (text.rfind("e:", 0) == 0) return additive_character(std::stoll(text.substr(2)));
    if (text.rfind("ind:", 0) == 0) {
      const auto rest = text.substr(4);
      const auto comma = rest.find(',');
      require(comma != std::string::npos, "periodic function: expected ind:a,P");
      return indicator(std::stoll(rest.substr(0, comma)), std::stoll(rest.substr(comma + 1)));
    }
    std::ifstream in(text);
    require(in.good(), "periodic function: cannot open '" + text + "'");
    return from_stream(in);
  }
};

// ---------------------------------------------------------------------------
// Bump function

inline constexpr double kBumpC1 = 2.0;  // bound on ||phi'||_1
inline constexpr double kBumpC2 = 14.0;  // ||phi''||_1 <= kBumpC2 * C/(X B)

struct BumpSpec {
  double C = 1.0;
  double B = 1.0;
  i64 mn_abs = 1;

  double X() const { return 4.0 * std::numbers::pi * std::sqrt(static_cast<double>(mn_abs)) / C; }
};

/// Equal to 1 on [2 pi sqrt|mn|/C, 4 pi sqrt|mn|/C], 0 outside
/// (2 pi sqrt|mn|/(C+B), 4 pi sqrt|mn|/(C-B)), with quintic smoothstep ramps
/// in between, so the bump is C^2.
class Bump {
 public:
  explicit Bump(const BumpSpec& spec) : spec_(spec) {
    const double k = 2.0 * std::numbers::pi * std::sqrt(static_cast<double>(spec.mn_abs));
    x0_ = k / (spec.C + spec.B);
    x1_ = k / spec.C;
    x2_ = 2.0 * k / spec.C;
    x3_ = 2.0 * k / (spec.C - spec.B);
  }

  const BumpSpec& spec() const { return spec_; }
  double support_low() const { return x0_; }
  double plateau_low() const { return x1_; }
  double plateau_high() const { return x2_; }
  double support_high() const { return x3_; }

  double operator()(double x) const {
    if (x <= x0_ || x >= x3_) return 0.0;
    if (x < x1_) return step((x - x0_) / (x1_ - x0_));
    if (x <= x2_) return 1.0;
    return step((x3_ - x) / (x3_ - x2_));
  }

  double derivative(double x) const {
    if (x <= x0_ || x >= x3_ || (x >= x1_ && x <= x2_)) return 0.0;
    if (x < x1_) return step_d1((x - x0_) / (x1_ - x0_)) / (x1_ - x0_);
    return -step_d1((x3_ - x) / (x3_ - x2_)) / (x3_ - x2_);
  }

  double second_derivative(double x) const {
    if (x <= x0_ || x >= x3_ || (x >= x1_ && x <= x2_)) return 0.0;
    if (x < x1_) {
      const double h = x1_ - x0_;
      return step_d2((x - x0_) / h) / (h * h);
    }
    const double h = x3_ - x2_;
    return step_d2((x3_ - x) / h) / (h * h);
  }

  double derivative_l1() const { return derivative_l1_; }
  double second_derivative_l1() const { return second_derivative_l1_; }
  /// C/(X B), the scale of the ||phi''||_1 condition.
  double second_derivative_scale() const { return spec_.C / (spec_.X() * spec_.B); }

 private:
  friend Bump build_bump(const BumpSpec&);

  static double step(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
  static double step_d1(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
  static double step_d2(double t) { return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }

  BumpSpec spec_;
  double x0_, x1_, x2_, x3_;
  double derivative_l1_ = 0.0;
  double second_derivative_l1_ = 0.0;
};

namespace detail {

// Composite Simpson rule on [lo, hi].
template <typename Fn>
double simpson(Fn&& fn, double lo, double hi, int intervals) {
  const double h = (hi - lo) / intervals;
  double s = fn(lo) + fn(hi);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(lo + i * h);
  return s * h / 3.0;
}

}  // namespace detail

/// Builds the bump and checks every defining property numerically.
inline Bump build_bump(const BumpSpec& spec) {
  if (!(spec.mn_abs >= 1 && spec.C > 0.0 && spec.B >= 1.0 && spec.B <= spec.C / 2.0)) {
    throw InvalidBump("bump: need |mn| >= 1 and 1 <= B <= C/2");
  }
  Bump bump(spec);
  constexpr int kIntervals = 4096;
  auto l1 = [&](auto&& fn) {
    return detail::simpson(fn, bump.x0_, bump.x1_, kIntervals) +
           detail::simpson(fn, bump.x2_, bump.x3_, kIntervals);
  };
  bump.derivative_l1_ = l1([&](double x) { return std::abs(bump.derivative(x)); });
  bump.second_derivative_l1_ = l1([&](double x) { return std::abs(bump.second_derivative(x)); });

  bool ok = bump.derivative_l1_ <= kBumpC1 * (1.0 + 1e-9) &&
            bump.second_derivative_l1_ <= kBumpC2 * bump.second_derivative_scale();
  for (int i = 0; i <= 64 && ok; ++i) {
    const double t = i / 64.0;
    const double plateau = bump.x1_ + t * (bump.x2_ - bump.x1_);
    const double below = bump.x0_ * t;
    const double above = bump.x3_ * (1.0 + t);
    const double ramp = bump.x0_ + t * (bump.x3_ - bump.x0_);
    const double v = bump(ramp);
    ok = bump(plateau) == 1.0 && bump(below) == 0.0 && bump(above) == 0.0 && v >= 0.0 && v <= 1.0;
  }
  if (!ok) throw InvalidBump("bump: numerical verification of the bump conditions failed");
  return bump;
}

// ---------------------------------------------------------------------------
// Sums

enum class Normalization { inverse_c, inverse_sqrt_c };

struct SumSeries {
  std::vector<double> cutoffs;
  std::vector<cplx> values;
  i64 m = 1;
  i64 n = 1;
  std::variant<ProgressionSpec, PeriodicFunction> source;
  Normalization normalization = Normalization::inverse_c;
};

namespace detail {

inline void check_mn_nonzero(i64 m, i64 n) { require(m != 0 && n != 0, "m and n must be nonzero"); }

inline void check_cutoffs(const std::vector<double>& cutoffs) {
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    require(std::isfinite(cutoffs[i]), "cutoffs must be finite");
    require(i == 0 || cutoffs[i - 1] < cutoffs[i], "cutoffs must be strictly increasing");
  }
}

// S(m,n;c) = S(-m,-n;c): evaluate with m > 0.
inline double kloosterman_value(i64 m, i64 n, i64 c) {
  if (m < 0) {
    m = -m;
    n = -n;
  }
  return kloosterman_fast(m, n, c).value.real();
}

inline i64 floor_count(double x) { return x < 1.0 ? 0 : static_cast<i64>(std::floor(x)); }

}  // namespace detail

/// values[i] = sum_{c <= C_i, c = a q (Q)} S(m,n;c)/c.
inline SumSeries ap_series(i64 m, i64 n, const ProgressionSpec& prog,
                           const std::vector<double>& cutoffs, int threads = 1) {
  detail::check_mn_nonzero(m, n);
  check_progression(prog);
  detail::check_cutoffs(cutoffs);
  const i64 c0 = prog.first(), step = prog.level;
  std::vector<i64> stops;
  for (double cut : cutoffs) {
    const i64 top = detail::floor_count(cut);
    stops.push_back(top < c0 ? 0 : (top - c0) / step + 1);
  }
  const i64 count = stops.empty() ? 0 : stops.back();
  auto values = ordered_prefix_sums(count, stops, threads, [&](i64 i) {
    const i64 c = c0 + i * step;
    return cplx(detail::kloosterman_value(m, n, c) / static_cast<double>(c), 0.0);
  });
  return {cutoffs, std::move(values), m, n, prog, Normalization::inverse_c};
}

/// sum_{c <= C, c = a q (Q)} S(m,n;c)/c.
inline cplx ap_sum(i64 m, i64 n, const ProgressionSpec& prog, double C, int threads = 1) {
  return ap_series(m, n, prog, {C}, threads).values.front();
}

/// values[i] = sum_{c <= C_i} S(m,n;c)/sqrt(c) F(c).
inline SumSeries correlation_series(i64 m, i64 n, const PeriodicFunction& F,
                                    const std::vector<double>& cutoffs, int threads = 1) {
  detail::check_mn_nonzero(m, n);
  detail::check_cutoffs(cutoffs);
  std::vector<i64> stops;
  for (double cut : cutoffs) stops.push_back(detail::floor_count(cut));
  const i64 count = stops.empty() ? 0 : stops.back();
  auto values = ordered_prefix_sums(count, stops, threads, [&](i64 i) {
    const i64 c = i + 1;
    const cplx f = F(c);
    if (f == cplx{0.0, 0.0}) return f;
    return detail::kloosterman_value(m, n, c) / std::sqrt(static_cast<double>(c)) * f;
  });
  return {cutoffs, std::move(values), m, n, F, Normalization::inverse_sqrt_c};
}

inline cplx correlation_sum(i64 m, i64 n, const PeriodicFunction& F, double C, int threads = 1) {
  return correlation_series(m, n, F, {C}, threads).values.front();
}

/// sum_{C < c <= 2C, c = a q (Q)} S(m,n;c)/c.
inline cplx sharp_dyadic_sum(i64 m, i64 n, const ProgressionSpec& prog, double C, int threads = 1) {
  const auto s = ap_series(m, n, prog, {C, 2.0 * C}, threads);
  return s.values[1] - s.values[0];
}

namespace detail {

// Members of the progression inside the support (C - B, 2C + 2B) of
// c -> phi(4 pi sqrt|mn| / c).
inline std::pair<i64, i64> smooth_window(const ProgressionSpec& prog, const BumpSpec& spec) {
  const i64 lo = std::max<i64>(1, static_cast<i64>(std::floor(spec.C - spec.B)));
  const i64 hi = static_cast<i64>(std::ceil(2.0 * (spec.C + spec.B)));
  const i64 first = lo + mod(mulmod(prog.a, prog.q, prog.level) - lo, prog.level);
  return {first, hi};
}

}  // namespace detail

/// sum_{c = a q (Q)} S(m,n;c)/c phi(4 pi sqrt|mn| / c).
inline cplx smooth_dyadic_sum(i64 m, i64 n, const ProgressionSpec& prog, double C, double B,
                              int threads = 1) {
  detail::check_mn_nonzero(m, n);
  check_progression(prog);
  const BumpSpec spec{C, B, std::abs(m * n)};
  const Bump phi = build_bump(spec);
  const double k = 4.0 * std::numbers::pi * std::sqrt(static_cast<double>(spec.mn_abs));
  const auto [first, last] = detail::smooth_window(prog, spec);
  if (last < first) return {0.0, 0.0};
  const i64 count = (last - first) / prog.level + 1;
  return chunked_sum(0, count - 1, threads, [&](i64 i) {
    const i64 c = first + i * prog.level;
    const double w = phi(k / static_cast<double>(c));
    return w == 0.0 ? 0.0 : detail::kloosterman_value(m, n, c) / static_cast<double>(c) * w;
  });
}

struct DecompositionCheck {
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double delta = 0.0;
  u64 terms = 0;
  double tolerance = 0.0;

  bool holds() const { return delta <= tolerance; }
};

/// The smooth sum against its expansion over cusps r/q of Gamma_0(Q):
///   (1/phi(Q/q)) sum_kappa i^kappa sum_{chi mod Q/q, chi(-1) = (-1)^kappa} chi(a)
///     sum_r sum_{(c,Q/q)=1} S^{chi,kappa}_{infty,r/q}(m, n w_q; c q sqrt w_q)/(c q) phi(4 pi sqrt|mn|/(c q)).
/// The factors sqrt w_q cancel exactly and are never formed.
inline DecompositionCheck decomposition_check(i64 m, i64 n, const ProgressionSpec& prog, double C,
                                              double B, int threads = 1) {
  require(m > 0, "decomposition_check: m must be positive");
  require(n != 0, "decomposition_check: n must be nonzero");
  check_progression(prog);
  const BumpSpec spec{C, B, m * std::abs(n)};
  const Bump phi = build_bump(spec);
  const double k = 4.0 * std::numbers::pi * std::sqrt(static_cast<double>(spec.mn_abs));
  const auto [first, last] = detail::smooth_window(prog, spec);

  DecompositionCheck out;
  {
    CompensatedComplexSum lhs;
    for (i64 c = first; c <= last; c += prog.level) {
      const double w = phi(k / static_cast<double>(c));
      if (w == 0.0) continue;
      const auto s = kloosterman_fast(m, n, c);
      lhs.add(s.value / static_cast<double>(c) * w);
      out.terms += s.term_count;
    }
    out.lhs = lhs.value();
  }

  const i64 level = prog.level, q = prog.q, big_l = prog.modulus_q();
  struct Tuple {
    const DirichletCharacter* chi;
    i64 r;
  };
  const auto chars = characters_mod(big_l);
  const auto numerators = cusp_numerators(level, q);
  std::vector<Tuple> tuples;
  for (int kappa = 0; kappa <= 1; ++kappa) {
    for (const auto& chi : chars) {
      if (chi.parity() != kappa) continue;
      for (i64 r : numerators) tuples.push_back({&chi, r});
    }
  }
  const i64 lo = static_cast<i64>(std::floor(C - B)), hi = static_cast<i64>(std::ceil(2.0 * (C + B)));
  std::vector<cplx> part(tuples.size());
  std::vector<u64> part_terms(tuples.size(), 0);
  for_each_chunk(static_cast<i64>(tuples.size()), threads, [&](i64 t) {
    const auto& [chi, r] = tuples[static_cast<std::size_t>(t)];
    const int kappa = chi->parity();
    CuspPairSumSpec s{level, q, r, *chi, kappa, m, n, 1};
    CompensatedComplexSum acc;
    for (i64 c = std::max<i64>(1, lo / q); c * q <= hi; ++c) {
      if (std::gcd(c, big_l) != 1) continue;
      const double w = phi(k / static_cast<double>(c * q));
      if (w == 0.0) continue;
      s.c = c;
      const auto v = s_infty_rq(s);
      acc.add(v.value / static_cast<double>(c * q) * w);
      part_terms[static_cast<std::size_t>(t)] += v.term_count;
    }
    const cplx weight = (kappa == 0 ? cplx{1.0, 0.0} : cplx{0.0, 1.0}) * chi->value(prog.a);
    part[static_cast<std::size_t>(t)] = weight * acc.value();
  });
  CompensatedComplexSum rhs;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    rhs.add(part[t]);
    out.terms += part_terms[t];
  }
  out.rhs = rhs.value() / static_cast<double>(euler_phi(big_l));
  out.delta = std::abs(out.lhs - out.rhs);
  out.tolerance = 1e-8 * std::max<double>(1.0, static_cast<double>(out.terms));
  return out;
}

/// sum_{c <= Cmax} S(m,n;c) c^{-2s}, for Re s > 1/2.
inline cplx zeta_partial(i64 m, i64 n, cplx s, double c_max, int threads = 1) {
  require(s.real() > 0.5, "zeta_partial: Re(s) must exceed 1/2");
  require(m != 0 || n != 0, "zeta_partial: (m, n) must not be (0, 0)");
  const i64 top = detail::floor_count(c_max);
  return chunked_sum(1, top, threads, [&](i64 c) {
    return kloosterman_fast(m, n, c).value.real() *
           std::exp(-2.0 * s * std::log(static_cast<double>(c)));
  });
}

// ---------------------------------------------------------------------------
// Fits and bounds

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
  std::size_t used = 0;
  std::size_t dropped = 0;  // zero or non-finite values
};

/// Least squares fit of log|v_i| = slope * log C_i + intercept.
inline ExponentFit fit_exponent(const std::vector<double>& cutoffs, const std::vector<cplx>& values) {
  require(cutoffs.size() == values.size(), "fit_exponent: one value per cutoff");
  std::vector<double> xs, ys;
  ExponentFit fit;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (!(a > 0.0) || !std::isfinite(a) || !(cutoffs[i] > 0.0)) {
      ++fit.dropped;
      continue;
    }
    xs.push_back(std::log(cutoffs[i]));
    ys.push_back(std::log(a));
  }
  fit.used = xs.size();
  if (fit.used < 3) {
    throw DegenerateFit("fit_exponent: " + std::to_string(fit.used) +
                        " usable points, need at least 3");
  }
  const double n = static_cast<double>(fit.used);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("fit_exponent: cutoffs must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

inline ExponentFit fit_exponent(const SumSeries& series) {
  return fit_exponent(series.cutoffs, series.values);
}

inline constexpr double kKimSarnakTheta = 7.0 / 64.0;

/// The factor every asymptotic bound below omits.
inline constexpr const char* kOmittedFactor = "|mnQC|^o(1)";

/// Right-hand side of the bound for sum_{c <= C, c = a q (Q)} S(m,n;c)/c,
/// without the |mnQC|^o(1) factor.
inline double thm52_rhs(i64 m, i64 n, const ProgressionSpec& prog, double C,
                        double theta = kKimSarnakTheta) {
  detail::check_mn_nonzero(m, n);
  check_progression(prog);
  require(theta >= 0.0 && theta <= 0.25, "theta must lie in [0, 1/4]");
  require(C > 0.0, "C must be positive");
  const double am = static_cast<double>(std::abs(m)), an = static_cast<double>(std::abs(n));
  const double q = static_cast<double>(prog.q), Q = static_cast<double>(prog.level);
  const double mnq = static_cast<double>(gcd(m, n, prog.q));
  const double mn = static_cast<double>(std::gcd(m, n));
  const double qQq = static_cast<double>(std::gcd(prog.q, prog.level / prog.q));
  const double qm = static_cast<double>(std::gcd(prog.q, m));
  const double qn = static_cast<double>(std::gcd(prog.q, n));
  const double q2Q = static_cast<double>(std::gcd(mulmod(prog.q, prog.q, prog.level), prog.level));
  const double lead = std::sqrt(Q) * std::sqrt(qQq) / std::sqrt(q);

  const double head = std::sqrt(mnq) / std::sqrt(q) + mn / std::sqrt(Q) +
                      std::pow(mnq, 1.0 / 6.0) * std::cbrt(qQq) / std::cbrt(q) * std::pow(C, 1.0 / 6.0);
  const double holo =
      1.0 + std::sqrt(am * an) / Q +
      (std::cbrt(am) * std::pow(qm, 0.25) + std::cbrt(an) * std::pow(qn, 0.25)) /
          (std::pow(q2Q, 1.0 / 12.0) * std::sqrt(Q)) +
      std::cbrt(am * an) * std::pow(qm, 0.25) * std::pow(qn, 0.25) / (std::pow(q2Q, 1.0 / 6.0) * Q);
  const double maass =
      1.0 + (std::pow(am, 0.25) * std::pow(qm, 0.25) + std::pow(an, 0.25) * std::pow(qn, 0.25)) / std::sqrt(Q) +
      std::pow(am * an, 0.25) * std::pow(qm, 0.25) * std::pow(qn, 0.25) / Q;
  const double growth = 1.0 + (am * qm + an * qn) / std::sqrt(am * an) * C / (Q * Q) +
                        qm * qn * C * C / (Q * Q * Q * Q);
  return head + lead * holo + lead * maass * std::pow(growth, theta);
}

/// (m,n,q)^1/2 (q^-1/2 + C^1/2/Q).
inline double trivial_bound(i64 m, i64 n, const ProgressionSpec& prog, double C) {
  detail::check_mn_nonzero(m, n);
  check_progression(prog);
  require(C >= 0.0, "C must be non-negative");
  const double g = static_cast<double>(gcd(m, n, prog.q));
  return std::sqrt(g) * (1.0 / std::sqrt(static_cast<double>(prog.q)) +
                         std::sqrt(C) / static_cast<double>(prog.level));
}

// ---------------------------------------------------------------------------
// Output

/// 17 significant digits, enough to round-trip a double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Slope of the fit over the first i+1 points, NaN while fewer than 3 are usable.
inline std::vector<double> running_slopes(const SumSeries& series) {
  std::vector<double> out;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    std::vector<double> c(series.cutoffs.begin(), series.cutoffs.begin() + static_cast<long>(i) + 1);
    std::vector<cplx> v(series.values.begin(), series.values.begin() + static_cast<long>(i) + 1);
    try {
      out.push_back(fit_exponent(c, v).slope);
    } catch (const DegenerateFit&) {
      out.push_back(std::nan(""));
    }
  }
  return out;
}

struct SeriesRow {
  double C;
  cplx value;
  double bound_trivial;  // NaN for periodic-weight series
  double bound_thm52;
  double slope_running;
};

inline std::vector<SeriesRow> series_rows(const SumSeries& series, double theta = kKimSarnakTheta) {
  const auto slopes = running_slopes(series);
  std::vector<SeriesRow> rows;
  const auto* prog = std::get_if<ProgressionSpec>(&series.source);
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double C = series.cutoffs[i];
    const double nan = std::nan("");
    rows.push_back({C, series.values[i],
                    prog ? trivial_bound(series.m, series.n, *prog, C) : nan,
                    prog ? thm52_rhs(series.m, series.n, *prog, C, theta) : nan, slopes[i]});
  }
  return rows;
}

inline void write_series_csv(std::ostream& os, const SumSeries& series,
                             double theta = kKimSarnakTheta) {
  os << "C,re,im,abs,bound_trivial,bound_thm52,slope_running\n";
  for (const auto& row : series_rows(series, theta)) {
    os << format_double(row.C) << ',' << format_double(row.value.real()) << ','
       << format_double(row.value.imag()) << ',' << format_double(std::abs(row.value)) << ','
       << format_double(row.bound_trivial) << ',' << format_double(row.bound_thm52) << ','
       << format_double(row.slope_running) << '\n';
  }
}

}  // namespace kloos
