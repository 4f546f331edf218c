// expsum: evaluate Kloosterman-type sums, run the verification suites and
// sweep arithmetic-progression / periodic-weight sums over cutoff grids.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or precondition error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kloos/apsums.hpp"
#include "kloos/characters.hpp"
#include "kloos/cusp_kloosterman.hpp"
#include "kloos/expsums.hpp"
#include "kloos/parallel.hpp"
#include "kloos/verify.hpp"

using json = nlohmann::ordered_json;
using namespace kloos;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string complex_text(cplx z) {
  std::ostringstream os;
  os << format_double(z.real()) << (std::signbit(z.imag()) ? " - " : " + ")
     << format_double(std::abs(z.imag())) << "i";
  return os.str();
}

void emit(const std::string& human, json record) {
  std::cout << human << "\n" << record.dump() << "\n";
}

void add_result(json& j, const RootOfUnitySum& s) {
  j["re"] = s.value.real();
  j["im"] = s.value.imag();
  j["abs"] = s.abs();
  j["term_count"] = s.term_count;
}

std::vector<i64> parse_int_list(const std::string& text) {
  std::vector<i64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("expected a comma-separated integer list, got '" + text + "'");
    }
  }
  return out;
}

ProgressionSpec parse_progression(const std::string& text) {
  const auto v = parse_int_list(text);
  if (v.size() != 3) throw UsageError("--progression expects a,q,Q");
  ProgressionSpec p{v[0], v[1], v[2]};
  check_progression(p);
  return p;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string prefix = "geometric:";
  if (text.rfind(prefix, 0) != 0) throw UsageError("--grid expects geometric:start,ratio,count");
  std::stringstream ss(text.substr(prefix.size()));
  std::string a, b, c;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',')) {
    throw UsageError("--grid expects geometric:start,ratio,count");
  }
  double start = 0.0, ratio = 0.0;
  long long count = 0;
  try {
    start = std::stod(a);
    ratio = std::stod(b);
    count = std::stoll(c);
  } catch (const std::exception&) {
    throw UsageError("--grid: cannot parse '" + text + "'");
  }
  require(start > 0.0 && ratio > 1.0 && count >= 1, "grid needs start > 0, ratio > 1, count >= 1");
  std::vector<double> out;
  double x = start;
  for (long long i = 0; i < count; ++i, x *= ratio) out.push_back(x);
  return out;
}

DirichletCharacter parse_character(i64 modulus, const std::string& exps) {
  auto group = std::make_shared<const CharacterGroup>(modulus);
  auto e = exps.empty() ? std::vector<i64>(group->components().size(), 0) : parse_int_list(exps);
  require(e.size() == group->components().size(),
          "--chi needs " + std::to_string(group->components().size()) + " exponent(s) for modulus " +
              std::to_string(modulus));
  return {group, e};
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  i64 m = 1, n = 1, c = 1, a = 1, b = 0, q = 1, f = 1, level = 1, r = 1;
  int kappa = 0;
  std::string chi;
  bool direct = false;
};

int run_eval(const std::string& kind, const EvalArgs& e) {
  json j;
  j["command"] = "eval";
  j["kind"] = kind;
  std::ostringstream human;
  if (kind == "kloosterman") {
    const auto s = e.direct ? kloosterman(e.m, e.n, e.c) : kloosterman_fast(e.m, e.n, e.c);
    j["m"] = e.m;
    j["n"] = e.n;
    j["c"] = e.c;
    j["direct"] = e.direct;
    add_result(j, s);
    human << "S(" << e.m << "," << e.n << ";" << e.c << ") = " << complex_text(s.value)
          << "  |S| = " << format_double(s.abs()) << "  terms = " << s.term_count;
    if (e.m != 0 || e.n != 0) {
      j["bound"] = weil_bound(e.m, e.n, e.c);
      j["margin"] = s.abs() / weil_bound(e.m, e.n, e.c);
      human << "  weil margin = " << format_double(j["margin"].get<double>());
    }
  } else if (kind == "gauss") {
    const auto s = gauss_sum(e.a, e.b, e.c);
    j["a"] = e.a;
    j["b"] = e.b;
    j["c"] = e.c;
    add_result(j, s);
    j["vanishes"] = !gauss_reduce(e.a, e.b, e.c).has_value();
    j["bound"] = gauss_bound(e.a, e.c);
    j["margin"] = s.abs() / gauss_bound(e.a, e.c);
    human << "G(" << e.a << "," << e.b << ";" << e.c << ") = " << complex_text(s.value)
          << "  |G| = " << format_double(s.abs()) << "  terms = " << s.term_count
          << "  margin = " << format_double(j["margin"].get<double>());
  } else if (kind == "tsum") {
    const auto s = e.direct ? t_sum(e.m, e.n, e.q, e.c, e.f) : t_sum_fast(e.m, e.n, e.q, e.c, e.f);
    j["m"] = e.m;
    j["n"] = e.n;
    j["q"] = e.q;
    j["c"] = e.c;
    j["f"] = e.f;
    j["direct"] = e.direct;
    add_result(j, s);
    j["bound"] = t_bound(e.m, e.n, e.q, e.c);
    j["margin"] = s.abs() / t_bound(e.m, e.n, e.q, e.c);
    human << "T_" << e.f << "(" << e.m << "," << e.n << ";" << e.q << "|" << e.c
          << ") = " << complex_text(s.value) << "  |T| = " << format_double(s.abs())
          << "  terms = " << s.term_count << "  margin = " << format_double(j["margin"].get<double>());
  } else if (kind == "cusp-infty-rq") {
    require(e.level >= 1 && e.q >= 1 && e.level % e.q == 0, "q must be a positive divisor of Q");
    const auto chi = parse_character(e.level / e.q, e.chi);
    const CuspPairSumSpec spec{e.level, e.q, e.r, chi, chi.parity(), e.m, e.n, e.c};
    const auto s = s_infty_rq(spec);
    j["Q"] = e.level;
    j["q"] = e.q;
    j["r"] = e.r;
    j["chi"] = chi.exponents();
    j["kappa"] = chi.parity();
    j["m"] = e.m;
    j["n"] = e.n;
    j["c"] = e.c;
    add_result(j, s);
    human << "S_{inf," << e.r << "/" << e.q << "}(" << e.m << ", n w; c q sqrt w) [Q=" << e.level
          << ", c=" << e.c << ", kappa=" << chi.parity() << "] = " << complex_text(s.value)
          << "  |S| = " << format_double(s.abs()) << "  terms = " << s.term_count;
  } else if (kind == "cusp-rq-rq") {
    const CuspPairSumSpec spec{e.level, e.q, e.r, std::nullopt, e.kappa, e.m, e.n, e.c};
    const auto s = s_rq_rq(spec);
    j["Q"] = e.level;
    j["q"] = e.q;
    j["r"] = e.r;
    j["kappa"] = e.kappa;
    j["m"] = e.m;
    j["n"] = e.n;
    j["c"] = e.c;
    add_result(j, s);
    human << "S_{" << e.r << "/" << e.q << "," << e.r << "/" << e.q << "}(m w, n w; c q w) [Q="
          << e.level << ", c=" << e.c << ", kappa=" << e.kappa << "] = " << complex_text(s.value)
          << "  |S| = " << format_double(s.abs()) << "  terms = " << s.term_count;
  } else if (kind == "gamma01-infty") {
    const auto s = s_gamma01_infty_infty(e.level, e.q, e.kappa, e.m, e.n, e.c);
    j["Q"] = e.level;
    j["q"] = e.q;
    j["kappa"] = e.kappa;
    j["m"] = e.m;
    j["n"] = e.n;
    j["c"] = e.c;
    add_result(j, s);
    j["margin"] = cor33_infty_margin(e.level, e.q, e.kappa, e.m, e.n, e.c);
    human << "S_{inf,inf}(" << e.m << "," << e.n << ";" << e.c << ") [Q=" << e.level << ", q=" << e.q
          << ", kappa=" << e.kappa << "] = " << complex_text(s.value)
          << "  |S| = " << format_double(s.abs()) << "  terms = " << s.term_count
          << "  margin = " << format_double(j["margin"].get<double>());
  }
  emit(human.str(), j);
  return kExitPass;
}

// ---------------------------------------------------------------------------

int run_verify(const std::string& suite, VerifyOptions opts, const std::string& progression) {
  if (!progression.empty()) opts.prog = parse_progression(progression);
  opts.threads = resolve_threads(opts.threads);
  const auto rep = run_suite(suite, opts);
  std::cout << "verify " << suite << ": " << (rep.passed() ? "PASS" : "FAIL") << "  checks = " << rep.checks
            << "  failures = " << rep.failures << "  worst ratio = " << format_double(rep.worst) << "\n";
  if (!rep.worst_case.empty()) std::cout << "  worst case: " << rep.worst_case << "\n";
  for (const auto& f : rep.failing) std::cout << "  violation: " << f << "\n";
  return rep.passed() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  i64 m = 1, n = 1;
  std::string progression;
  std::string periodic;
  std::string grid = "geometric:1024,2,8";
  int threads = 0;
  std::string output;
  std::string format = "csv";
  double theta = kKimSarnakTheta;
  bool self_test = false;
};

void write_json_series(std::ostream& os, const SumSeries& series, const SweepArgs& a) {
  for (const auto& row : series_rows(series, a.theta)) {
    json j;
    j["m"] = series.m;
    j["n"] = series.n;
    if (!a.progression.empty()) j["progression"] = a.progression;
    if (!a.periodic.empty()) j["periodic"] = a.periodic;
    j["theta"] = a.theta;
    j["C"] = row.C;
    j["re"] = row.value.real();
    j["im"] = row.value.imag();
    j["abs"] = std::abs(row.value);
    j["bound_trivial"] = row.bound_trivial;
    j["bound_thm52"] = row.bound_thm52;
    j["slope_running"] = row.slope_running;
    os << j.dump() << "\n";
  }
}

int run_sweep(const SweepArgs& a) {
  const auto cutoffs = parse_grid(a.grid);
  SumSeries series;
  if (a.self_test) {
    series.cutoffs = cutoffs;
    for (double C : cutoffs) series.values.emplace_back(std::sqrt(C), 0.0);
    series.source = ProgressionSpec{};
  } else {
    if (a.progression.empty() == a.periodic.empty()) {
      throw UsageError("sweep needs exactly one of --progression or --periodic");
    }
    const int threads = resolve_threads(a.threads);
    series = a.progression.empty()
                 ? correlation_series(a.m, a.n, PeriodicFunction::parse(a.periodic), cutoffs, threads)
                 : ap_series(a.m, a.n, parse_progression(a.progression), cutoffs, threads);
  }

  std::ofstream file;
  if (!a.output.empty()) {
    file.open(a.output);
    if (!file) throw std::runtime_error("cannot open '" + a.output + "' for writing");
  }
  std::ostream& out = a.output.empty() ? std::cout : file;
  if (a.format == "json") {
    write_json_series(out, series, a);
  } else {
    write_series_csv(out, series, a.theta);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed");

  std::ostream& summary = a.output.empty() ? std::cerr : std::cout;
  summary << "summary: points = " << series.values.size();
  try {
    const auto fit = fit_exponent(series);
    summary << "  slope = " << format_double(fit.slope) << "  intercept = " << format_double(fit.intercept)
            << "  residual = " << format_double(fit.residual) << "  dropped = " << fit.dropped;
  } catch (const DegenerateFit& e) {
    summary << "  slope = n/a (" << e.what() << ")";
  }
  if (!a.self_test && std::holds_alternative<ProgressionSpec>(series.source)) {
    double worst = 0.0;
    for (const auto& row : series_rows(series, a.theta)) worst = std::max(worst, std::abs(row.value) / row.bound_thm52);
    summary << "  max |value|/thm52_rhs = " << format_double(worst) << " (omits " << kOmittedFactor << ")";
  }
  summary << "\n";
  if (a.self_test) {
    const auto fit = fit_exponent(series);
    return std::abs(fit.slope - 0.5) < 1e-12 && fit.residual < 1e-12 ? kExitPass : kExitFail;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kloosterman sums: evaluation, verification suites and sweeps"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate one sum");
  eval->require_subcommand(1);
  EvalArgs ea;
  std::string eval_kind;
  auto add_kind = [&](const std::string& name, const std::string& help) {
    auto* sub = eval->add_subcommand(name, help);
    sub->callback([&eval_kind, name] { eval_kind = name; });
    return sub;
  };
  {
    auto* k = add_kind("kloosterman", "S(m,n;c)");
    k->add_option("--m", ea.m)->required();
    k->add_option("--n", ea.n)->required();
    k->add_option("--c", ea.c)->required();
    k->add_flag("--direct", ea.direct, "enumerate instead of the CRT fast path");

    auto* g = add_kind("gauss", "G(a,b;c)");
    g->add_option("--a", ea.a)->required();
    g->add_option("--b", ea.b)->required();
    g->add_option("--c", ea.c)->required();

    auto* t = add_kind("tsum", "T_f(m,n;q|c)");
    t->add_option("--m", ea.m)->required();
    t->add_option("--n", ea.n)->required();
    t->add_option("--q", ea.q)->required();
    t->add_option("--c", ea.c)->required();
    t->add_option("--f", ea.f)->required();
    t->add_flag("--direct", ea.direct, "enumerate instead of the fast path");

    auto* ir = add_kind("cusp-infty-rq", "S^{chi,kappa}_{infty,r/q} for Gamma_0(Q)");
    ir->add_option("--Q", ea.level)->required();
    ir->add_option("--q", ea.q)->required();
    ir->add_option("--r", ea.r)->required();
    ir->add_option("--chi", ea.chi, "character exponents, comma separated (default principal)");
    ir->add_option("--m", ea.m)->required();
    ir->add_option("--n", ea.n)->required();
    ir->add_option("--c", ea.c)->required();

    auto* rr = add_kind("cusp-rq-rq", "S^{sign,kappa}_{r/q,r/q} for Gamma_{0,+-1}(Q;Q/q)");
    rr->add_option("--Q", ea.level)->required();
    rr->add_option("--q", ea.q)->required();
    rr->add_option("--r", ea.r)->required();
    rr->add_option("--kappa", ea.kappa);
    rr->add_option("--m", ea.m)->required();
    rr->add_option("--n", ea.n)->required();
    rr->add_option("--c", ea.c)->required();

    auto* ii = add_kind("gamma01-infty", "S^{sign,kappa}_{infty,infty} for Gamma_{0,+-1}(Q;Q/q)");
    ii->add_option("--Q", ea.level)->required();
    ii->add_option("--q", ea.q)->required();
    ii->add_option("--kappa", ea.kappa);
    ii->add_option("--m", ea.m)->required();
    ii->add_option("--n", ea.n)->required();
    ii->add_option("--c", ea.c)->required();
  }

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite, vprog;
  VerifyOptions vo;
  i64 dq = 0, dbig_q = 0, da = 1;
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--max-Q", vo.max_Q, "largest level Q");
  verify->add_option("--max-c", vo.max_c, "largest modulus (lemma24/cor33: multiple of Q)");
  verify->add_option("--max-mn", vo.max_mn, "m, n range [-k, k]");
  verify->add_option("--threads", vo.threads);
  verify->add_option("--Q", dbig_q, "decomposition: level");
  verify->add_option("--q", dq, "decomposition: q");
  verify->add_option("--a", da, "decomposition: a");
  verify->add_option("--C", vo.C, "decomposition: C");
  verify->add_option("--B", vo.B, "decomposition: B");
  verify->add_option("--m", vo.m, "decomposition: m");
  verify->add_option("--n", vo.n, "decomposition: n");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Partial sums over a cutoff grid");
  SweepArgs sa;
  sweep->add_option("--m", sa.m);
  sweep->add_option("--n", sa.n);
  sweep->add_option("--progression", sa.progression, "a,q,Q: sum over c = a q (mod Q) of S/c");
  sweep->add_option("--periodic", sa.periodic, "e:P, ind:a,P or a values file: sum of S/sqrt(c) F(c)");
  sweep->add_option("--grid", sa.grid, "geometric:start,ratio,count");
  sweep->add_option("--threads", sa.threads);
  sweep->add_option("--output", sa.output);
  sweep->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--theta", sa.theta);
  sweep->add_flag("--self-test", sa.self_test, "fit a synthetic C^1/2 series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return run_eval(eval_kind, ea);
    if (*verify) {
      std::string prog;
      if (dbig_q > 0) {
        prog = std::to_string(da) + "," + std::to_string(dq ? dq : 1) + "," + std::to_string(dbig_q);
      }
      return run_verify(suite, vo, prog);
    }
    if (*sweep) return run_sweep(sa);
  } catch (const kloos::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
