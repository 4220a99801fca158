#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qell/eli.hpp"
#include "qell/selftest.hpp"
#include "qell/sweep.hpp"

using json = nlohmann::ordered_json;
using namespace qell;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complex literals are kept as text until the precision is settled.
struct ParamText {
  std::map<std::string, std::string> values;
  std::string eps = "none";
  int n = 1, m = 0;
  double tol = 1e-10;
  std::optional<double> pole_guard;

  void attach(CLI::App* app, bool with_n_m) {
    for (const char* p : {"x", "y", "q", "xi", "alpha", "tau"}) {
      app->add_option(std::string("--") + p, values[p], std::string("value of ") + p + " (re, re+imi or imi)");
    }
    if (with_n_m) {
      app->add_option("--n", n, "weight n of the generic eli target")->check(CLI::NonNegativeNumber);
      app->add_option("--m", m, "weight m of the generic eli target")->check(CLI::NonNegativeNumber);
    }
    app->add_option("--eps", eps, "side of a real branch cut")->check(CLI::IsMember({"above", "below", "none"}));
    app->add_option("--tol", tol, "target tolerance")->check(CLI::PositiveNumber);
    app->add_option("--pole-guard", pole_guard, "distance to a pole flagged as near_pole (default sqrt(tol))")
        ->check(CLI::PositiveNumber);
  }

  TargetArgs resolve(const std::string& skip = "") const {
    TargetArgs a;
    for (const auto& [name, text] : values) {
      if (text.empty() || name == skip) continue;
      try {
        a.set(name, parse_complex(text));
      } catch (const std::exception&) {
        throw UsageError("--" + name + ": cannot parse '" + text + "' as a complex literal");
      }
    }
    a.n = n;
    a.m = m;
    a.eps = eps == "above" ? Side::above : eps == "below" ? Side::below : Side::none;
    a.tol = tol;
    a.pole_guard = pole_guard.value_or(std::sqrt(tol));
    return a;
  }
};

json complex_json(const Complex& z) {
  return {{"re", z.real().to_double()}, {"im", z.imag().to_double()}, {"text", z.to_string()}};
}

json result_json(const EvalResult& r) {
  json j;
  j["value"] = complex_json(r.value);
  j["err_estimate"] = r.err_estimate;
  j["terms_used"] = r.terms_used;
  j["method"] = std::string(to_string(r.method));
  j["status"] = std::string(to_string(r.status));
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Target target_or_throw(const std::string& name) {
  auto t = parse_target(name);
  if (!t) throw UsageError("unknown target '" + name + "'");
  return *t;
}

int cmd_eval(const std::string& name, const ParamText& p, Output& out) {
  Target t = target_or_throw(name);
  TargetArgs a = p.resolve();
  EvalResult r = evaluate_target(t, a);
  json j;
  j["target"] = std::string(to_string(t));
  j["precision"] = WorkingPrecision::digits();
  j["tol"] = a.tol;
  json params;
  for (const auto& [k, v] : p.values) {
    if (!v.empty()) params[k] = v;
  }
  if (t == Target::eli) {
    params["n"] = a.n;
    params["m"] = a.m;
  }
  if (a.eps != Side::none) params["eps"] = p.eps;
  j["params"] = params;
  j.update(result_json(r));
  out.stream() << j.dump(2) << '\n';
  return r.ok() ? kExitOk : kExitFailure;
}

struct SweepText {
  std::string target, axis = "x", from, to, figure;
  long steps = 0;
  bool serial = false;
};

int cmd_sweep(const SweepText& s, const ParamText& p, CLI::App* sub, Output& out) {
  SweepSpec spec;
  if (!s.figure.empty()) {
    auto preset = figure_preset(s.figure);
    if (!preset) throw UsageError("unknown figure '" + s.figure + "'");
    spec = *preset;
  }
  // Explicit flags override the preset.
  TargetArgs given = p.resolve(s.axis);
  if (s.figure.empty()) {
    if (s.target.empty() || s.from.empty() || s.to.empty() || s.steps == 0) {
      throw UsageError("sweep needs --figure or --target, --from, --to and --steps");
    }
    spec.fixed = given;
  } else {
    for (const auto& [name, text] : p.values) {
      if (!text.empty() && name != s.axis) spec.fixed.set(name, parse_complex(text));  // validated by resolve()
    }
    if (sub->count("--eps")) spec.fixed.eps = given.eps;
    spec.fixed.n = given.n;
    spec.fixed.m = given.m;
    spec.fixed.tol = given.tol;
    spec.fixed.pole_guard = given.pole_guard;
  }
  if (!s.target.empty()) spec.target = target_or_throw(s.target);
  if (sub->count("--axis")) spec.axis = s.axis;
  try {
    if (!s.from.empty()) spec.from = parse_complex(s.from);
    if (!s.to.empty()) spec.to = parse_complex(s.to);
  } catch (const std::exception&) {
    throw UsageError("--from/--to: cannot parse the range endpoints");
  }
  if (s.steps != 0) spec.steps = s.steps;
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_csv(out.stream(), run_sweep(spec, !s.serial));
  return kExitOk;
}

int cmd_selftest(const SelftestOptions& opt, Output& out) {
  std::vector<SuiteResult> results;
  try {
    results = run_selftest(opt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_report(out.stream(), results);
  bool ok = all_passed(results);
  out.stream() << (ok ? "all suites passed" : "some suites FAILED") << '\n';
  return ok ? kExitOk : kExitFailure;
}

// Closed form, the Phi(1), Phi(q) chain, and a four-point numeric extraction.
int cmd_residue(int n, const ParamText& p, Output& out) {
  TargetArgs a = p.resolve();
  if (n < 1) throw UsageError("--n must be at least 1");
  if (magnitude(a.q) >= 1.0 || a.q.is_zero()) throw UsageError("--q must satisfy 0 < |q| < 1");
  double tol = a.tol;
  Complex closed = residue_x(n, a.y, a.q, tol);
  ResidueChain chain = residue_chain(n, a.y, a.q, tol);
  double h = std::min(1e-4, 0.05 * std::pow(tol, 0.25));
  Complex pole = pow(1 / a.q, n), acc;
  Status st = Status::ok;
  for (Complex step : {Complex(h), Complex(0.0, h), Complex(-h), Complex(0.0, -h)}) {
    EvalResult v = eli00(pole + step, a.y, a.q, tol / 100);
    st = worst(st, v.status);
    acc += step * v.value;
  }
  Complex numeric = acc / 4;
  auto rel = [&](const Complex& v) { return magnitude(v - closed) / magnitude(closed); };
  json j;
  j["n"] = n;
  j["pole"] = complex_json(pole);
  j["closed_form"] = complex_json(closed);
  j["chain"] = {{"phi_one", complex_json(chain.phi_one)},
                {"phi_q", complex_json(chain.phi_q)},
                {"r_n", complex_json(chain.r)},
                {"residue", complex_json(chain.residue)},
                {"rel_diff", rel(chain.residue)}};
  j["numeric"] = {{"step", h}, {"residue", complex_json(numeric)}, {"rel_diff", rel(numeric)},
                  {"status", std::string(to_string(st))}};
  bool ok = st == Status::ok && rel(chain.residue) <= tol && rel(numeric) <= std::max(tol, 1e-3);
  j["status"] = ok ? "ok" : "mismatch";
  out.stream() << j.dump(2) << '\n';
  return ok ? kExitOk : kExitFailure;
}

int apply_precision(std::optional<int> prec) {
  int digits = WorkingPrecision::kDefaultDigits;
  if (const char* env = std::getenv("Q_ELLIPTIC_PREC"); env && *env) {
    try {
      digits = std::stoi(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("Q_ELLIPTIC_PREC: not an integer: '") + env + "'");
    }
  }
  if (prec) digits = *prec;
  if (digits < WorkingPrecision::kMinDigits) {
    throw UsageError("precision must be at least " + std::to_string(WorkingPrecision::kMinDigits) + " digits");
  }
  WorkingPrecision::set_digits(digits);
  return digits;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-hypergeometric and elliptic polylogarithm evaluator"};
  app.require_subcommand(1);
  std::string out_path;
  std::optional<int> prec;
  app.add_option("--out", out_path, "write output to FILE instead of stdout");
  app.add_option("--prec", prec, "working precision in decimal digits (default 32 or Q_ELLIPTIC_PREC)");

  std::string names;
  for (auto n : target_names()) names += (names.empty() ? "" : ", ") + std::string(n);

  auto* eval = app.add_subcommand("eval", "evaluate one target, JSON output");
  std::string eval_target;
  ParamText eval_params;
  eval->add_option("target", eval_target, "one of: " + names)->required();
  eval_params.attach(eval, true);

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter, CSV output");
  SweepText sweep_args;
  ParamText sweep_params;
  sweep->add_option("--figure", sweep_args.figure, "preset: fig1, fig2, fig3, fig3c");
  sweep->add_option("--target", sweep_args.target, "one of: " + names);
  sweep->add_option("--axis", sweep_args.axis, "swept parameter")
      ->check(CLI::IsMember({"x", "y", "q", "xi", "alpha", "tau"}));
  sweep->add_option("--from", sweep_args.from, "first value");
  sweep->add_option("--to", sweep_args.to, "last value");
  sweep->add_option("--steps", sweep_args.steps, "number of rows (>= 2)");
  sweep->add_flag("--serial", sweep_args.serial, "evaluate rows on one thread");
  sweep_params.attach(sweep, true);

  auto* selftest = app.add_subcommand("selftest", "identity residual suites");
  SelftestOptions st_opt;
  std::string suite;
  selftest->add_option("--suite", suite, "run one suite");
  selftest->add_option("--tol", st_opt.tol, "residual threshold")->check(CLI::PositiveNumber);
  selftest->add_option("--draws", st_opt.draws, "random draws per suite")->check(CLI::PositiveNumber);
  selftest->add_flag("--inject-fault", st_opt.inject_fault, "corrupt the contiguous relation (negative control)");

  auto* residue = app.add_subcommand("residue", "residue of ELi_{0;0} in x at x = q^-n");
  int residue_n = 1;
  ParamText residue_params;
  residue->add_option("--n", residue_n, "pole index")->required();
  residue->add_option("--y", residue_params.values["y"], "value of y")->required();
  residue->add_option("--q", residue_params.values["q"], "value of q")->required();
  residue->add_option("--tol", residue_params.tol, "target tolerance")->check(CLI::PositiveNumber);

  for (auto* sub : {eval, sweep, selftest, residue}) {
    sub->add_option("--out", out_path, "write output to FILE instead of stdout");
    sub->add_option("--prec", prec, "working precision in decimal digits");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    apply_precision(prec);
    Output out(out_path);
    if (*eval) return cmd_eval(eval_target, eval_params, out);
    if (*sweep) return cmd_sweep(sweep_args, sweep_params, sweep, out);
    if (*selftest) {
      if (!suite.empty()) st_opt.suite = suite;
      return cmd_selftest(st_opt, out);
    }
    return cmd_residue(residue_n, residue_params, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
