#pragma once

// Config-driven experiment runner: solve, evaluate bounds and checks, write a
// CSV history and a plain-text report.
//
// Exit codes: 0 all checks pass, 2 some hypothesis failed (the run still
// completes), 1 any other check failure or a solver/IO error.

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fracasym/asymptotics.hpp"
#include "fracasym/bihari_bounds.hpp"
#include "fracasym/catalog.hpp"
#include "fracasym/errors.hpp"
#include "fracasym/fde_solvers.hpp"
#include "fracasym/fracops.hpp"

namespace fracasym::harness {

using json = nlohmann::json;
namespace fs = std::filesystem;
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckSpec {
  std::string type;
  std::string name;
  double tol = 0.0;
  std::string bound;     // power_growth | fractional_source | boundedness
  std::string quantity;  // regression target
  double compare_t_end = 0.0;
  std::size_t compare_n_steps = 0;
  double tau0 = 0.0;  // 0: grid step
  LqVariant variant = LqVariant::corrected;
};

struct StudySpec {
  std::string type;  // solver | semigroup | composition
  std::string function;
  double alpha = 0.5;
  double beta = 0.5;
  double min_order = 0.0;
  double min_ratio = 0.0;
  double max_error = 0.0;
};

struct ExperimentConfig {
  std::string name;
  std::string catalog_id;
  ProblemSettings settings;
  bool has_problem = false;
  double t_end = 1.0;
  std::size_t n_steps = 1024;
  int refinement_levels = 1;
  std::vector<CheckSpec> checks;
  std::optional<StudySpec> study;
  std::string csv_path;
  std::string report_path;
  std::string expectations;
  std::uint64_t seed = 0;
  fs::path base_dir = ".";
  fs::path out_dir = ".";
  json echo;
};

namespace detail {

inline void expect_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& where) {
  if (!obj.is_object()) throw config_error(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw config_error(where + ": unknown key '" + key + "'");
    (void)value;
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

inline double positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw config_error(what + " must be positive");
  return v;
}

inline const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"slope_agreement", 1e-2}, {"slope_spread", 1e-2}, {"slope_extrapolation", 1e-2},
      {"lhopital", 1e-2},        {"bound_envelope", 1e-9}, {"boundedness", 1e-9},
      {"hypothesis", 1.0},       {"residual", 1e-3},     {"exact_error", 1e-3},
      {"regression", 1e-9}};
  return t;
}

inline CheckSpec parse_check(const json& j, std::size_t index) {
  const std::string where = "checks[" + std::to_string(index) + "]";
  expect_keys(j,
              {"type", "name", "tol", "bound", "quantity", "compare_t_end", "compare_n_steps",
               "tau0", "variant"},
              where);
  CheckSpec c;
  c.type = j.at("type").get<std::string>();
  const auto& defaults = default_tolerances();
  if (!defaults.contains(c.type)) throw config_error(where + ": unknown check type '" + c.type + "'");
  c.tol = positive(get_or<double>(j, "tol", defaults.at(c.type)), where + ".tol");
  c.bound = get_or<std::string>(j, "bound", c.type == "boundedness" ? "boundedness" : "");
  c.quantity = get_or<std::string>(j, "quantity", "");
  c.compare_t_end = get_or<double>(j, "compare_t_end", 0.0);
  c.compare_n_steps = get_or<std::size_t>(j, "compare_n_steps", 0);
  c.tau0 = get_or<double>(j, "tau0", 0.0);
  const std::string variant = get_or<std::string>(j, "variant", "corrected");
  if (variant == "corrected") {
    c.variant = LqVariant::corrected;
  } else if (variant == "literal") {
    c.variant = LqVariant::literal;
  } else {
    throw config_error(where + ".variant must be 'corrected' or 'literal'");
  }
  if ((c.type == "bound_envelope" || c.type == "hypothesis") &&
      c.bound != "power_growth" && c.bound != "fractional_source" && c.bound != "boundedness") {
    throw config_error(where + ".bound must be power_growth, fractional_source or boundedness");
  }
  if (c.type == "regression" && c.quantity.empty()) {
    throw config_error(where + ": regression checks need a quantity");
  }
  c.name = get_or<std::string>(j, "name", c.type + (c.bound.empty() || c.type == "boundedness"
                                                        ? ""
                                                        : "_" + c.bound) +
                                              (c.quantity.empty() ? "" : "_" + c.quantity));
  return c;
}

}  // namespace detail

/// Parses a config document; unknown keys anywhere are errors.
inline ExperimentConfig parse_config(const json& j, const fs::path& base_dir = ".") {
  using detail::expect_keys;
  using detail::get_or;
  expect_keys(j, {"name", "problem", "grid", "checks", "study", "output", "seed", "expectations"},
              "config");
  ExperimentConfig c;
  c.echo = j;
  c.base_dir = base_dir;
  c.name = j.at("name").get<std::string>();
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  c.expectations = get_or<std::string>(j, "expectations", "");

  if (j.contains("problem")) {
    const json& p = j.at("problem");
    expect_keys(p, {"catalog", "kind", "alpha", "beta", "b1", "b2", "params"}, "problem");
    c.has_problem = true;
    c.catalog_id = p.at("catalog").get<std::string>();
    const std::string kind = p.at("kind").get<std::string>();
    if (kind == "sequential") {
      c.settings.kind = ProblemKind::sequential;
    } else if (kind == "direct") {
      c.settings.kind = ProblemKind::direct;
    } else {
      throw config_error("problem.kind must be 'sequential' or 'direct'");
    }
    c.settings.alpha = p.at("alpha").get<double>();
    c.settings.beta = get_or<double>(p, "beta", 0.0);
    c.settings.b1 = get_or<double>(p, "b1", 0.0);
    c.settings.b2 = get_or<double>(p, "b2", 0.0);
    if (p.contains("params")) {
      if (!p.at("params").is_object()) throw config_error("problem.params must be an object");
      for (const auto& [k, v] : p.at("params").items()) c.settings.params[k] = v.get<double>();
    }
    try {
      (void)build_problem(c.catalog_id, c.settings);
    } catch (const std::exception& e) {
      throw config_error(std::string("problem: ") + e.what());
    }
  }

  const json& g = j.at("grid");
  expect_keys(g, {"t_end", "n_steps", "refinement_levels"}, "grid");
  c.t_end = detail::positive(g.at("t_end").get<double>(), "grid.t_end");
  c.n_steps = g.at("n_steps").get<std::size_t>();
  if (c.n_steps < 2) throw config_error("grid.n_steps must be at least 2");
  c.refinement_levels = get_or<int>(g, "refinement_levels", 1);
  if (c.refinement_levels < 1) throw config_error("grid.refinement_levels must be >= 1");

  if (j.contains("checks")) {
    if (!j.at("checks").is_array()) throw config_error("checks must be an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < j.at("checks").size(); ++i) {
      CheckSpec cs = detail::parse_check(j.at("checks")[i], i);
      if (!names.insert(cs.name).second) throw config_error("duplicate check name '" + cs.name + "'");
      c.checks.push_back(std::move(cs));
    }
  }
  if (j.contains("study")) {
    const json& s = j.at("study");
    expect_keys(s, {"type", "function", "alpha", "beta", "min_order", "min_ratio", "max_error"},
                "study");
    StudySpec st;
    st.type = s.at("type").get<std::string>();
    if (st.type != "solver" && st.type != "semigroup" && st.type != "composition") {
      throw config_error("study.type must be solver, semigroup or composition");
    }
    st.function = get_or<std::string>(s, "function", "");
    st.alpha = get_or<double>(s, "alpha", 0.5);
    st.beta = get_or<double>(s, "beta", 0.5);
    st.min_order = get_or<double>(s, "min_order", 0.0);
    st.min_ratio = get_or<double>(s, "min_ratio", 0.0);
    st.max_error = get_or<double>(s, "max_error", 0.0);
    if (st.type == "solver" && !c.has_problem) throw config_error("solver study needs a problem");
    if (st.type != "solver") {
      try {
        (void)study_function(st.function);
      } catch (const std::exception& e) {
        throw config_error(std::string("study.function: ") + e.what());
      }
    }
    c.study = st;
  } else if (!c.has_problem) {
    throw config_error("config needs a problem or a study");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    expect_keys(o, {"csv_path", "report_path"}, "output");
    c.csv_path = get_or<std::string>(o, "csv_path", "");
    c.report_path = get_or<std::string>(o, "report_path", "");
  }
  return c;
}

inline ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }
  try {
    return parse_config(j, path.parent_path());
  } catch (const json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

enum class Verdict { pass, fail, failed_hypothesis };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    default: return "FAILED-HYPOTHESIS";
  }
}

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::fail;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double expected = std::numeric_limits<double>::quiet_NaN();
  double tol = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct RunReport {
  std::string name;
  std::string echo;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> timings;
  std::map<std::string, double> quantities;
  std::vector<std::string> lines;  ///< free-form detail (study levels)
  std::optional<std::string> abort_reason;

  bool passed() const {
    if (abort_reason) return false;
    for (const CheckResult& c : checks) {
      if (c.verdict != Verdict::pass) return false;
    }
    return true;
  }

  int exit_code() const {
    if (abort_reason) return 1;
    for (const CheckResult& c : checks) {
      if (c.verdict == Verdict::failed_hypothesis) return 2;
    }
    return passed() ? 0 : 1;
  }
};

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string format_report(const RunReport& r) {
  std::ostringstream out;
  out << "experiment " << r.name << "\n";
  out << "config " << r.echo << "\n";
  for (const auto& [stage, secs] : r.timings) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "time %s %.3fs\n", stage.c_str(), secs);
    out << buf;
  }
  for (const std::string& l : r.lines) out << l << "\n";
  for (const CheckResult& c : r.checks) {
    out << "CHECK " << c.name << ": " << to_string(c.verdict) << " measured=" << format_number(c.measured)
        << " expected=" << format_number(c.expected) << " tol=" << format_number(c.tol);
    if (!c.note.empty()) out << "  # " << c.note;
    out << "\n";
  }
  if (r.abort_reason) out << "ABORT " << *r.abort_reason << "\n";
  out << "OVERALL " << (r.passed() ? "PASS" : "FAIL") << " exit=" << r.exit_code() << "\n";
  return out.str();
}

/// Solution history as CSV. Undefined entries (x/τ^α at τ = 0, a missing
/// bound curve) are left empty.
inline void write_csv(const fs::path& path, const Solution& sol,
                      const std::function<double(double)>& bound_curve) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "tau,x,dbeta_x,dalpha_x,bound_curve,x_over_tau_alpha\n";
  const double alpha = sol.spec.alpha;
  for (std::size_t j = 0; j < sol.x.size(); ++j) {
    const double tau = sol.x.node(j);
    out << format_number(tau) << ',' << format_number(sol.x[j]) << ','
        << format_number(sol.dbeta_x[j]) << ',' << format_number(sol.dalpha_x[j]) << ',';
    if (bound_curve) out << format_number(bound_curve(tau));
    out << ',';
    if (j > 0) out << format_number(sol.x[j] / std::pow(tau, alpha));
    out << '\n';
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

namespace detail {

using BoundOutcome = std::variant<BoundReport, std::string>;  // report or hypothesis failure

class Experiment {
 public:
  Experiment(const ExperimentConfig& cfg, RunReport& report) : cfg_(cfg), report_(report) {}

  void solve_main() {
    problem_ = build_problem(cfg_.catalog_id, cfg_.settings);
    const auto t0 = std::chrono::steady_clock::now();
    sol_ = solve(problem_->spec, cfg_.t_end, cfg_.n_steps);
    report_.timings.emplace_back("solve", seconds_since(t0));
    auto& q = report_.quantities;
    q["x_final"] = sol_->x.back();
    q["dbeta_final"] = sol_->dbeta_x.back();
    double sx = 0.0, sd = 0.0;
    for (std::size_t j = 0; j < sol_->x.size(); ++j) {
      sx = std::max(sx, std::abs(sol_->x[j]));
      sd = std::max(sd, std::abs(sol_->dbeta_x[j]));
    }
    q["sup_x"] = sx;
    q["sup_dbeta"] = sd;
    if (cfg_.t_end >= 10.0 && cfg_.n_steps % 4 == 0) {
      const SlopeEstimate s = power_slope(*sol_);
      q["slope_raw"] = s.raw_tail;
      q["slope_accelerated"] = s.accelerated;
      q["slope_spread"] = s.spread;
    }
    q["lhopital_residual"] = lhopital_residual(*sol_);
  }

  CheckResult evaluate(const CheckSpec& c) {
    CheckResult r{c.name, Verdict::fail, kNaN, kNaN, kNaN, ""};
    r.tol = c.tol;
    const auto t0 = std::chrono::steady_clock::now();
    if (c.type == "slope_agreement") {
      const double tc = c.compare_t_end > 0.0 ? c.compare_t_end : cfg_.t_end / 2.0;
      const std::size_t nc = c.compare_n_steps > 0 ? c.compare_n_steps : cfg_.n_steps / 2;
      const Solution other = solve(problem_->spec, tc, nc);
      const double a = slope().raw_tail;
      const double b = power_slope(other).raw_tail;
      report_.quantities["slope_raw_compare"] = b;
      r.measured = std::abs(a - b) / std::abs(a);
      r.expected = 0.0;
      r.note = "x/tau^alpha at T=" + std::to_string(cfg_.t_end) + " vs T=" + std::to_string(tc);
      r.verdict = r.measured <= c.tol ? Verdict::pass : Verdict::fail;
    } else if (c.type == "slope_spread") {
      const SlopeEstimate s = slope();
      r.measured = s.spread / std::abs(s.raw_tail);
      r.expected = 0.0;
      r.note = "trailing-window spread relative to |a|";
      r.verdict = r.measured <= c.tol ? Verdict::pass : Verdict::fail;
    } else if (c.type == "slope_extrapolation") {
      const SlopeEstimate s = slope();
      r.measured = std::abs(s.raw_tail - s.accelerated) / std::abs(s.raw_tail);
      r.expected = 0.0;
      r.note = "raw vs Aitken-accelerated slope";
      r.verdict = r.measured <= c.tol ? Verdict::pass : Verdict::fail;
    } else if (c.type == "lhopital") {
      r.measured = lhopital_residual(*sol_);
      r.expected = 0.0;
      r.verdict = r.measured < c.tol ? Verdict::pass : Verdict::fail;
    } else if (c.type == "residual") {
      r.measured = residual_check(*sol_);
      report_.quantities["residual"] = r.measured;
      r.expected = 0.0;
      r.verdict = r.measured <= c.tol ? Verdict::pass : Verdict::fail;
    } else if (c.type == "exact_error") {
      if (!problem_->exact_x) {
        r.note = "catalog entry has no exact solution";
      } else {
        double e = 0.0;
        for (std::size_t j = 0; j < sol_->x.size(); ++j) {
          e = std::max(e, std::abs(sol_->x[j] - problem_->exact_x(sol_->x.node(j))));
        }
        r.measured = e;
        r.expected = 0.0;
        r.verdict = e <= c.tol ? Verdict::pass : Verdict::fail;
      }
    } else if (c.type == "hypothesis") {
      const BoundOutcome& b = bound(c);
      r.expected = 1.0;
      if (std::holds_alternative<std::string>(b)) {
        r.measured = 0.0;
        r.note = std::get<std::string>(b);
        r.verdict = Verdict::failed_hypothesis;
      } else {
        r.measured = 1.0;
        r.verdict = Verdict::pass;
      }
    } else if (c.type == "bound_envelope" || c.type == "boundedness") {
      const BoundOutcome& b = bound(c);
      if (std::holds_alternative<std::string>(b)) {
        r.note = std::get<std::string>(b);
        r.verdict = Verdict::failed_hypothesis;
      } else {
        const BoundReport& rep = std::get<BoundReport>(b);
        const BoundednessVerdict v = envelope_verdict(*sol_, rep);
        if (c.type == "boundedness") {
          const double cc = rep.constant("C");
          r.measured = std::max(v.sup_x, v.sup_dbeta);
          r.expected = cc;
          r.note = "sup|x|=" + format_number(v.sup_x) + " sup|D^beta x|=" + format_number(v.sup_dbeta);
          r.verdict = v.within_bound && std::isfinite(r.measured) ? Verdict::pass : Verdict::fail;
        } else {
          r.measured = max_envelope_ratio(rep);
          r.expected = 1.0;
          r.verdict = v.within_bound ? Verdict::pass : Verdict::fail;
          if (!v.within_bound) r.note = "first violation at node " + std::to_string(v.first_violation);
        }
        if (!bound_curve_) bound_curve_ = rep.envelope;
      }
    } else if (c.type == "regression") {
      r.measured = quantity(c.quantity);
      const auto expected = expectation(c.quantity);
      if (!expected) {
        r.note = "no pinned value for " + c.quantity;
      } else {
        r.expected = *expected;
        const double scale = std::max(std::abs(*expected), 1e-300);
        r.verdict = std::abs(r.measured - *expected) <= c.tol * scale ? Verdict::pass : Verdict::fail;
      }
    }
    report_.timings.emplace_back("check " + c.name, seconds_since(t0));
    return r;
  }

  /// Resolves a quantity name, computing bound constants on demand
  /// ("<source>.<constant>").
  double quantity(const std::string& name) {
    const auto dot = name.find('.');
    if (dot != std::string::npos) {
      CheckSpec c;
      c.bound = name.substr(0, dot);
      const BoundOutcome& b = bound(c);
      if (std::holds_alternative<std::string>(b)) return std::numeric_limits<double>::quiet_NaN();
    }
    const auto it = report_.quantities.find(name);
    if (it == report_.quantities.end()) {
      if (name == "residual") return report_.quantities[name] = residual_check(*sol_);
      throw config_error("unknown quantity '" + name + "'");
    }
    return it->second;
  }

  const Solution& solution() const { return *sol_; }
  const std::function<double(double)>& bound_curve() const { return bound_curve_; }

 private:
  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  SlopeEstimate slope() const { return power_slope(*sol_); }

  double max_envelope_ratio(const BoundReport& rep) const {
    double m = 0.0;
    for (std::size_t j = 0; j < sol_->x.size(); ++j) {
      const double tau = sol_->x.node(j);
      const double env = rep.envelope(tau);
      if (env > 0.0) m = std::max(m, std::abs(sol_->x[j]) / env);
    }
    return m;
  }

  std::optional<double> expectation(const std::string& q) {
    if (!expectations_) {
      expectations_ = json::object();
      if (!cfg_.expectations.empty()) {
        std::ifstream in(cfg_.base_dir / cfg_.expectations);
        if (in) expectations_ = json::parse(in);
      }
    }
    if (!expectations_->contains(q)) return std::nullopt;
    return expectations_->at(q).get<double>();
  }

  const BoundOutcome& bound(const CheckSpec& c) {
    const std::string key = c.bound + (c.variant == LqVariant::literal ? "/literal" : "");
    if (const auto it = bounds_.find(key); it != bounds_.end()) return it->second;
    BoundOutcome out = compute_bound(c);
    if (const auto* rep = std::get_if<BoundReport>(&out)) {
      for (const auto& [k, v] : rep->constants) report_.quantities[c.bound + "." + k] = v;
    }
    return bounds_.emplace(key, std::move(out)).first->second;
  }

  BoundOutcome compute_bound(const CheckSpec& c) {
    const ProblemSpec& spec = problem_->spec;
    try {
      if (c.bound == "power_growth") {
        if (!problem_->power_growth) return "catalog entry carries no power-growth data";
        const PowerGrowthData& d = *problem_->power_growth;
        const ClassCheck cls = check_phi_class(d.phi, 64, 256, cfg_.seed);
        if (!cls.ok) return "phi not in class Phi: " + cls.reason;
        return theorem41_constants(spec.b1, spec.b2, spec.alpha, d.p, d.phi);
      }
      if (c.bound == "fractional_source") {
        if (!problem_->fractional_source) return "catalog entry carries no class-M data";
        const FractionalSourceData& d = *problem_->fractional_source;
        return theorem52_constant(spec.b1, spec.b2, spec.alpha, spec.beta, d.f1, d.f2);
      }
      if (!problem_->boundedness) return "catalog entry carries no boundedness data";
      const BoundednessData& d = *problem_->boundedness;
      const double tau0 = c.tau0 > 0.0 ? c.tau0 : sol_->x.step();
      return theorem62_bound(spec, d.h, d.phi1, d.phi2, d.q, tau0, c.variant);
    } catch (const hypothesis_violation& e) {
      return std::string(e.what());
    } catch (const class_violation& e) {
      return std::string(e.what());
    }
  }

  const ExperimentConfig& cfg_;
  RunReport& report_;
  std::optional<CatalogProblem> problem_;
  std::optional<Solution> sol_;
  std::map<std::string, BoundOutcome> bounds_;
  std::optional<json> expectations_;
  std::function<double(double)> bound_curve_;
};

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline RunReport start_report(const ExperimentConfig& cfg) {
  RunReport r;
  r.name = cfg.name;
  r.echo = cfg.echo.dump();
  return r;
}

inline void finish(const ExperimentConfig& cfg, const RunReport& report) {
  if (!cfg.report_path.empty()) write_text(cfg.out_dir / cfg.report_path, format_report(report));
}

}  // namespace detail

/// Solve, evaluate every configured check once, write CSV and report.
/// Solver step failures abort the run; the report records the node.
inline RunReport run(const ExperimentConfig& cfg) {
  RunReport report = detail::start_report(cfg);
  if (!cfg.has_problem) throw config_error("run: config has no problem");
  detail::Experiment ex(cfg, report);
  try {
    ex.solve_main();
    for (const CheckSpec& c : cfg.checks) report.checks.push_back(ex.evaluate(c));
  } catch (const step_failure& e) {
    report.abort_reason = std::string("solver step failure at node ") + std::to_string(e.node()) +
                          ": " + e.what();
    detail::finish(cfg, report);
    return report;
  }
  if (!cfg.csv_path.empty()) write_csv(cfg.out_dir / cfg.csv_path, ex.solution(), ex.bound_curve());
  detail::finish(cfg, report);
  return report;
}

/// Quantities to pin: everything `run` measured plus residual_check.
inline std::map<std::string, double> pin_quantities(const ExperimentConfig& cfg) {
  RunReport report = detail::start_report(cfg);
  detail::Experiment ex(cfg, report);
  ex.solve_main();
  for (const CheckSpec& c : cfg.checks) {
    if (c.type != "regression") (void)ex.evaluate(c);
  }
  (void)ex.quantity("residual");
  return report.quantities;
}

/// Grid-refinement study: refinement_levels grids starting at n_steps,
/// doubling each time. Reports errors (or residuals) and log2 ratios.
inline RunReport convergence_study(const ExperimentConfig& cfg) {
  RunReport report = detail::start_report(cfg);
  if (!cfg.study) throw config_error("study: config has no study section");
  const StudySpec& st = *cfg.study;
  std::vector<std::size_t> levels;
  std::vector<double> errors;
  std::size_t n = cfg.n_steps;
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<CatalogProblem> problem;
  if (st.type == "solver") problem = build_problem(cfg.catalog_id, cfg.settings);
  if (st.type == "solver" && !problem->exact_x) throw config_error("study: no exact solution");
  for (int l = 0; l < cfg.refinement_levels; ++l, n *= 2) {
    double e = 0.0;
    if (st.type == "solver") {
      try {
        const Solution sol = solve(problem->spec, cfg.t_end, n);
        for (std::size_t j = 0; j < sol.x.size(); ++j) {
          e = std::max(e, std::abs(sol.x[j] - problem->exact_x(sol.x.node(j))));
        }
      } catch (const step_failure& ex) {
        report.abort_reason = "solver step failure at node " + std::to_string(ex.node()) +
                              " (N=" + std::to_string(n) + "): " + ex.what();
        detail::finish(cfg, report);
        return report;
      }
    } else {
      const StudyFunction& f = study_function(st.function);
      const GridFunction g = GridFunction::sample(f.eval, cfg.t_end, n);
      e = st.type == "semigroup"
              ? compose_check_semigroup(g, FractionalOrder(st.alpha), FractionalOrder(st.beta))
              : composition_identity(g, FractionalOrder(st.alpha), FractionalOrder(st.beta));
    }
    levels.push_back(n);
    errors.push_back(e);
  }
  report.timings.emplace_back("study", std::chrono::duration<double>(
                                           std::chrono::steady_clock::now() - t0)
                                           .count());

  constexpr double exact_level = 1e-13;
  double min_order = std::numeric_limits<double>::infinity();
  double min_ratio = std::numeric_limits<double>::infinity();
  bool exact = true;
  std::ostringstream csv;
  csv << "n_steps,error,order\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    std::string order = "";
    if (i > 0) {
      if (errors[i] <= exact_level && errors[i - 1] <= exact_level) {
        order = "exact";
      } else {
        const double ratio = errors[i - 1] / errors[i];
        min_ratio = std::min(min_ratio, ratio);
        min_order = std::min(min_order, std::log2(ratio));
        order = format_number(std::log2(ratio));
      }
    }
    exact = exact && errors[i] <= exact_level;
    report.lines.push_back("LEVEL n_steps=" + std::to_string(levels[i]) +
                           " error=" + format_number(errors[i]) + " order=" + (order.empty() ? "-" : order));
    csv << levels[i] << ',' << format_number(errors[i]) << ',' << order << '\n';
  }
  report.quantities["final_error"] = errors.back();
  if (std::isfinite(min_order)) report.quantities["min_order"] = min_order;

  if (st.max_error > 0.0) {
    report.checks.push_back({"final_error", errors.back() <= st.max_error ? Verdict::pass : Verdict::fail,
                             errors.back(), 0.0, st.max_error, ""});
  }
  if (st.min_order > 0.0 && levels.size() > 1) {
    CheckResult c{"min_order", Verdict::fail, exact ? kInf : min_order, st.min_order, 0.0,
                  exact ? "errors at round-off; order reported as exact" : ""};
    c.verdict = exact || min_order >= st.min_order ? Verdict::pass : Verdict::fail;
    report.checks.push_back(c);
  }
  if (st.min_ratio > 0.0 && levels.size() > 1) {
    CheckResult c{"min_ratio", Verdict::fail, exact ? kInf : min_ratio, st.min_ratio, 0.0,
                  exact ? "errors at round-off" : ""};
    c.verdict = exact || min_ratio >= st.min_ratio ? Verdict::pass : Verdict::fail;
    report.checks.push_back(c);
  }
  if (!cfg.csv_path.empty()) detail::write_text(cfg.out_dir / cfg.csv_path, csv.str());
  detail::finish(cfg, report);
  return report;
}

}  // namespace fracasym::harness
