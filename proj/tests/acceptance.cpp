// Acceptance runner: one PASS/FAIL line per criterion, details indented below.

#include <CLI11.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracasym/harness.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace fracasym;
using namespace fracasym::harness;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  double budget_s = 0.0;  // 0: no runtime limit

  void note(const std::string& s) { details.push_back(s); }
  void require(bool ok, const std::string& s) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok    " : "FAIL  ") + s);
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double order_of(double coarse, double fine) {
  constexpr double roundoff = 1e-13;
  if (coarse <= roundoff && fine <= roundoff) return INFINITY;
  return std::log2(coarse / fine);
}

const fs::path kConfigs = FRACASYM_CONFIG_DIR;

struct Paths {
  std::string cli;
  fs::path work;
};

// --------------------------------------------------------------------------

Outcome criterion1(const Paths&) {
  Outcome o;
  o.budget_s = 5.0;
  const std::array<std::size_t, 3> levels{1024, 2048, 4096};
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7}) {
    for (double b : {1.0, 1.5, 2.0}) {
      for (PowerRuleKind kind : {PowerRuleKind::integral, PowerRuleKind::caputo}) {
        std::array<double, 3> err{};
        for (std::size_t l = 0; l < levels.size(); ++l) {
          const GridFunction g = GridFunction::sample([b](double t) { return std::pow(t, b - 1.0); }, 1.0, levels[l]);
          const GridFunction r = kind == PowerRuleKind::integral ? rl_integral(g, FractionalOrder(a))
                                                                 : caputo_derivative(g, FractionalOrder(a));
          const double exact = exact_power_rule(kind, a, b, 1.0);
          // the Caputo image of a constant is 0: absolute error there
          err[l] = exact == 0.0 ? std::abs(r.back()) : std::abs(r.back() - exact) / std::abs(exact);
        }
        const double ord = std::min(order_of(err[0], err[1]), order_of(err[1], err[2]));
        const std::string tag = std::string(kind == PowerRuleKind::integral ? "J" : "D") + "^" + num(a) +
                                " t^" + num(b - 1.0);
        worst = std::max(worst, err[2]);
        o.require(err[2] <= 1e-4, tag + " rel err at N=4096: " + num(err[2]));
        o.require(ord >= 1.5, tag + " order over 1024->4096: " + num(ord));
      }
    }
  }
  o.note("worst error " + num(worst));
  return o;
}

Outcome criterion2(const Paths&) {
  Outcome o;
  auto study = [&](const std::string& fn, double a, double b, bool semigroup) {
    const StudyFunction& f = study_function(fn);
    std::array<double, 2> r{};
    for (std::size_t l = 0; l < 2; ++l) {
      const GridFunction g = GridFunction::sample(f.eval, 1.0, 2048u << l);
      r[l] = semigroup ? compose_check_semigroup(g, FractionalOrder(a), FractionalOrder(b))
                       : composition_identity(g, FractionalOrder(a), FractionalOrder(b));
    }
    const double ratio = r[1] > 0.0 ? r[0] / r[1] : INFINITY;
    const std::string tag = fn + " (" + num(a) + ", " + num(b) + ")";
    o.require(r[0] < 5e-4, tag + " residual at N=2048: " + num(r[0]));
    o.require(ratio >= 2.0, tag + " ratio 2048->4096: " + num(ratio));
  };
  for (const char* fn : {"semigroup_sin", "semigroup_cos"}) {
    study(fn, 0.3, 0.4, true);
    study(fn, 0.5, 0.5, true);
    study(fn, 0.7, 0.6, true);
  }
  for (const char* fn : {"composition_power", "composition_sin"}) {
    study(fn, 0.5, 0.25, false);
    study(fn, 0.7, 0.3, false);
  }
  return o;
}

Outcome criterion3(const Paths&) {
  Outcome o;
  o.budget_s = 10.0;
  const ProblemSettings direct{ProblemKind::direct, 0.5, 0.25, 0.0, 0.0, {{"mu", 2.0}}};
  const CatalogProblem m = build_problem("manufactured_power_mu", direct);
  const ProblemSettings seq{ProblemKind::sequential, 0.5, 0.25, 1.0, 1.0, {}};
  const CatalogProblem z = build_problem("zero_rhs", seq);

  auto max_err = [](const CatalogProblem& p, std::size_t n) {
    const Solution s = solve(p.spec, 1.0, n);
    double e = 0.0;
    for (std::size_t j = 0; j < s.x.size(); ++j) e = std::max(e, std::abs(s.x[j] - p.exact_x(s.x.node(j))));
    return e;
  };
  const double m1 = max_err(m, 2048), m2 = max_err(m, 4096);
  const double z1 = max_err(z, 2048), z2 = max_err(z, 4096);
  o.require(m1 <= 1e-3, "direct tau^2 max error at N=2048: " + num(m1));
  o.require(order_of(m1, m2) >= 1.0, "direct tau^2 order: " + num(order_of(m1, m2)));
  o.require(z1 <= 1e-10, "sequential zero-rhs max error at N=2048: " + num(z1));
  const double zo = order_of(z1, z2);
  o.require(zo >= 1.0, "sequential zero-rhs order: " + (std::isinf(zo) ? std::string("exact") : num(zo)));
  return o;
}

// Runs a builtin config through the harness and copies named check verdicts.
RunReport run_builtin(const std::string& name, const fs::path& out) {
  ExperimentConfig cfg = load_config(kConfigs / (name + ".json"));
  fs::create_directories(out);
  cfg.out_dir = out;
  return run(cfg);
}

void require_check(Outcome& o, const RunReport& r, const std::string& name) {
  for (const CheckResult& c : r.checks) {
    if (c.name == name) {
      o.require(c.verdict == Verdict::pass, name + ": measured " + num(c.measured) + " tol " + num(c.tol) +
                                                (c.note.empty() ? "" : "  (" + c.note + ")"));
      return;
    }
  }
  o.require(false, name + ": check missing from config");
}

Outcome criterion4(const Paths& p) {
  Outcome o;
  o.budget_s = 60.0;
  const RunReport r = run_builtin("example46", p.work / "criterion4");
  if (r.abort_reason) {
    o.require(false, "aborted: " + *r.abort_reason);
    return o;
  }
  require_check(o, r, "hypothesis_power_growth");
  require_check(o, r, "slope_agreement");
  require_check(o, r, "slope_spread");
  require_check(o, r, "lhopital");
  require_check(o, r, "bound_envelope_power_growth");
  o.note("slope raw " + num(r.quantities.at("slope_raw")) + ", accelerated " +
         num(r.quantities.at("slope_accelerated")));
  return o;
}

Outcome criterion5(const Paths& p) {
  Outcome o;
  o.budget_s = 60.0;
  const RunReport r = run_builtin("example63", p.work / "criterion5");
  if (r.abort_reason) {
    o.require(false, "aborted: " + *r.abort_reason);
    return o;
  }
  require_check(o, r, "hypothesis_boundedness");
  require_check(o, r, "boundedness");
  const double sx = r.quantities.at("sup_x"), sd = r.quantities.at("sup_dbeta");
  o.require(std::isfinite(sx) && std::isfinite(sd), "sups finite: sup_x " + num(sx) + ", sup_dbeta " + num(sd));
  o.note("C = " + num(r.quantities.at("boundedness.C")));

  // phi1 phi2 = s^{3/5} s^{1/3}: the divergence integrand is s^{-14/15}
  const CatalogProblem cp = build_problem(
      "example63", {ProblemKind::direct, 2.0 / 3.0, 1.0 / 3.0, 1.0, 0.0, {{"q", 4.0}, {"lambda", 1.0}}});
  const BoundednessData& d = *cp.boundedness;
  const double q = d.q;
  const Integrand inv{"s^{-14/15}",
                      [&](double s) {
                        const double r1 = std::pow(s, 1.0 / q);
                        return 1.0 / std::pow(d.phi1(r1) * d.phi2(r1), q);
                      },
                      TailSpec::power_law(-(*d.phi1.growth_exponent + *d.phi2.growth_exponent))};
  const TailResult t = improper_tail(inv, 0.0, 1.0);
  o.require(t.verdict == TailVerdict::diverges, std::string("int ds/s^{14/15} verdict: ") + to_string(t.verdict));
  o.require(std::abs(inv(7.0) - std::pow(7.0, -14.0 / 15.0)) < 1e-12, "integrand equals s^{-14/15}");
  return o;
}

Outcome criterion6(const Paths&) {
  Outcome o;
  auto suite = [&](const std::string& tag, const oracle::SuiteStats& s) {
    o.require(s.instances >= 20 && s.dominated == s.instances && s.unconverged == 0,
              tag + ": " + std::to_string(s.dominated) + "/" + std::to_string(s.instances) +
                  " dominated, worst oracle/bound " + num(s.worst_ratio));
  };
  suite("bihari", oracle::bihari_suite(1001, 24));
  suite("linear class", oracle::linear_class_suite(2002, 24));
  suite("Lq (corrected constants)", oracle::lq_suite(3003, 24, LqVariant::corrected));
  const oracle::SuiteStats lit = oracle::lq_suite(3003, 24, LqVariant::literal);
  o.note("Lq literal constants: " + std::to_string(lit.dominated) + "/" + std::to_string(lit.instances) +
         " dominated, worst " + num(lit.worst_ratio));

  oracle::Rng rng(6006);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GridFunction g = oracle::random_grid(rng, 2.0, 200, 2.0);
    const double c1 = oracle::uniform(rng, 0.1, 3.0), c3 = oracle::uniform(rng, 0.1, 2.0);
    for (double tau : {0.25, 0.5, 0.99}) {
      const double closed = c1 * std::exp(c3 * weighted_integral(g, 0.0, 0.0, tau));
      const double b = bihari_bound(c1, 0.0, c3, 0.5, g, PhiFunction::identity(), tau);
      worst = std::max(worst, std::abs(b / closed - 1.0));
    }
  }
  o.require(worst <= 1e-6, "Gronwall reduction max relative deviation: " + num(worst));
  return o;
}

Outcome criterion7(const Paths&) {
  Outcome o;
  const std::array<std::array<double, 3>, 3> triples{{{1.0, 1.0, 2.0}, {0.8, 0.5, 3.0}, {0.6, 0.0, 2.0}}};
  std::uint64_t seed = 7001;
  for (const auto& [u, l, r] : triples) {
    const oracle::HolderStats s = oracle::holder_suite(u, l, r, seed++, 20);
    const double c = convolution_holder_constant(u, l, r);
    const std::string tag = "(" + num(u) + ", " + num(l) + ", " + num(r) + ")";
    o.require(s.held == s.instances, tag + " with C = " + num(c) + ": held " + std::to_string(s.held) + "/" +
                                         std::to_string(s.instances) + ", worst lhs/rhs-factor " +
                                         num(s.worst_ratio));
    o.note(tag + " with C^{1/p} = " + num(std::pow(c, (r - 1.0) / r)) + ": held " + std::to_string(s.held_root) +
           "/" + std::to_string(s.instances));
  }
  return o;
}

Outcome criterion8(const Paths&) {
  Outcome o;
  const GridFunction f = GridFunction::sample([](double s) { return std::exp(-s); }, 500.0, 20000);
  const std::vector<double> taus{50.0, 100.0, 200.0, 400.0, 500.0};
  const std::vector<double> r = lemma29_check(f, FractionalOrder(1.0), taus, 1.0);
  std::string seq;
  for (std::size_t i = 0; i < r.size(); ++i) seq += (i ? ", " : "") + num(r[i]);
  o.note("residuals at 50, 100, 200, 400, 500: " + seq);
  o.require(r.back() < 1e-2, "residual at 500: " + num(r.back()));
  bool decreasing = true;
  for (std::size_t i = 1; i < 4; ++i) decreasing = decreasing && r[i] < r[i - 1];
  o.require(decreasing, "strictly decreasing along 50, 100, 200, 400");
  return o;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion9(const Paths& p) {
  Outcome o;
  std::array<fs::path, 2> dirs{p.work / "criterion9_a", p.work / "criterion9_b"};
  std::array<int, 2> codes{};
  for (std::size_t i = 0; i < 2; ++i) {
    fs::remove_all(dirs[i]);
    fs::create_directories(dirs[i]);
    codes[i] = shell("\"" + p.cli + "\" solve example46 --seed 46 --out-dir \"" + dirs[i].string() +
                     "\" > \"" + (dirs[i] / "stdout.txt").string() + "\"");
  }
  o.note("example46 exit codes: " + std::to_string(codes[0]) + ", " + std::to_string(codes[1]));
  o.require(codes[0] == codes[1] && codes[0] >= 0 && codes[0] <= 2, "example46 runs completed with equal exit codes");
  const std::string a = slurp(dirs[0] / "example46.csv"), b = slurp(dirs[1] / "example46.csv");
  o.require(!a.empty() && a == b, "CSV byte-identical (" + std::to_string(a.size()) + " bytes)");

  const fs::path v = p.work / "criterion9_violation";
  fs::remove_all(v);
  fs::create_directories(v);
  const int code = shell("\"" + p.cli + "\" solve forced_violation --out-dir \"" + v.string() + "\" > \"" +
                         (v / "stdout.txt").string() + "\"");
  const std::string report = slurp(v / "stdout.txt");
  o.require(code == 2, "forced violation exit code: " + std::to_string(code) + " (expected 2)");
  o.require(report.find("FAILED-HYPOTHESIS") != std::string::npos, "report names the failed hypothesis");
  const int bad = shell("\"" + p.cli + "\" solve no_such_config > /dev/null 2>&1");
  o.require(bad == 1, "unreadable config exit code: " + std::to_string(bad) + " (expected 1)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracasym acceptance criteria"};
  int criterion = 0;
  Paths paths;
  std::string work = "acceptance_work";
  app.add_option("--criterion", criterion, "criterion number")->required()->check(CLI::Range(1, 9));
  app.add_option("--cli", paths.cli, "path to fracasym_cli");
  app.add_option("--work-dir", work, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  paths.work = work;
  if (criterion == 9 && paths.cli.empty()) {
    std::cerr << "criterion 9 needs --cli\n";
    return 1;
  }

  const std::array<std::function<Outcome(const Paths&)>, 9> table{criterion1, criterion2, criterion3,
                                                                  criterion4, criterion5, criterion6,
                                                                  criterion7, criterion8, criterion9};
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fs::create_directories(paths.work);
    o = table[static_cast<std::size_t>(criterion - 1)](paths);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.budget_s > 0.0) o.require(secs < o.budget_s, "runtime " + num(secs) + " s < " + num(o.budget_s) + " s");

  std::cout << "criterion " << criterion << ": " << (o.pass ? "PASS" : "FAIL") << "\n";
  for (const std::string& d : o.details) std::cout << "    " << d << "\n";
  return o.pass ? 0 : 1;
}
