// fracasym command line: solve / study / catalog / pin.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fracasym/harness.hpp"

namespace fs = std::filesystem;
using namespace fracasym;
using namespace fracasym::harness;

namespace {

struct Overrides {
  std::optional<double> t_end;
  std::optional<std::size_t> n_steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--t-end", o.t_end, "override grid.t_end")->check(CLI::PositiveNumber);
  cmd->add_option("--n-steps", o.n_steps, "override grid.n_steps")->check(CLI::Range(2, 1 << 26));
  cmd->add_option("--seed", o.seed, "override seed");
  cmd->add_option("--out-dir", o.out_dir, "directory for CSV, report and pinned values");
}

// A bare name resolves to <config dir>/<name>.json when no such file exists.
fs::path resolve_config(const std::string& arg) {
  fs::path p(arg);
  if (fs::exists(p)) return p;
#ifdef FRACASYM_CONFIG_DIR
  fs::path builtin = fs::path(FRACASYM_CONFIG_DIR) / (arg + ".json");
  if (fs::exists(builtin)) return builtin;
#endif
  throw std::runtime_error("no config file or builtin config named '" + arg + "'");
}

ExperimentConfig load(const std::string& arg, const Overrides& o) {
  ExperimentConfig cfg = load_config(resolve_config(arg));
  if (o.t_end) cfg.t_end = *o.t_end;
  if (o.n_steps) cfg.n_steps = *o.n_steps;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  return cfg;
}

int emit(const RunReport& r) {
  std::cout << format_report(r);
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracasym: fractional IVP solver, a-priori bounds and asymptotic checks"};
  app.require_subcommand(1);

  std::string config;
  Overrides o;
  auto* solve_cmd = app.add_subcommand("solve", "run an experiment config");
  solve_cmd->add_option("config", config, "config file or builtin name")->required();
  add_overrides(solve_cmd, o);

  auto* study_cmd = app.add_subcommand("study", "grid-refinement convergence study");
  study_cmd->add_option("config", config, "config file or builtin name")->required();
  add_overrides(study_cmd, o);

  auto* pin_cmd = app.add_subcommand("pin", "write the measured regression values for a config");
  pin_cmd->add_option("config", config, "config file or builtin name")->required();
  add_overrides(pin_cmd, o);

  app.add_subcommand("catalog", "list catalog problems and study functions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("catalog")) {
      std::cout << list_catalog();
      return 0;
    }
    ExperimentConfig cfg = load(config, o);
    if (app.got_subcommand("solve")) return emit(run(cfg));
    if (app.got_subcommand("study")) return emit(convergence_study(cfg));

    // pin
    if (cfg.expectations.empty() && !o.out_dir) {
      std::cerr << "pin: config has no 'expectations' path and no --out-dir was given\n";
      return 1;
    }
    const auto q = pin_quantities(cfg);
    json j = json::object();
    for (const auto& [k, v] : q) {
      if (std::isfinite(v)) j[k] = v;
    }
    const fs::path target =
        o.out_dir ? fs::path(*o.out_dir) / (cfg.name + ".expect.json")
                  : cfg.base_dir / cfg.expectations;
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ofstream out(target);
    if (!out) throw std::runtime_error("cannot write " + target.string());
    out << j.dump(2) << "\n";
    std::cout << "pinned " << j.size() << " values to " << target.string()
              << " (review before committing)\n";
    return 0;
  } catch (const step_failure& e) {
    std::cerr << "solver step failure at node " << e.node() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
