// Command-line driver: run the protocol, sweep a parameter, or check invariants.
//
//   cqed-epr run   [--config FILE] [--solver NAME] [--out DIR] [--param k=v ...]
//   cqed-epr sweep [--config FILE] [--solver NAME] [--out DIR] [--param k=v ...]
//   cqed-epr check [--config FILE] [--param k=v ...]
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"
#include "cqed/invariants.hpp"
#include "cqed/runner.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

struct CommonArgs {
  std::string config_path;
  std::string solver;
  std::string out_dir;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_output) {
  cmd->add_option("--config", args.config_path, "key = value or JSON configuration file");
  cmd->add_option("--param", args.overrides, "override a configuration key (k=v), repeatable");
  if (with_output) {
    cmd->add_option("--solver", args.solver, "master | effective | analytic | all");
    cmd->add_option("--out", args.out_dir, "output directory");
  }
}

/// Loads the file, applies overrides, validates. Prints a single diagnostic
/// line and returns nullopt on failure.
std::optional<cqed::RunConfig> load_config(const CommonArgs& args) {
  std::vector<cqed::ConfigIssue> issues;
  cqed::RawConfig raw;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) {
      std::cerr << "config error: cannot read " << args.config_path << "\n";
      return std::nullopt;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    raw = cqed::parse_config_text(buf.str(), issues);
  }
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      issues.push_back({"--param", fmt::format("expected k=v, got '{}'", kv)});
      continue;
    }
    raw.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.solver.empty()) raw.emplace_back("solver", args.solver);
  if (!args.out_dir.empty()) raw.emplace_back("output_dir", args.out_dir);

  if (issues.empty()) {
    auto result = cqed::validate_config(raw);
    if (auto* cfg = std::get_if<cqed::RunConfig>(&result)) return *cfg;
    issues = std::get<std::vector<cqed::ConfigIssue>>(result);
  }
  std::string line;
  for (const auto& issue : issues) {
    if (!line.empty()) line += "; ";
    line += issue.to_string();
  }
  std::cerr << "config error: " << line << "\n";
  return std::nullopt;
}

int cmd_run(const cqed::RunConfig& cfg) {
  const cqed::RunResult result = cqed::execute(cfg);
  cqed::write_outputs(cfg, result);
  const auto& s = result.summary;
  fmt::print("solver={} P1={:.6f} P2={:.6f} fidelity_epr={:.6f} peak_t_first={:.3f} peak_t_second={:.3f}\n",
             cqed::solver_name(cfg.solver), s.first_photon, s.second_photon, s.fidelity_epr, s.peak_t_first,
             s.peak_t_second);
  if (s.cross_solver_max_dev) fmt::print("cross_solver_max_dev={:.3e}\n", *s.cross_solver_max_dev);
  fmt::print("outputs written to {}\n", cfg.output_dir);
  return 0;
}

int cmd_sweep(const cqed::RunConfig& cfg) {
  if (!cfg.sweep) {
    std::cerr << "config error: sweep needs sweep_param, sweep_min, sweep_max and sweep_steps\n";
    return kConfigError;
  }
  const auto rows = cqed::run_sweep(cfg);
  const std::string table = cqed::sweep_csv(cfg.sweep->parameter, rows);
  if (cfg.emit.sweep) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(std::filesystem::path(cfg.output_dir) / "sweep.csv", std::ios::binary) << table;
  }
  std::cout << table;
  return 0;
}

int cmd_check(const cqed::RunConfig& cfg) {
  bool ok = true;
  for (const auto& c : cqed::run_invariant_suite(cfg.params)) {
    fmt::print("[{}] {}: {:.3e} {} {:.1e}\n", c.passed ? "PASS" : "FAIL", c.name, c.value, c.relation, c.threshold);
    ok = ok && c.passed;
  }
  return ok ? 0 : kNumericalError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled photon-pair emission from an F=1 -> F'=1 atom in a two-mode cavity"};
  app.require_subcommand(1);
  CommonArgs run_args;
  CommonArgs sweep_args;
  CommonArgs check_args;
  auto* run = app.add_subcommand("run", "simulate the protocol and write time series and summary");
  auto* sweep = app.add_subcommand("sweep", "evaluate emission figures over a parameter range");
  auto* check = app.add_subcommand("check", "run the structural invariant suite");
  add_common(run, run_args, true);
  add_common(sweep, sweep_args, true);
  add_common(check, check_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const CommonArgs& args = run->parsed() ? run_args : sweep->parsed() ? sweep_args : check_args;
  const auto cfg = load_config(args);
  if (!cfg) return kConfigError;

  try {
    if (run->parsed()) return cmd_run(*cfg);
    if (sweep->parsed()) return cmd_sweep(*cfg);
    return cmd_check(*cfg);
  } catch (const cqed::IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const cqed::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}
