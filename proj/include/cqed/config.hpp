#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/effective_solver.hpp"

namespace cqed {

enum class SolverChoice { master, effective, analytic, all };

std::string_view solver_name(SolverChoice solver);

struct SweepSpec {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  /// steps evenly spaced values from min to max inclusive.
  std::vector<double> values() const;
};

struct EmitFlags {
  bool timeseries = true;
  bool summary = true;
  bool sweep = true;
};

struct RunConfig {
  Params params;
  SolverChoice solver = SolverChoice::all;
  std::string output_dir = "out";
  EmitFlags emit;
  std::optional<SweepSpec> sweep;
  SecondPhotonRate second_rate = SecondPhotonRate::flux;
};

struct ConfigIssue {
  std::string key;
  std::string message;

  std::string to_string() const { return key.empty() ? message : key + ": " + message; }
};

using ConfigResult = std::variant<RunConfig, std::vector<ConfigIssue>>;

/// Raw key/value pairs in file order; later duplicates win.
using RawConfig = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines (`#` starts a comment) or, if the text starts
/// with `{`, a flat JSON object. Syntax problems are appended to `issues`.
RawConfig parse_config_text(std::string_view text, std::vector<ConfigIssue>& issues);

/// Checks every key and Params invariant, filling unspecified values with the
/// reference parameter set. Unknown keys are rejected.
ConfigResult validate_config(const RawConfig& raw);
ConfigResult validate_config(std::string_view text);

/// Real-valued Params fields addressable by name (delta, g, omega, gamma, kappa, t1, t2, T, dt).
bool is_real_param(std::string_view name);
void set_real_param(Params& params, std::string_view name, double value);
double get_real_param(const Params& params, std::string_view name);

}  // namespace cqed
