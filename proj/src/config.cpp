#include "cqed/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/core.h>

#include "cqed/errors.hpp"
#include "cqed/time_series.hpp"
#include "json.hpp"

namespace cqed {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> parse_int(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

struct RealField {
  std::string_view key;
  double Params::*member;
};

constexpr RealField kRealFields[] = {
    {"delta", &Params::delta}, {"g", &Params::g},       {"omega", &Params::omega},
    {"gamma", &Params::gamma}, {"kappa", &Params::kappa}, {"t1", &Params::pump_on},
    {"t2", &Params::pump_off}, {"T", &Params::exit_time}, {"dt", &Params::dt},
};

const RealField* find_real_field(std::string_view name) {
  for (const auto& f : kRealFields) {
    if (f.key == name) return &f;
  }
  return nullptr;
}

constexpr std::string_view kOtherKeys[] = {"n_max",     "sample_every", "solver",    "output_dir",
                                           "emit",      "second_photon_rate",        "sweep_param",
                                           "sweep_min", "sweep_max",    "sweep_steps"};

bool known_key(std::string_view key) {
  return find_real_field(key) != nullptr ||
         std::find(std::begin(kOtherKeys), std::end(kOtherKeys), key) != std::end(kOtherKeys);
}

/// Constraint checks that name the offending key.
void check_params(const Params& p, std::vector<ConfigIssue>& issues) {
  auto issue = [&](std::string key, std::string msg) { issues.push_back({std::move(key), std::move(msg)}); };
  if (p.g < 0.0) issue("g", fmt::format("must be >= 0, got {}", p.g));
  if (p.omega < 0.0) issue("omega", fmt::format("must be >= 0, got {}", p.omega));
  if (p.gamma < 0.0) issue("gamma", fmt::format("must be >= 0, got {}", p.gamma));
  if (p.kappa < 0.0) issue("kappa", fmt::format("must be >= 0, got {}", p.kappa));
  if (!(p.pump_on > 0.0)) issue("t1", fmt::format("must be > 0, got {}", p.pump_on));
  if (p.pump_on > p.pump_off) {
    issue("t1", fmt::format("ordering 0 < t1 <= t2 <= T violated (t1={} > t2={})", p.pump_on, p.pump_off));
  }
  if (p.pump_off > p.exit_time) {
    issue("t2", fmt::format("ordering 0 < t1 <= t2 <= T violated (t2={} > T={})", p.pump_off, p.exit_time));
  }
  if (!(p.dt > 0.0)) issue("dt", fmt::format("must be > 0, got {}", p.dt));
  if (p.n_max < 1) issue("n_max", fmt::format("must be >= 1, got {}", p.n_max));
  if (p.sample_every < 1) issue("sample_every", fmt::format("must be >= 1, got {}", p.sample_every));
  if (issues.empty()) {
    try {
      TimeGrid grid(p);
    } catch (const DomainError& e) {
      issue("T", e.what());
    }
  }
}

}  // namespace

std::string_view solver_name(SolverChoice solver) {
  switch (solver) {
    case SolverChoice::master: return "master";
    case SolverChoice::effective: return "effective";
    case SolverChoice::analytic: return "analytic";
    case SolverChoice::all: return "all";
  }
  return "unknown";
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  if (steps == 1) return {min};
  for (int k = 0; k < steps; ++k) out.push_back(min + (max - min) * k / (steps - 1));
  return out;
}

bool is_real_param(std::string_view name) { return find_real_field(name) != nullptr; }

void set_real_param(Params& params, std::string_view name, double value) {
  const RealField* f = find_real_field(name);
  if (f == nullptr) throw DomainError(fmt::format("unknown real parameter '{}'", name));
  params.*(f->member) = value;
}

double get_real_param(const Params& params, std::string_view name) {
  const RealField* f = find_real_field(name);
  if (f == nullptr) throw DomainError(fmt::format("unknown real parameter '{}'", name));
  return params.*(f->member);
}

RawConfig parse_config_text(std::string_view text, std::vector<ConfigIssue>& issues) {
  RawConfig raw;
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      const auto doc = nlohmann::json::parse(body);
      if (!doc.is_object()) {
        issues.push_back({"", "JSON config must be an object"});
        return raw;
      }
      for (const auto& [key, value] : doc.items()) {
        if (value.is_string()) {
          raw.emplace_back(key, value.get<std::string>());
        } else if (value.is_number() || value.is_boolean()) {
          raw.emplace_back(key, value.dump());
        } else if (value.is_array()) {
          std::string joined;
          for (const auto& item : value) {
            if (!joined.empty()) joined += ',';
            joined += item.is_string() ? item.get<std::string>() : item.dump();
          }
          raw.emplace_back(key, joined);
        } else {
          issues.push_back({key, "unsupported JSON value"});
        }
      }
    } catch (const nlohmann::json::parse_error& e) {
      issues.push_back({"", fmt::format("invalid JSON: {}", e.what())});
    }
    return raw;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({"", fmt::format("line {}: expected 'key = value'", line_no)});
      continue;
    }
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    if (key.empty()) {
      issues.push_back({"", fmt::format("line {}: missing key", line_no)});
      continue;
    }
    raw.emplace_back(std::string(key), std::string(value));
  }
  return raw;
}

ConfigResult validate_config(const RawConfig& raw) {
  std::vector<ConfigIssue> issues;
  RunConfig cfg;
  cfg.params = paper_params();
  std::optional<std::string> sweep_param;
  std::optional<double> sweep_min;
  std::optional<double> sweep_max;
  std::optional<int> sweep_steps;

  for (const auto& [key, value] : raw) {
    if (!known_key(key)) {
      issues.push_back({key, "unknown key"});
      continue;
    }
    if (const RealField* f = find_real_field(key)) {
      if (auto v = parse_real(value)) {
        cfg.params.*(f->member) = *v;
      } else {
        issues.push_back({key, fmt::format("expected a finite real number, got '{}'", value)});
      }
    } else if (key == "n_max" || key == "sample_every" || key == "sweep_steps") {
      const auto v = parse_int(value);
      if (!v) {
        issues.push_back({key, fmt::format("expected an integer, got '{}'", value)});
      } else if (key == "n_max") {
        cfg.params.n_max = *v;
      } else if (key == "sample_every") {
        cfg.params.sample_every = *v;
      } else {
        sweep_steps = *v;
      }
    } else if (key == "solver") {
      if (value == "master") cfg.solver = SolverChoice::master;
      else if (value == "effective") cfg.solver = SolverChoice::effective;
      else if (value == "analytic") cfg.solver = SolverChoice::analytic;
      else if (value == "all") cfg.solver = SolverChoice::all;
      else issues.push_back({key, fmt::format("expected master|effective|analytic|all, got '{}'", value)});
    } else if (key == "output_dir") {
      if (value.empty()) issues.push_back({key, "must not be empty"});
      cfg.output_dir = value;
    } else if (key == "emit") {
      cfg.emit = EmitFlags{false, false, false};
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        const std::string_view name = trim(item);
        if (name == "timeseries") cfg.emit.timeseries = true;
        else if (name == "summary") cfg.emit.summary = true;
        else if (name == "sweep") cfg.emit.sweep = true;
        else if (name == "none" || name.empty()) continue;
        else issues.push_back({key, fmt::format("unknown emit flag '{}'", name)});
      }
    } else if (key == "second_photon_rate") {
      if (value == "flux") cfg.second_rate = SecondPhotonRate::flux;
      else if (value == "printed") cfg.second_rate = SecondPhotonRate::printed;
      else issues.push_back({key, fmt::format("expected flux|printed, got '{}'", value)});
    } else if (key == "sweep_param") {
      sweep_param = value;
    } else if (key == "sweep_min" || key == "sweep_max") {
      const auto v = parse_real(value);
      if (!v) issues.push_back({key, fmt::format("expected a finite real number, got '{}'", value)});
      else (key == "sweep_min" ? sweep_min : sweep_max) = *v;
    }
  }

  check_params(cfg.params, issues);

  if (sweep_param || sweep_min || sweep_max || sweep_steps) {
    SweepSpec sweep;
    if (!sweep_param) {
      issues.push_back({"sweep_param", "required when any sweep_* key is given"});
    } else if (!is_real_param(*sweep_param)) {
      issues.push_back({"sweep_param", fmt::format("'{}' is not a real-valued parameter", *sweep_param)});
    } else {
      sweep.parameter = *sweep_param;
    }
    if (!sweep_min) issues.push_back({"sweep_min", "required for a sweep"});
    if (!sweep_max) issues.push_back({"sweep_max", "required for a sweep"});
    if (!sweep_steps || *sweep_steps < 1) issues.push_back({"sweep_steps", "must be an integer >= 1"});
    if (sweep_min && sweep_max && *sweep_min > *sweep_max) {
      issues.push_back({"sweep_min", fmt::format("must be <= sweep_max ({} > {})", *sweep_min, *sweep_max)});
    }
    if (issues.empty()) {
      sweep.min = *sweep_min;
      sweep.max = *sweep_max;
      sweep.steps = *sweep_steps;
      for (double v : sweep.values()) {
        Params point = cfg.params;
        set_real_param(point, sweep.parameter, v);
        std::vector<ConfigIssue> point_issues;
        check_params(point, point_issues);
        for (auto& pi : point_issues) {
          issues.push_back({"sweep_" + sweep.parameter, fmt::format("value {}: {}", v, pi.to_string())});
        }
      }
      cfg.sweep = sweep;
    }
  }

  if (!issues.empty()) return issues;
  return cfg;
}

ConfigResult validate_config(std::string_view text) {
  std::vector<ConfigIssue> issues;
  RawConfig raw = parse_config_text(text, issues);
  if (!issues.empty()) return issues;
  return validate_config(raw);
}

}  // namespace cqed
