#include "cqed/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include <fmt/core.h>

#include "cqed/entanglement.hpp"
#include "cqed/errors.hpp"
#include "json.hpp"

namespace cqed {

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12g}", v);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  out << contents;
  if (!out) throw std::runtime_error(fmt::format("failed writing {}", path.string()));
}

const TimeSeries& primary_series(const RunResult& r, std::string& source) {
  if (r.master) {
    source = "master";
    return r.master->series;
  }
  if (r.effective) {
    source = "effective";
    return r.effective->series;
  }
  source = "analytic";
  return r.analytic->series;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

double peak_time(const TimeSeries& series, double from, double to) {
  double best_rate = -std::numeric_limits<double>::infinity();
  double best_t = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series.t[k] < from || series.t[k] > to) continue;
    const double rate = series.p_left[k] + series.p_right[k];
    if (rate > best_rate) {
      best_rate = rate;
      best_t = series.t[k];
    }
  }
  return best_t;
}

double time_to_cumulative(const TimeSeries& series, double level) {
  double prev = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double total = series.cum_left[k] + series.cum_right[k];
    if (total >= level) {
      if (k == 0) return series.t[0];
      const double w = (level - prev) / (total - prev);
      return series.t[k - 1] + w * (series.t[k] - series.t[k - 1]);
    }
    prev = total;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double max_rate_deviation(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) throw DomainError("series sampled on different grids");
  double dev = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dev = std::max({dev, std::abs(a.p_left[k] - b.p_left[k]), std::abs(a.p_right[k] - b.p_right[k])});
  }
  return dev;
}

RunResult execute(const RunConfig& config) {
  const Params& p = config.params;
  const HilbertSpace space(p.n_max);
  const EffectiveOptions eff_options{config.second_rate};
  RunResult r;

  const bool all = config.solver == SolverChoice::all;
  if (all || config.solver == SolverChoice::master) {
    r.master = integrate_master(space, p, initial_density(space));
  }
  if (all || config.solver == SolverChoice::effective || config.solver == SolverChoice::master) {
    // The pair state is always assembled from the pure-state branches.
    r.effective = integrate_effective(space, p, eff_options);
  }
  if (all || config.solver == SolverChoice::analytic) {
    r.analytic = evaluate_analytic(p, eff_options);
  }

  Summary& s = r.summary;
  const TimeSeries& series = primary_series(r, s.source);
  const PhotonYield yield = photon_yield(series, p);
  s.first_photon = yield.first;
  s.second_photon = yield.second;
  s.peak_t_first = peak_time(series, 0.0, p.pump_on);
  s.peak_t_second = peak_time(series, p.pump_on, p.exit_time);
  s.max_trace_err = max_of(series.trace_err);

  const PureStateRun& pure = r.effective ? *r.effective : *r.analytic;
  const PairAssembly pair = assemble_pair_state(pure.paths);
  s.fidelity_epr = fidelity_epr(pair.state);
  s.branch_overlap = pair.profile_overlap;
  s.handoff_residual = pure.handoff_residual;

  if (all) {
    s.cross_solver_max_dev = max_rate_deviation(r.master->series, r.effective->series);
    s.analytic_max_dev = max_rate_deviation(r.effective->series, r.analytic->series);
  }
  return r;
}

std::string timeseries_csv(const TimeSeries& s) {
  std::string out(kTimeSeriesHeader);
  out += '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    out += format_number(s.t[k]);
    for (double v : {s.p_left[k], s.p_right[k], s.cum_left[k], s.cum_right[k]}) {
      out += ',';
      out += format_number(v);
    }
    for (int level = 0; level < kAtomicLevelCount; ++level) {
      out += ',';
      out += format_number(s.pop[level][k]);
    }
    out += ',';
    out += format_number(s.trace_err[k]);
    out += '\n';
  }
  return out;
}

std::string summary_json(const Summary& s) {
  nlohmann::json j;
  j["P1"] = s.first_photon;
  j["P2"] = s.second_photon;
  j["fidelity_epr"] = s.fidelity_epr;
  j["branch_overlap"] = s.branch_overlap;
  j["peak_t_first"] = s.peak_t_first;
  j["peak_t_second"] = s.peak_t_second;
  j["max_trace_err"] = s.max_trace_err;
  j["cross_solver_max_dev"] = s.cross_solver_max_dev ? nlohmann::json(*s.cross_solver_max_dev) : nlohmann::json();
  j["analytic_max_dev"] = s.analytic_max_dev ? nlohmann::json(*s.analytic_max_dev) : nlohmann::json();
  j["handoff_residual"] = s.handoff_residual;
  j["source"] = s.source;
  j["physical_units"] = {
      {"gamma", "(2 pi) 0.2 MHz"}, {"g", "(2 pi) 20 MHz"}, {"kappa", "(2 pi) 24 MHz"}, {"T", "200 ns"},
      {"note", "documentation only; all computations are dimensionless"}};
  return j.dump(2) + "\n";
}

void write_outputs(const RunConfig& config, const RunResult& result) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  if (config.emit.timeseries) {
    if (result.master) write_file(dir / "timeseries.csv", timeseries_csv(result.master->series));
    if (result.effective && config.solver != SolverChoice::master) {
      write_file(dir / "timeseries_effective.csv", timeseries_csv(result.effective->series));
    }
    if (result.analytic) write_file(dir / "timeseries_analytic.csv", timeseries_csv(result.analytic->series));
  }
  if (config.emit.summary) write_file(dir / "summary.json", summary_json(result.summary));
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  if (!config.sweep) throw DomainError("configuration has no sweep");
  const SweepSpec& sweep = *config.sweep;
  const std::vector<double> values = sweep.values();
  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());

  auto evaluate = [&](std::size_t k) {
    try {
      Params p = config.params;
      set_real_param(p, sweep.parameter, values[k]);
      const HilbertSpace space(p.n_max);
      TimeSeries series;
      if (config.solver == SolverChoice::effective) {
        series = integrate_effective(space, p, EffectiveOptions{config.second_rate}).series;
      } else if (config.solver == SolverChoice::analytic) {
        series = evaluate_analytic(p, EffectiveOptions{config.second_rate}).series;
      } else {
        series = integrate_master(space, p, initial_density(space)).series;
      }
      const PhotonYield y = photon_yield(series, p);
      rows[k] = SweepRow{values[k],
                         y.first,
                         y.second,
                         time_to_cumulative(series, 0.9),
                         peak_time(series, 0.0, p.pump_on),
                         peak_time(series, p.pump_on, p.exit_time)};
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                          static_cast<unsigned>(values.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < values.size(); k = next++) evaluate(k);
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
  std::string out = parameter + ",P1,P2,t_first_090,peak_t_first,peak_t_second\n";
  for (const SweepRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", format_number(r.value), format_number(r.first_photon),
                       format_number(r.second_photon), format_number(r.time_to_first_090),
                       format_number(r.peak_t_first), format_number(r.peak_t_second));
  }
  return out;
}

}  // namespace cqed
