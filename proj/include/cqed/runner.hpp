#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqed/config.hpp"
#include "cqed/master_solver.hpp"

namespace cqed {

inline constexpr std::string_view kTimeSeriesHeader =
    "t,p_L,p_R,P_L,P_R,pop_gm1,pop_g0,pop_gp1,pop_em1,pop_e0,pop_ep1,trace_err";

struct Summary {
  double first_photon = 0.0;   ///< P1
  double second_photon = 0.0;  ///< P2
  double fidelity_epr = 0.0;
  double branch_overlap = 0.0;
  double peak_t_first = 0.0;
  double peak_t_second = 0.0;
  double max_trace_err = 0.0;
  std::optional<double> cross_solver_max_dev;  ///< master vs effective rates (solver = all)
  std::optional<double> analytic_max_dev;      ///< effective vs analytic rates (solver = all)
  double handoff_residual = 0.0;
  std::string source;  ///< solver the P1/P2 and peak figures come from
};

struct RunResult {
  std::optional<MasterRun> master;
  std::optional<PureStateRun> effective;
  std::optional<PureStateRun> analytic;
  Summary summary;
};

/// Runs the configured solvers and derives the summary figures.
RunResult execute(const RunConfig& config);

/// Time of the largest p_L + p_R sample in [from, to].
double peak_time(const TimeSeries& series, double from, double to);

/// First time the cumulative P_L + P_R reaches `level` (linear between
/// samples), or NaN if it never does.
double time_to_cumulative(const TimeSeries& series, double level);

/// max over samples of |p_L - p_L'| and |p_R - p_R'|; series must share a grid.
double max_rate_deviation(const TimeSeries& a, const TimeSeries& b);

std::string timeseries_csv(const TimeSeries& series);
std::string summary_json(const Summary& summary);

/// Writes timeseries*.csv and summary.json into config.output_dir per `emit`.
void write_outputs(const RunConfig& config, const RunResult& result);

struct SweepRow {
  double value = 0.0;
  double first_photon = 0.0;
  double second_photon = 0.0;
  double time_to_first_090 = 0.0;
  double peak_t_first = 0.0;
  double peak_t_second = 0.0;
};

/// Evaluates every sweep point as an independent task (master solver unless
/// the config selects effective or analytic). Rows come back in sweep order.
std::vector<SweepRow> run_sweep(const RunConfig& config);
std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows);

}  // namespace cqed
