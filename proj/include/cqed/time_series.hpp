#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cqed/dynamics.hpp"

namespace cqed {

/// Sampled observables of one protocol run.
///
/// `p_left`/`p_right` are instantaneous emission rates 2*kappa*<a^+ a>,
/// `cum_left`/`cum_right` their running trapezoid integrals on the sample grid.
/// `trace_err` is |tr(rho) - 1| for the master solver; the pure-state solvers
/// store the probability bookkeeping error |1 - (remaining norm + probability
/// emitted in the current stage)| instead.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> p_left;
  std::vector<double> p_right;
  std::vector<double> cum_left;
  std::vector<double> cum_right;
  std::array<std::vector<double>, kAtomicLevelCount> pop;
  std::vector<double> trace_err;

  std::size_t size() const noexcept { return t.size(); }
  void reserve(std::size_t n);

  /// Appends one sample and extends the cumulative integrals.
  void push(double time, double rate_left, double rate_right,
            const std::array<double, kAtomicLevelCount>& populations, double trace_error);

  /// Cumulative P_L + P_R at time `time`, linear between samples.
  double cumulative_total_at(double time) const;
};

/// Emission probabilities of the two photons: first = accumulated over
/// [0, t1], second = accumulated over [t1, T].
struct PhotonYield {
  double first = 0.0;
  double second = 0.0;
};

PhotonYield photon_yield(const TimeSeries& series, const Params& params);

/// Uniform step grid t_i = i*dt over [0, T] with samples every `sample_every`
/// steps. Steps that straddle a pulse edge are split there so no RK4 step sees
/// a discontinuous Hamiltonian.
class TimeGrid {
 public:
  explicit TimeGrid(const Params& params);

  int steps() const noexcept { return steps_; }
  int sample_every() const noexcept { return sample_every_; }
  std::size_t sample_count() const noexcept { return static_cast<std::size_t>(steps_ / sample_every_) + 1; }
  /// i*dt, snapped onto T and onto pulse edges that fall on the grid.
  double time(int i) const noexcept;
  bool is_sample(int i) const noexcept { return i % sample_every_ == 0; }

  /// Sub-intervals of step i, split at pulse edges; each pair is (start, end).
  std::vector<std::pair<double, double>> substeps(int i) const;
  /// Pulse edge that coincides with the end of sub-interval ending at `t`, if any.
  bool is_breakpoint(double t) const;

 private:
  double dt_;
  double exit_;
  int steps_;
  int sample_every_;
  std::vector<double> breakpoints_;
};

}  // namespace cqed
