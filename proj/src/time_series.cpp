#include "cqed/time_series.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "cqed/errors.hpp"

namespace cqed {

void TimeSeries::reserve(std::size_t n) {
  for (auto* v : {&t, &p_left, &p_right, &cum_left, &cum_right, &trace_err}) v->reserve(n);
  for (auto& v : pop) v.reserve(n);
}

void TimeSeries::push(double time, double rate_left, double rate_right,
                      const std::array<double, kAtomicLevelCount>& populations, double trace_error) {
  double left = 0.0;
  double right = 0.0;
  if (!t.empty()) {
    const double h = time - t.back();
    left = cum_left.back() + 0.5 * h * (p_left.back() + rate_left);
    right = cum_right.back() + 0.5 * h * (p_right.back() + rate_right);
  }
  t.push_back(time);
  p_left.push_back(rate_left);
  p_right.push_back(rate_right);
  cum_left.push_back(left);
  cum_right.push_back(right);
  for (int k = 0; k < kAtomicLevelCount; ++k) pop[k].push_back(populations[k]);
  trace_err.push_back(trace_error);
}

double TimeSeries::cumulative_total_at(double time) const {
  if (t.empty()) return 0.0;
  if (time <= t.front()) return cum_left.front() + cum_right.front();
  if (time >= t.back()) return cum_left.back() + cum_right.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double w = (time - t[lo]) / (t[hi] - t[lo]);
  const double a = cum_left[lo] + cum_right[lo];
  const double b = cum_left[hi] + cum_right[hi];
  return a + w * (b - a);
}

PhotonYield photon_yield(const TimeSeries& series, const Params& params) {
  if (series.size() == 0) return {};
  const double at_pump = series.cumulative_total_at(params.pump_on);
  const double total = series.cum_left.back() + series.cum_right.back();
  return {at_pump, total - at_pump};
}

TimeGrid::TimeGrid(const Params& params)
    : dt_(params.dt),
      exit_(params.exit_time),
      steps_(static_cast<int>(std::llround(params.exit_time / params.dt))),
      sample_every_(params.sample_every),
      breakpoints_(pulse_breakpoints(params)) {
  params.validate();
  if (steps_ < 1 || std::abs(steps_ * dt_ - exit_) > 1e-9 * std::max(1.0, exit_)) {
    throw DomainError(fmt::format("T={} must be an integer multiple of dt={}", exit_, dt_));
  }
}

double TimeGrid::time(int i) const noexcept {
  if (i >= steps_) return exit_;
  const double t = i * dt_;
  for (double bp : breakpoints_) {
    if (std::abs(bp - t) <= 1e-9 * dt_) return bp;
  }
  return t;
}

std::vector<std::pair<double, double>> TimeGrid::substeps(int i) const {
  const double a = time(i);
  const double b = time(i + 1);
  const double eps = 1e-9 * dt_;
  std::vector<std::pair<double, double>> out;
  double start = a;
  for (double bp : breakpoints_) {
    if (bp > a + eps && bp < b - eps) {
      out.emplace_back(start, bp);
      start = bp;
    }
  }
  out.emplace_back(start, b);
  return out;
}

bool TimeGrid::is_breakpoint(double t) const {
  const double eps = 1e-9 * dt_;
  return std::any_of(breakpoints_.begin(), breakpoints_.end(),
                     [&](double bp) { return std::abs(bp - t) <= eps; });
}

}  // namespace cqed
