#include "cqed/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/effective_solver.hpp"
#include "cqed/master_solver.hpp"

namespace cqed {

namespace {

double max_series_deviation(const TimeSeries& a, const TimeSeries& b) {
  double dev = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    dev = std::max({dev, std::abs(a.p_left[k] - b.p_left[k]), std::abs(a.p_right[k] - b.p_right[k]),
                    std::abs(a.cum_left[k] - b.cum_left[k]), std::abs(a.cum_right[k] - b.cum_right[k])});
    for (int level = 0; level < kAtomicLevelCount; ++level) {
      dev = std::max(dev, std::abs(a.pop[level][k] - b.pop[level][k]));
    }
  }
  return a.size() == b.size() ? dev : INFINITY;
}

CheckResult at_most(std::string name, double value, double bound) {
  return {std::move(name), value <= bound, value, bound, "<="};
}

CheckResult at_least(std::string name, double value, double bound) {
  return {std::move(name), value >= bound, value, bound, ">="};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const Params& params) {
  std::vector<CheckResult> out;
  Params base = params;
  base.n_max = 1;
  const HilbertSpace space(1);
  const MasterRun master = integrate_master(space, base, initial_density(space));

  out.push_back(at_most("trace preservation", *std::max_element(master.series.trace_err.begin(),
                                                               master.series.trace_err.end()),
                        1e-9));
  out.push_back(at_most("hermiticity", master.max_hermiticity_error, 1e-10));
  const double min_eig = master.checkpoint_min_eigenvalue.empty()
                             ? 0.0
                             : *std::min_element(master.checkpoint_min_eigenvalue.begin(),
                                                 master.checkpoint_min_eigenvalue.end());
  out.push_back(at_least("positivity (min eigenvalue)", min_eig, -1e-8));

  const PureStateRun effective = integrate_effective(space, base);
  double worst_increase = 0.0;
  for (std::size_t k = 1; k < effective.norm.size(); ++k) {
    // The handoff at t1 restarts the norm at 1 by construction.
    if (k == effective.handoff_sample) continue;
    worst_increase = std::max(worst_increase, effective.norm[k] - effective.norm[k - 1]);
  }
  out.push_back(at_most("norm monotonicity under H_eff (max increase)", worst_increase, 1e-9));

  Params wide = base;
  wide.n_max = 2;
  const HilbertSpace space2(2);
  const MasterRun master2 = integrate_master(space2, wide, initial_density(space2));
  out.push_back(at_most("truncation insensitivity (n_max 1 vs 2)", max_series_deviation(master.series, master2.series),
                        1e-8));

  Params flipped = base;
  flipped.g = -base.g;
  const MasterRun master_flipped = integrate_master(space, flipped, initial_density(space));
  out.push_back(at_most("gauge invariance (g -> -g)", max_series_deviation(master.series, master_flipped.series),
                        1e-12));
  return out;
}

}  // namespace cqed
