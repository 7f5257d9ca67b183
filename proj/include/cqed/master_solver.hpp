#pragma once

#include <array>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/time_series.hpp"

namespace cqed {

/// Generator of the Lindblad equation with one fixed Hamiltonian window.
class Liouvillian {
 public:
  Liouvillian(const ModelOperators& ops, const Params& params, double t);

  /// -i[H, rho] + D rho + C rho.
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  int dim_;
  Operator generator_;  // acts on column-major vec(rho)
};

/// -i[H(t), rho] + D rho + C rho. Throws DomainError on dimension mismatch.
DensityMatrix lindblad_rhs(const HilbertSpace& space, const Params& params, double t, const DensityMatrix& rho);

/// tr(P_level rho) for every atomic level, in basis order.
std::array<double, kAtomicLevelCount> populations(const HilbertSpace& space, const DensityMatrix& rho);

DensityMatrix pure_density(const StateVector& psi);

/// The protocol's initial state |e0, 0_L, 0_R><e0, 0_L, 0_R|.
DensityMatrix initial_density(const HilbertSpace& space);

struct MasterRun {
  TimeSeries series;
  DensityMatrix final_state;
  double max_hermiticity_error = 0.0;  ///< max_ij |rho - rho^+| over samples
  std::vector<double> checkpoint_times;
  std::vector<double> checkpoint_min_eigenvalue;
};

struct MasterOptions {
  int positivity_checkpoints = 10;
  double max_trace_error = 1e-6;
};

/// Fixed-step RK4 over [0, T]; throws IntegrationError if the trace drifts
/// beyond `max_trace_error`.
MasterRun integrate_master(const HilbertSpace& space, const Params& params, const DensityMatrix& rho0,
                           const MasterOptions& options = {});

}  // namespace cqed
