#pragma once

#include <span>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/effective_solver.hpp"

namespace cqed {

/// Polarization state of the two emitted photons, amplitudes(first, second)
/// with index 0 = L, 1 = R. Not necessarily normalized.
struct PairState {
  Eigen::Matrix2cd amplitudes = Eigen::Matrix2cd::Zero();

  /// alpha |R>_1 |L>_2 + beta |L>_1 |R>_2.
  static PairState from_branches(Complex alpha_rl, Complex beta_lr);

  double norm() const { return amplitudes.squaredNorm(); }
  PairState normalized() const;
  Complex rl() const { return amplitudes(1, 0); }
  Complex lr() const { return amplitudes(0, 1); }
};

/// Emission amplitudes of one branch on a uniform grid: the two-photon
/// wavefunction is first(t) * second(t').
struct BranchPath {
  std::span<const Complex> first;
  std::span<const Complex> second;
  double dt = 1.0;
};

struct PairAssembly {
  PairState state;
  /// |<psi_R|psi_L>| / (||psi_R|| ||psi_L||) of the branches' two-time wave packets.
  double profile_overlap = 0.0;
};

/// alpha = ||psi_R-first||, beta = ||psi_L-first|| with the relative phase of
/// <psi_R-first | psi_L-first>. Throws DomainError if both branches are empty.
PairAssembly assemble_pair_state(const BranchPath& r_first, const BranchPath& l_first);
PairAssembly assemble_pair_state(const EmissionPaths& paths);

/// |<EPR|psi>|^2 / <psi|psi> with |EPR> = (|R>_1|L>_2 - |L>_1|R>_2)/sqrt(2).
double fidelity_epr(const PairState& pair);

/// Exchanges the photon labels 1 <-> 2.
PairState swap_photons(const PairState& pair);

struct InterferenceRun {
  std::vector<double> t;
  std::vector<double> pop_g0;
  std::vector<double> norm;

  double max_pop_g0() const;
};

/// Unitary evolution from |e0,0,0> under a constant Hamiltonian, reporting the
/// total g0 population (all Fock states) on a grid of spacing `dt`.
InterferenceRun interference_check(const HilbertSpace& space, const Operator& hamiltonian, double t_end,
                                   double dt = 1e-2);

/// Same with both the cavity coupling and the pump held on for the whole run.
/// Requires gamma = kappa = 0.
InterferenceRun interference_check(const HilbertSpace& space, const Params& params, double t_end = 50.0,
                                   double dt = 1e-2);

}  // namespace cqed
