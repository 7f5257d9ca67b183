#pragma once

#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

/// Dimensionless protocol constants (hbar = 1) and integrator controls.
///
/// The atom enters the cavity at t = 0, reaches the pump at `pump_on`, leaves
/// the pump at `pump_off` and exits the cavity at `exit_time`. `g` and `omega`
/// are signed amplitudes: an overall sign is a gauge choice and does not change
/// any observable.
struct Params {
  double delta = 0.0;   ///< cavity-atom detuning omega_C - omega_A
  double g = 1.0;       ///< cavity coupling amplitude
  double omega = 1.2;   ///< pump Rabi amplitude
  double gamma = 0.01;  ///< excited-state decay rate
  double kappa = 1.2;   ///< cavity field decay rate (2*kappa is the output intensity rate)
  double pump_on = 14.0;
  double pump_off = 16.0;
  double exit_time = 25.0;

  int n_max = 1;         ///< Fock truncation per mode
  double dt = 1e-3;      ///< RK4 step
  int sample_every = 10; ///< record every n-th grid point

  /// Throws DomainError naming the first violated constraint.
  void validate() const;

  friend bool operator==(const Params&, const Params&) = default;
};

/// The reference parameter set used throughout (Delta=0, g=1, gamma=0.01,
/// kappa=1.2, Omega=1.2, t1=14, t2=16, T=25).
Params paper_params();

/// amplitude * h(t - on) * h(off - t) with h(0) = 1.
struct PulseProfile {
  double amplitude = 0.0;
  double on_time = 0.0;
  double off_time = 0.0;

  double value(double t) const {
    return (t >= on_time && t <= off_time) ? amplitude : 0.0;
  }
};

PulseProfile cavity_profile(const Params& params);
PulseProfile pump_profile(const Params& params);

double coupling_g(const Params& params, double t);
double coupling_omega(const Params& params, double t);

/// Prebuilt operator pieces for one Hilbert space. H(t) only changes through
/// the two scalar pulse amplitudes, so the pieces are assembled once.
class ModelOperators {
 public:
  explicit ModelOperators(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const Operator& a(Mode mode) const { return mode == Mode::L ? a_left_ : a_right_; }
  const Operator& raising(int q) const { return raising_[q + 1]; }
  const Operator& excited() const noexcept { return excited_; }
  const Operator& pump_term() const noexcept { return pump_term_; }
  const Operator& cavity_term() const noexcept { return cavity_term_; }
  const Operator& photon_number() const noexcept { return photon_number_; }

  /// -delta * P_e + omega * (A10^+ + h.c.) + g * (A11^+ a_R + A1-1^+ a_L + h.c.)
  Operator hamiltonian(double delta, double g, double omega) const;

 private:
  HilbertSpace space_;
  Operator a_left_;
  Operator a_right_;
  std::array<Operator, 3> raising_;
  Operator excited_;
  Operator pump_term_;    // A10^+ + h.c.
  Operator cavity_term_;  // A11^+ a_R + A1-1^+ a_L + h.c.
  Operator photon_number_;
};

Operator hamiltonian(const HilbertSpace& space, const Params& params, double t);

/// {sqrt(2 kappa) a_L, sqrt(2 kappa) a_R, sqrt(gamma) A_{1,-1}, sqrt(gamma) A_{1,0},
///  sqrt(gamma) A_{1,+1}}, so that sum_J (J rho J^+ - {J^+ J, rho}/2) is D rho + C rho.
std::vector<Operator> jump_operators(const HilbertSpace& space, const Params& params);

/// H(t) - i kappa (n_L + n_R) - i (gamma/2) P_e.
Operator effective_hamiltonian(const HilbertSpace& space, const Params& params, double t);
Operator effective_hamiltonian(const ModelOperators& ops, const Params& params, double t);

/// Breakpoints of H(t) inside (0, exit_time), sorted and deduplicated.
std::vector<double> pulse_breakpoints(const Params& params);

}  // namespace cqed
