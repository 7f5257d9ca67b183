#pragma once

// Pure-state evolution under the non-Hermitian effective Hamiltonian, both by
// direct RK4 in the truncated space and by the closed-form piecewise solutions
// of the three protocol stages (cavity only, pump on, pump off).

#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/polynomial.hpp"
#include "cqed/time_series.hpp"

namespace cqed {

/// Ground state the atom occupies after the first photon: g_plus after an L
/// photon, g_minus after an R photon.
enum class Branch { g_plus, g_minus };

constexpr int branch_m(Branch b) { return b == Branch::g_plus ? 1 : -1; }

/// Output-rate convention used from the pump stage on. `flux` is 2*kappa*|c0|^2;
/// `printed` is kappa*|c0|^2.
enum class SecondPhotonRate { flux, printed };

struct StageAmplitudes {
  int stage = 0;
  std::vector<BasisState> states;
  std::vector<Complex> values;

  double norm2() const;
  Complex at(const BasisState& s) const;
};

/// Solution of a linear constant-coefficient ODE x' = A x written as
/// x(tau) = sum_b C(:, b) * tau^k_b * exp(s_b tau). Roots closer than
/// `merge_tol * max|s|` are merged into a confluent block.
class ModeExpansion {
 public:
  ModeExpansion(std::span<const Complex> roots, const Eigen::MatrixXcd& generator, const Eigen::VectorXcd& x0,
                double merge_tol = 1e-8);

  Eigen::VectorXcd evaluate(double tau) const;
  const Eigen::MatrixXcd& coefficients() const noexcept { return coefficients_; }
  const std::vector<Complex>& basis_roots() const noexcept { return basis_roots_; }
  const std::vector<int>& basis_powers() const noexcept { return basis_powers_; }
  bool confluent() const;

 private:
  std::vector<Complex> basis_roots_;
  std::vector<int> basis_powers_;
  Eigen::MatrixXcd coefficients_;
};

/// 2 s^2 + (2 kappa + gamma - 2i Delta) s + gamma kappa + 2 g^2 - 2i kappa Delta.
std::vector<Complex> stage1_polynomial(const Params& params);
/// 2 s^3 + (2 kappa + gamma - 2i Delta) s^2 + (Omega^2 + kappa gamma + g^2 - 2i Delta kappa) s + Omega^2 kappa.
std::vector<Complex> stage2_polynomial(const Params& params);
/// 2 s^2 + (2 kappa + gamma - 2i Delta) s + g^2 + kappa gamma - 2i kappa Delta.
std::vector<Complex> stage3_polynomial(const Params& params);

CharacteristicRoots stage1_roots(const Params& params);
CharacteristicRoots stage2_cubic_roots(const Params& params);
CharacteristicRoots stage3_roots(const Params& params);

/// Basis states spanning each stage's closed subspace.
std::vector<BasisState> stage1_states();
std::vector<BasisState> stage2_states(Branch branch);

/// The generator A of x' = A x on the stage subspace (A = -i * H_eff restricted).
Eigen::MatrixXcd stage1_generator(const Params& params);
Eigen::MatrixXcd stage2_generator(const Params& params, Branch branch);

/// (d0, c_-1, c_1) at 0 <= t <= t1 from |e0,0,0>; c_-1 = -c_1.
StageAmplitudes stage1_analytic(const Params& params, double t);

/// Mode expansion of (d_m, c_0, c_m) from |g_m,0,0> at t1, in tau = t - t1.
ModeExpansion stage2_modes(const Params& params, Branch branch);

/// (d_m, c_0, c_m) at t1 <= t <= t2 with c_m(t1) = 1.
StageAmplitudes stage2_analytic(const Params& params, double t, Branch branch);

struct Stage3Result {
  Complex c0;         ///< photon amplitude |g0, 1_xi>
  Complex excited;    ///< |e_m, 0, 0> amplitude
  bool fallback = false;  ///< c0(t2) vanished; evaluated without s3
};

/// Pump-off decay for t2 <= t <= T given the amplitudes at t2.
Stage3Result stage3_analytic(const Params& params, double t, Complex excited_t2, Complex c0_t2,
                             Branch branch = Branch::g_plus);

/// s3 = -gamma/2 + i Delta + i G d(t2) / c0(t2), G the branch's cavity matrix element.
Complex stage3_s3(const Params& params, Complex excited_t2, Complex c0_t2, Branch branch);

/// sqrt(2 kappa)-scaled emission amplitudes on the sample grid; the two-photon
/// wavefunction of each branch is first(t) * second(t').
struct EmissionPaths {
  double sample_dt = 0.0;
  std::vector<Complex> first_right;   ///< R photon, atom left in g_-1
  std::vector<Complex> first_left;    ///< L photon, atom left in g_+1
  std::vector<Complex> second_from_minus;  ///< L photon from the g_-1 branch
  std::vector<Complex> second_from_plus;   ///< R photon from the g_+1 branch
};

struct PureStateRun {
  TimeSeries series;
  std::vector<double> norm;   ///< branch-weighted no-jump norm^2 per sample
  double handoff_residual = 0.0;  ///< ||psi(t1)||^2 discarded at the stage handoff
  std::size_t handoff_sample = 0;  ///< first sample taken after the handoff (size() if none)
  bool norm_monotone = true;
  bool stage3_fallback = false;
  EmissionPaths paths;
};

struct EffectiveOptions {
  SecondPhotonRate second_rate = SecondPhotonRate::flux;
  double norm_tolerance = 1e-9;  ///< allowed step-to-step norm increase
};

/// RK4 of i d psi/dt = H_eff(t) psi over [0, T]. At t1 the remaining stage-1
/// state is replaced by the two ground branches |g_+-1, 0, 0>, weight 1/2 each,
/// evolved separately. Throws IntegrationError if the norm grows.
PureStateRun integrate_effective(const HilbertSpace& space, const Params& params, const StateVector& psi0,
                                 const EffectiveOptions& options = {});
PureStateRun integrate_effective(const HilbertSpace& space, const Params& params,
                                 const EffectiveOptions& options = {});

/// Same observables from the closed-form stage solutions.
PureStateRun evaluate_analytic(const Params& params, const EffectiveOptions& options = {});

}  // namespace cqed
