#include "cqed/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

/// Trapezoid inner product sum conj(a) b dt.
Complex inner(std::span<const Complex> a, std::span<const Complex> b, double dt) {
  if (a.size() != b.size()) throw DomainError("branch paths sampled on different grids");
  if (a.empty()) return 0.0;
  Complex acc(0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = (k == 0 || k + 1 == a.size()) ? 0.5 : 1.0;
    acc += w * std::conj(a[k]) * b[k];
  }
  return acc * dt;
}

}  // namespace

PairState PairState::from_branches(Complex alpha_rl, Complex beta_lr) {
  PairState s;
  s.amplitudes(1, 0) = alpha_rl;
  s.amplitudes(0, 1) = beta_lr;
  return s;
}

PairState PairState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DomainError("cannot normalize an empty pair state");
  PairState s;
  s.amplitudes = amplitudes / std::sqrt(n);
  return s;
}

PairAssembly assemble_pair_state(const BranchPath& r_first, const BranchPath& l_first) {
  const double norm_r = std::sqrt(inner(r_first.first, r_first.first, r_first.dt).real() *
                                  inner(r_first.second, r_first.second, r_first.dt).real());
  const double norm_l = std::sqrt(inner(l_first.first, l_first.first, l_first.dt).real() *
                                  inner(l_first.second, l_first.second, l_first.dt).real());
  if (norm_r == 0.0 && norm_l == 0.0) {
    throw DomainError("both emission branches are empty; the pair state is undefined");
  }
  PairAssembly out;
  if (norm_r == 0.0 || norm_l == 0.0) {
    out.state = PairState::from_branches(norm_r, norm_l);
    out.profile_overlap = 0.0;
    return out;
  }
  const Complex overlap = inner(r_first.first, l_first.first, r_first.dt) *
                          inner(r_first.second, l_first.second, r_first.dt);
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  out.state = PairState::from_branches(norm_r, norm_l * phase);
  out.profile_overlap = std::abs(overlap) / (norm_r * norm_l);
  return out;
}

PairAssembly assemble_pair_state(const EmissionPaths& paths) {
  const BranchPath r_first{paths.first_right, paths.second_from_minus, paths.sample_dt};
  const BranchPath l_first{paths.first_left, paths.second_from_plus, paths.sample_dt};
  return assemble_pair_state(r_first, l_first);
}

double fidelity_epr(const PairState& pair) {
  const double n = pair.norm();
  if (!(n > 0.0)) throw DomainError("fidelity of a zero-norm pair state is undefined");
  const Complex projection = (pair.rl() - pair.lr()) / std::sqrt(2.0);
  return std::clamp(std::norm(projection) / n, 0.0, 1.0);
}

PairState swap_photons(const PairState& pair) {
  PairState s;
  s.amplitudes = pair.amplitudes.transpose();
  return s;
}

double InterferenceRun::max_pop_g0() const {
  return pop_g0.empty() ? 0.0 : *std::max_element(pop_g0.begin(), pop_g0.end());
}

InterferenceRun interference_check(const HilbertSpace& space, const Operator& hamiltonian, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw DomainError("interference check needs dt > 0 and t_end >= 0");
  const Eigen::MatrixXcd h = Eigen::MatrixXcd(hamiltonian);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("interference check requires a Hermitian Hamiltonian");
  }
  // Constant H: propagate exactly in its eigenbasis.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  const Eigen::VectorXd& energies = eig.eigenvalues();
  const Eigen::VectorXcd coeffs = v.adjoint() * space.basis_vector({AtomicLevel::e_0, 0, 0});
  const int block = space.fock_dim() * space.fock_dim();
  const int g0_offset = static_cast<int>(AtomicLevel::g_0) * block;

  InterferenceRun run;
  const int steps = static_cast<int>(std::llround(t_end / dt));
  for (int i = 0; i <= steps; ++i) {
    const double t = std::min(i * dt, t_end);
    Eigen::VectorXcd phased(coeffs.size());
    for (int k = 0; k < coeffs.size(); ++k) phased(k) = coeffs(k) * std::exp(Complex(0.0, -energies(k) * t));
    const Eigen::VectorXcd psi = v * phased;
    run.t.push_back(t);
    run.pop_g0.push_back(psi.segment(g0_offset, block).squaredNorm());
    run.norm.push_back(psi.squaredNorm());
  }
  return run;
}

InterferenceRun interference_check(const HilbertSpace& space, const Params& params, double t_end, double dt) {
  if (params.gamma != 0.0 || params.kappa != 0.0) {
    throw DomainError(fmt::format("interference check needs gamma = kappa = 0 (got gamma={}, kappa={})", params.gamma,
                                  params.kappa));
  }
  const ModelOperators ops(space);
  return interference_check(space, ops.hamiltonian(params.delta, params.g, params.omega), t_end, dt);
}

}  // namespace cqed
