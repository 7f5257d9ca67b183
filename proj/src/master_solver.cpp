#include "cqed/master_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

double hermiticity_error(const DensityMatrix& rho) { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const DensityMatrix& rho) {
  const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

Liouvillian::Liouvillian(const ModelOperators& ops, const Params& params, double t) : dim_(ops.space().dim()) {
  const Operator h_eff = effective_hamiltonian(ops, params, t);
  const Complex minus_i(0.0, -1.0);
  // Column-major vec: vec(A rho B) = (B^T kron A) vec(rho).
  std::vector<Eigen::Triplet<Complex>> triplets;
  auto add_kron = [&](const Operator& b_transposed, const Operator& a, Complex scale) {
    for (int jb = 0; jb < b_transposed.outerSize(); ++jb) {
      for (Operator::InnerIterator ib(b_transposed, jb); ib; ++ib) {
        for (int ja = 0; ja < a.outerSize(); ++ja) {
          for (Operator::InnerIterator ia(a, ja); ia; ++ia) {
            triplets.emplace_back(static_cast<int>(ib.row()) * dim_ + static_cast<int>(ia.row()),
                                  static_cast<int>(ib.col()) * dim_ + static_cast<int>(ia.col()),
                                  scale * ib.value() * ia.value());
          }
        }
      }
    }
  };
  const Operator id = identity(ops.space());
  add_kron(id, h_eff, minus_i);
  add_kron(Operator(h_eff.conjugate()), id, -minus_i);  // (H_eff^+)^T = conj(H_eff)
  for (const Operator& j : jump_operators(ops.space(), params)) {
    if (j.nonZeros() == 0) continue;
    add_kron(Operator(j.conjugate()), j, 1.0);
  }
  generator_.resize(dim_ * dim_, dim_ * dim_);
  generator_.setFromTriplets(triplets.begin(), triplets.end());
  generator_.makeCompressed();
}

DensityMatrix Liouvillian::apply(const DensityMatrix& rho) const {
  DensityMatrix out(dim_, dim_);
  Eigen::Map<Eigen::VectorXcd>(out.data(), out.size()).noalias() =
      generator_ * Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  return out;
}

DensityMatrix lindblad_rhs(const HilbertSpace& space, const Params& params, double t, const DensityMatrix& rho) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim()) {
    throw DomainError(fmt::format("density matrix is {}x{}, space dimension is {}", rho.rows(), rho.cols(),
                                  space.dim()));
  }
  return Liouvillian(ModelOperators(space), params, t).apply(rho);
}

std::array<double, kAtomicLevelCount> populations(const HilbertSpace& space, const DensityMatrix& rho) {
  std::array<double, kAtomicLevelCount> pop{};
  const int block = space.fock_dim() * space.fock_dim();
  for (int level = 0; level < kAtomicLevelCount; ++level) {
    double acc = 0.0;
    for (int k = 0; k < block; ++k) acc += rho(level * block + k, level * block + k).real();
    pop[level] = acc;
  }
  return pop;
}

DensityMatrix pure_density(const StateVector& psi) { return psi * psi.adjoint(); }

DensityMatrix initial_density(const HilbertSpace& space) {
  return pure_density(space.basis_vector({AtomicLevel::e_0, 0, 0}));
}

MasterRun integrate_master(const HilbertSpace& space, const Params& params, const DensityMatrix& rho0,
                           const MasterOptions& options) {
  if (space.n_max() != params.n_max) {
    throw DomainError(fmt::format("space n_max={} differs from params n_max={}", space.n_max(), params.n_max));
  }
  if (rho0.rows() != space.dim() || rho0.cols() != space.dim()) {
    throw DomainError("initial density matrix has the wrong dimension");
  }
  const TimeGrid grid(params);
  const ModelOperators ops(space);
  const Operator n_left = Operator(ops.a(Mode::L).adjoint()) * ops.a(Mode::L);
  const Operator n_right = Operator(ops.a(Mode::R).adjoint()) * ops.a(Mode::R);

  // H(t) is piecewise constant; keep one generator per (g, Omega) window.
  std::map<std::pair<double, double>, Liouvillian> generators;
  auto generator_at = [&](double t) -> const Liouvillian& {
    const std::pair key{coupling_g(params, t), coupling_omega(params, t)};
    auto it = generators.find(key);
    if (it == generators.end()) it = generators.emplace(key, Liouvillian(ops, params, t)).first;
    return it->second;
  };

  MasterRun run;
  run.series.reserve(grid.sample_count());

  const int n_checkpoints = std::max(options.positivity_checkpoints, 0);
  std::vector<int> checkpoint_steps;
  for (int k = 1; k <= n_checkpoints; ++k) {
    const int sample = static_cast<int>(std::llround(static_cast<double>(k) * (grid.sample_count() - 1) / n_checkpoints));
    checkpoint_steps.push_back(sample * grid.sample_every());
  }

  auto record = [&](int step, const DensityMatrix& rho) {
    const double t = grid.time(step);
    const double trace_error = std::abs(rho.trace() - Complex(1.0));
    if (!(trace_error <= options.max_trace_error)) {
      throw IntegrationError("master", t, fmt::format("trace error {:.3e} exceeds {:.1e}", trace_error,
                                                      options.max_trace_error));
    }
    run.max_hermiticity_error = std::max(run.max_hermiticity_error, hermiticity_error(rho));
    const double rate_left = 2.0 * params.kappa * (n_left * rho).trace().real();
    const double rate_right = 2.0 * params.kappa * (n_right * rho).trace().real();
    run.series.push(t, rate_left, rate_right, populations(space, rho), trace_error);
    if (std::find(checkpoint_steps.begin(), checkpoint_steps.end(), step) != checkpoint_steps.end()) {
      run.checkpoint_times.push_back(t);
      run.checkpoint_min_eigenvalue.push_back(min_eigenvalue(rho));
    }
  };

  DensityMatrix rho = rho0;
  record(0, rho);
  for (int i = 0; i < grid.steps(); ++i) {
    for (const auto& [a, b] : grid.substeps(i)) {
      const double h = b - a;
      const Liouvillian& L = generator_at(0.5 * (a + b));
      const DensityMatrix k1 = L.apply(rho);
      const DensityMatrix k2 = L.apply(rho + (0.5 * h) * k1);
      const DensityMatrix k3 = L.apply(rho + (0.5 * h) * k2);
      const DensityMatrix k4 = L.apply(rho + h * k3);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (grid.is_sample(i + 1)) record(i + 1, rho);
  }
  run.final_state = std::move(rho);
  return run;
}

}  // namespace cqed
