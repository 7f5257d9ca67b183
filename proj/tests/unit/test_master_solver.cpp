#include "doctest.h"

#include <random>

#include "cqed/errors.hpp"
#include "cqed/master_solver.hpp"

using namespace cqed;

namespace {

DensityMatrix random_density(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  DensityMatrix rho = m * m.adjoint();
  return rho / rho.trace();
}

/// -i[H, rho] + sum_J (J rho J^+ - {J^+ J, rho}/2) written out term by term.
DensityMatrix textbook_rhs(const HilbertSpace& space, const Params& p, double t, const DensityMatrix& rho) {
  const Eigen::MatrixXcd h(hamiltonian(space, p, t));
  DensityMatrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
  for (const Operator& j : jump_operators(space, p)) {
    const Eigen::MatrixXcd jd(j);
    const Eigen::MatrixXcd jj = jd.adjoint() * jd;
    out += jd * rho * jd.adjoint() - 0.5 * (jj * rho + rho * jj);
  }
  return out;
}

Params fast_params() {
  Params p = paper_params();
  p.dt = 5e-3;
  p.sample_every = 2;
  return p;
}

}  // namespace

TEST_CASE("Lindblad generator matches the textbook form") {
  Params p = paper_params();
  p.delta = 0.3;
  p.gamma = 0.2;
  const HilbertSpace space(1);
  const DensityMatrix rho = random_density(space.dim(), 3);
  for (double t : {2.0, 15.0, 20.0}) {
    const DensityMatrix a = lindblad_rhs(space, p, t, rho);
    CHECK((a - textbook_rhs(space, p, t, rho)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(a.trace()) < 1e-13);
    CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("g0 with empty cavity is stationary") {
  const Params p = paper_params();
  const HilbertSpace space(1);
  const DensityMatrix rho = pure_density(space.basis_vector({AtomicLevel::g_0, 0, 0}));
  for (double t : {0.0, 14.0, 15.0, 16.0, 24.0}) CHECK(lindblad_rhs(space, p, t, rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
  const HilbertSpace space(1);
  CHECK_THROWS_AS(lindblad_rhs(space, paper_params(), 0.0, DensityMatrix::Identity(5, 5)), DomainError);
  Params p = paper_params();
  p.n_max = 2;
  CHECK_THROWS_AS(integrate_master(space, p, initial_density(space)), DomainError);
}

TEST_CASE("initial state and populations") {
  const HilbertSpace space(1);
  const DensityMatrix rho = initial_density(space);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
  const auto pop = populations(space, rho);
  CHECK(pop[static_cast<int>(AtomicLevel::e_0)] == 1.0);
  double total = 0.0;
  for (double x : pop) total += x;
  CHECK(total == 1.0);
}

TEST_CASE("protocol run keeps rho a density matrix") {
  const Params p = fast_params();
  const HilbertSpace space(1);
  const MasterRun run = integrate_master(space, p, initial_density(space));
  const TimeGrid grid(p);
  CHECK(run.series.size() == grid.sample_count());
  CHECK(run.series.t.back() == p.exit_time);
  for (double e : run.series.trace_err) CHECK(e < 1e-12);
  CHECK(run.max_hermiticity_error < 1e-12);
  REQUIRE(run.checkpoint_min_eigenvalue.size() == 10);
  for (double v : run.checkpoint_min_eigenvalue) CHECK(v > -1e-8);
  CHECK(run.checkpoint_times.back() == p.exit_time);
  for (std::size_t k = 0; k < run.series.size(); ++k) {
    double total = 0.0;
    for (const auto& level : run.series.pop) total += level[k];
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  // The atom ends in the dark ground state.
  CHECK(run.series.pop[static_cast<int>(AtomicLevel::g_0)].back() > 0.9);
}

TEST_CASE("trace drift beyond the tolerance raises") {
  const Params p = fast_params();
  const HilbertSpace space(1);
  MasterOptions strict;
  strict.max_trace_error = 0.0;
  bool raised = false;
  try {
    integrate_master(space, p, 0.5 * initial_density(space), strict);
  } catch (const IntegrationError& e) {
    raised = true;
    CHECK(e.solver() == "master");
    CHECK(e.time() == 0.0);
  }
  CHECK(raised);
}
