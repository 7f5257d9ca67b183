#include "doctest.h"
#include "oracles.hpp"

#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"

using namespace cqed;

namespace {

Eigen::MatrixXcd dense(const Operator& op) { return Eigen::MatrixXcd(op); }

Eigen::Matrix3cd restrict(const HilbertSpace& space, const Eigen::MatrixXcd& h, const std::array<BasisState, 3>& states) {
  Eigen::Matrix3cd out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = h(space.index(states[i]), space.index(states[j]));
  }
  return out;
}

}  // namespace

TEST_CASE("reference parameters") {
  const Params p = paper_params();
  CHECK(p.delta == 0.0);
  CHECK(p.g == 1.0);
  CHECK(p.gamma == 0.01);
  CHECK(p.kappa == 1.2);
  CHECK(p.omega == 1.2);
  CHECK(p.pump_on == 14.0);
  CHECK(p.pump_off == 16.0);
  CHECK(p.exit_time == 25.0);
  CHECK(HilbertSpace(p.n_max).dim() == 24);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parameter validation") {
  auto with = [](auto mutate) {
    Params p = paper_params();
    mutate(p);
    return p;
  };
  CHECK_THROWS_AS(with([](Params& p) { p.kappa = -0.1; }).validate(), DomainError);
  CHECK_THROWS_AS(with([](Params& p) { p.gamma = -0.1; }).validate(), DomainError);
  CHECK_THROWS_AS(with([](Params& p) { p.pump_on = 17.0; }).validate(), DomainError);
  CHECK_THROWS_AS(with([](Params& p) { p.pump_off = 26.0; }).validate(), DomainError);
  CHECK_THROWS_AS(with([](Params& p) { p.pump_on = 0.0; }).validate(), DomainError);
  CHECK_THROWS_AS(with([](Params& p) { p.dt = 0.0; }).validate(), DomainError);
  CHECK_THROWS_AS(with([](Params& p) { p.g = std::nan(""); }).validate(), DomainError);
  CHECK_THROWS_AS(with([](Params& p) { p.n_max = 0; }).validate(), DomainError);
  // Signed amplitudes are a gauge choice.
  CHECK_NOTHROW(with([](Params& p) { p.g = -1.0; }).validate());
}

TEST_CASE("pulse envelopes include their edges") {
  const Params p = paper_params();
  CHECK(coupling_g(p, 0.0) == 1.0);
  CHECK(coupling_g(p, 25.0) == 1.0);
  CHECK(coupling_g(p, 25.5) == 0.0);
  CHECK(coupling_g(p, -0.1) == 0.0);
  CHECK(coupling_omega(p, 13.999) == 0.0);
  CHECK(coupling_omega(p, 14.0) == 1.2);
  CHECK(coupling_omega(p, 16.0) == 1.2);
  CHECK(coupling_omega(p, 16.001) == 0.0);
  const auto bp = pulse_breakpoints(p);
  REQUIRE(bp.size() == 2);
  CHECK(bp[0] == 14.0);
  CHECK(bp[1] == 16.0);
}

TEST_CASE("Hamiltonian is Hermitian") {
  const Params p = paper_params();
  const HilbertSpace space(2);
  for (double t : {0.0, 5.0, 15.0, 20.0}) {
    const Eigen::MatrixXcd h = dense(hamiltonian(space, p, t));
    CHECK((h - h.adjoint()).norm() < 1e-15);
  }
}

TEST_CASE("effective Hamiltonian adds the damping terms") {
  Params p = paper_params();
  p.delta = 0.3;
  const HilbertSpace space(1);
  const Eigen::MatrixXcd h = dense(hamiltonian(space, p, 15.0));
  const Eigen::MatrixXcd heff = dense(effective_hamiltonian(space, p, 15.0));
  const Eigen::MatrixXcd diff = heff - h;
  for (int i = 0; i < space.dim(); ++i) {
    const BasisState s = space.state(i);
    const double expected = -p.kappa * (s.n_left + s.n_right) - (is_excited(s.level) ? 0.5 * p.gamma : 0.0);
    CHECK(std::abs(diff(i, i) - Complex(0.0, expected)) < 1e-15);
  }
  CHECK((diff - Eigen::MatrixXcd(diff.diagonal().asDiagonal())).norm() < 1e-15);
}

TEST_CASE("restriction to the first-stage subspace") {
  Params p = paper_params();
  p.delta = 0.4;
  p.g = 0.7;
  p.gamma = 0.05;
  p.kappa = 0.9;
  const HilbertSpace space(1);
  const Eigen::MatrixXcd heff = dense(effective_hamiltonian(space, p, 3.0));
  const auto block = restrict(space, heff,
                              {BasisState{AtomicLevel::e_0, 0, 0}, {AtomicLevel::g_m1, 0, 1}, {AtomicLevel::g_p1, 1, 0}});
  CHECK((block - oracle::first_stage_matrix(p.delta, p.g, p.gamma, p.kappa)).norm() < 1e-14);
}

TEST_CASE("restriction to the pump-stage subspaces") {
  Params p = paper_params();
  p.delta = -0.2;
  p.omega = 1.7;
  const HilbertSpace space(1);
  const Eigen::MatrixXcd heff = dense(effective_hamiltonian(space, p, 15.0));
  const auto plus = restrict(space, heff,
                             {BasisState{AtomicLevel::e_p1, 0, 0}, {AtomicLevel::g_0, 0, 1}, {AtomicLevel::g_p1, 0, 0}});
  CHECK((plus - oracle::pump_stage_matrix(p.delta, p.g, p.omega, p.gamma, p.kappa)).norm() < 1e-14);

  // Mirror branch: every Clebsch-Gordan sign flips under m -> -m.
  auto minus = restrict(space, heff,
                        {BasisState{AtomicLevel::e_m1, 0, 0}, {AtomicLevel::g_0, 1, 0}, {AtomicLevel::g_m1, 0, 0}});
  Eigen::Matrix3cd expected = oracle::pump_stage_matrix(p.delta, p.g, p.omega, p.gamma, p.kappa);
  expected(0, 1) *= -1.0;
  expected(1, 0) *= -1.0;
  expected(0, 2) *= -1.0;
  expected(2, 0) *= -1.0;
  CHECK((minus - expected).norm() < 1e-14);

  // Without the pump the ground state is decoupled.
  const Eigen::MatrixXcd late = dense(effective_hamiltonian(space, p, 20.0));
  CHECK(std::abs(late(space.index({AtomicLevel::e_p1, 0, 0}), space.index({AtomicLevel::g_p1, 0, 0}))) == 0.0);
}

TEST_CASE("pi pump does not couple g0 and e0") {
  const HilbertSpace space(1);
  const Eigen::MatrixXcd h = dense(hamiltonian(space, paper_params(), 15.0));
  CHECK(h(space.index({AtomicLevel::e_0, 0, 0}), space.index({AtomicLevel::g_0, 0, 0})) == Complex(0.0));
}

TEST_CASE("jump operators") {
  Params p = paper_params();
  const HilbertSpace space(1);
  const auto jumps = jump_operators(space, p);
  REQUIRE(jumps.size() == 5);
  const Eigen::MatrixXcd al = dense(annihilation(space, Mode::L));
  CHECK((dense(jumps[0]) - std::sqrt(2.0 * p.kappa) * al).norm() < 1e-14);
  // sum_J J^+ J reproduces the anti-Hermitian part of H_eff.
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  for (const auto& j : jumps) sum += dense(j).adjoint() * dense(j);
  const Eigen::MatrixXcd heff = dense(effective_hamiltonian(space, p, 5.0));
  const Eigen::MatrixXcd anti = (heff - heff.adjoint()) / Complex(0.0, 2.0);
  CHECK((anti + 0.5 * sum).norm() < 1e-13);

  p.gamma = 0.0;
  const auto no_decay = jump_operators(space, p);
  for (int k = 2; k < 5; ++k) CHECK(no_decay[k].nonZeros() == 0);
}

TEST_CASE("model operator cache matches the direct build") {
  const Params p = paper_params();
  const HilbertSpace space(1);
  const ModelOperators ops(space);
  for (double t : {1.0, 15.0, 24.0}) {
    const Eigen::MatrixXcd a = dense(ops.hamiltonian(p.delta, coupling_g(p, t), coupling_omega(p, t)));
    CHECK((a - dense(hamiltonian(space, p, t))).norm() < 1e-15);
    CHECK((dense(effective_hamiltonian(ops, p, t)) - dense(effective_hamiltonian(space, p, t))).norm() < 1e-15);
  }
}
