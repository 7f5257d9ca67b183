#include "doctest.h"
#include "oracles.hpp"

#include "cqed/errors.hpp"
#include "cqed/hilbert.hpp"

using namespace cqed;

namespace {

Eigen::MatrixXcd dense(const Operator& op) { return Eigen::MatrixXcd(op); }

}  // namespace

TEST_CASE("dimension and index round trip") {
  CHECK(HilbertSpace(1).dim() == 24);
  CHECK(HilbertSpace(2).dim() == 54);
  for (int n : {1, 2, 3}) {
    const HilbertSpace space(n);
    for (int i = 0; i < space.dim(); ++i) CHECK(space.index(space.state(i)) == i);
  }
  const HilbertSpace space(1);
  CHECK(space.index({AtomicLevel::g_m1, 0, 0}) == 0);
  CHECK(space.index({AtomicLevel::g_m1, 0, 1}) == 1);
  CHECK(space.index({AtomicLevel::g_m1, 1, 0}) == 2);
  CHECK(space.index({AtomicLevel::g_0, 0, 0}) == 4);
  CHECK(space.index({AtomicLevel::e_p1, 1, 1}) == 23);
}

TEST_CASE("invalid truncation and indices are rejected") {
  CHECK_THROWS_AS(HilbertSpace(0), DomainError);
  const HilbertSpace space(1);
  CHECK_THROWS_AS(space.index({AtomicLevel::g_0, 2, 0}), DomainError);
  CHECK_THROWS_AS(space.index({AtomicLevel::g_0, 0, -1}), DomainError);
  CHECK_THROWS_AS(space.state(24), DomainError);
}

TEST_CASE("level helpers") {
  CHECK(magnetic_number(AtomicLevel::g_m1) == -1);
  CHECK(magnetic_number(AtomicLevel::e_p1) == 1);
  CHECK(is_excited(AtomicLevel::e_0));
  CHECK_FALSE(is_excited(AtomicLevel::g_p1));
  for (int m = -1; m <= 1; ++m) {
    CHECK(magnetic_number(ground_level(m)) == m);
    CHECK(magnetic_number(excited_level(m)) == m);
  }
  CHECK(level_label(AtomicLevel::g_m1) == "gm1");
  CHECK(level_label(AtomicLevel::e_0) == "e0");
}

TEST_CASE("Clebsch-Gordan coefficients agree with the Racah formula") {
  for (int m = -1; m <= 1; ++m) {
    for (int q = -1; q <= 1; ++q) {
      for (int mp = -1; mp <= 1; ++mp) {
        CHECK(clebsch_gordan_1x1_to_1(m, q, mp) == doctest::Approx(oracle::racah_cg(1, m, 1, q, 1, mp)).epsilon(1e-14));
      }
    }
  }
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(clebsch_gordan_1x1_to_1(0, 0, 0) == 0.0);
  CHECK(clebsch_gordan_1x1_to_1(0, 1, 1) == doctest::Approx(-r));
  CHECK(clebsch_gordan_1x1_to_1(1, 0, 1) == doctest::Approx(r));
  CHECK(clebsch_gordan_1x1_to_1(-1, 1, 0) == doctest::Approx(-r));
  CHECK(clebsch_gordan_1x1_to_1(1, -1, 0) == doctest::Approx(r));
  CHECK_THROWS_AS(clebsch_gordan_1x1_to_1(2, 0, 2), DomainError);
}

TEST_CASE("cavity commutator below the truncation edge") {
  for (int n : {1, 2}) {
    const HilbertSpace space(n);
    for (Mode mode : {Mode::L, Mode::R}) {
      const Eigen::MatrixXcd a = dense(annihilation(space, mode));
      const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
      for (int i = 0; i < space.dim(); ++i) {
        const BasisState s = space.state(i);
        const int count = mode == Mode::L ? s.n_left : s.n_right;
        if (count < n) {
          CHECK(std::abs(comm(i, i) - 1.0) < 1e-14);
        }
        for (int j = 0; j < space.dim(); ++j) {
          if (j != i) CHECK(std::abs(comm(i, j)) < 1e-14);
        }
      }
    }
    const Eigen::MatrixXcd al = dense(annihilation(space, Mode::L));
    const Eigen::MatrixXcd ar = dense(annihilation(space, Mode::R));
    CHECK((al * ar - ar * al).norm() < 1e-14);
    CHECK((al * ar.adjoint() - ar.adjoint() * al).norm() < 1e-14);
  }
}

TEST_CASE("annihilation matrix elements") {
  const HilbertSpace space(2);
  const Eigen::MatrixXcd a = dense(annihilation(space, Mode::L));
  const int from = space.index({AtomicLevel::e_0, 2, 1});
  const int to = space.index({AtomicLevel::e_0, 1, 1});
  CHECK(std::abs(a(to, from) - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("atomic projectors resolve the identity") {
  const HilbertSpace space(1);
  Operator sum(space.dim(), space.dim());
  for (AtomicLevel level : kAtomicLevels) sum += atomic_projector(space, level);
  CHECK((dense(sum) - dense(identity(space))).norm() < 1e-15);
  CHECK(std::abs(dense(excited_projector(space)).trace() - 12.0) < 1e-15);
}

TEST_CASE("raising operators obey the selection rules") {
  const HilbertSpace space(1);
  for (int q = -1; q <= 1; ++q) {
    const Eigen::MatrixXcd a = dense(atomic_raising(space, q));
    for (int i = 0; i < space.dim(); ++i) {
      for (int j = 0; j < space.dim(); ++j) {
        if (std::abs(a(i, j)) == 0.0) continue;
        const BasisState to = space.state(i);
        const BasisState from = space.state(j);
        CHECK(is_excited(to.level));
        CHECK_FALSE(is_excited(from.level));
        CHECK(magnetic_number(to.level) == magnetic_number(from.level) + q);
        CHECK(to.n_left == from.n_left);
        CHECK(to.n_right == from.n_right);
        CHECK(std::abs(a(i, j) - oracle::racah_cg(1, magnetic_number(from.level), 1, q, 1,
                                                  magnetic_number(to.level))) < 1e-14);
      }
    }
  }
  const Eigen::MatrixXcd pi = dense(atomic_raising(space, 0));
  CHECK(pi(space.index({AtomicLevel::e_0, 0, 0}), space.index({AtomicLevel::g_0, 0, 0})) == Complex(0.0));
  CHECK_THROWS_AS(atomic_raising(space, 2), DomainError);
}
