#include "cqed/hilbert.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void require_unit_projection(int value, const char* name) {
  if (value < -1 || value > 1) {
    throw DomainError(std::string(name) + " must lie in {-1, 0, +1}, got " + std::to_string(value));
  }
}

Operator from_triplets(int dim, const std::vector<Triplet>& entries) {
  Operator op(dim, dim);
  op.setFromTriplets(entries.begin(), entries.end());
  op.makeCompressed();
  return op;
}

}  // namespace

AtomicLevel ground_level(int m) {
  require_unit_projection(m, "m_F");
  return static_cast<AtomicLevel>(m + 1);
}

AtomicLevel excited_level(int m) {
  require_unit_projection(m, "m_F'");
  return static_cast<AtomicLevel>(m + 4);
}

std::string_view level_label(AtomicLevel level) {
  static constexpr std::array<std::string_view, kAtomicLevelCount> labels = {
      "gm1", "g0", "gp1", "em1", "e0", "ep1"};
  return labels[static_cast<int>(level)];
}

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max) {
  if (n_max < 1) {
    throw DomainError("Fock truncation n_max must be >= 1, got " + std::to_string(n_max));
  }
}

int HilbertSpace::index(const BasisState& s) const {
  const int nf = fock_dim();
  if (s.n_left < 0 || s.n_left > n_max_ || s.n_right < 0 || s.n_right > n_max_) {
    throw DomainError("photon number outside truncation [0, " + std::to_string(n_max_) + "]");
  }
  return (static_cast<int>(s.level) * nf + s.n_left) * nf + s.n_right;
}

BasisState HilbertSpace::state(int index) const {
  if (index < 0 || index >= dim()) {
    throw DomainError("basis index " + std::to_string(index) + " out of range");
  }
  const int nf = fock_dim();
  return BasisState{static_cast<AtomicLevel>(index / (nf * nf)), (index / nf) % nf, index % nf};
}

StateVector HilbertSpace::basis_vector(const BasisState& s) const {
  StateVector v = StateVector::Zero(dim());
  v(index(s)) = 1.0;
  return v;
}

// For j1 = j2 = J = 1 the coupled state is the antisymmetric (vector-product)
// combination, so every allowed coefficient is sign(m - q) / sqrt(2).
double clebsch_gordan_1x1_to_1(int m, int q, int m_prime) {
  require_unit_projection(m, "m_F");
  require_unit_projection(q, "q");
  require_unit_projection(m_prime, "m_F'");
  if (m + q != m_prime || m == q) return 0.0;
  return (m > q ? 1.0 : -1.0) / std::sqrt(2.0);
}

Operator identity(const HilbertSpace& space) {
  Operator op(space.dim(), space.dim());
  op.setIdentity();
  return op;
}

Operator annihilation(const HilbertSpace& space, Mode mode) {
  std::vector<Triplet> entries;
  for (int col = 0; col < space.dim(); ++col) {
    BasisState s = space.state(col);
    int& n = (mode == Mode::L) ? s.n_left : s.n_right;
    if (n == 0) continue;
    const double amplitude = std::sqrt(static_cast<double>(n));
    --n;
    entries.emplace_back(space.index(s), col, amplitude);
  }
  return from_triplets(space.dim(), entries);
}

Operator atomic_raising(const HilbertSpace& space, int q) {
  require_unit_projection(q, "q");
  std::vector<Triplet> entries;
  for (int col = 0; col < space.dim(); ++col) {
    const BasisState s = space.state(col);
    if (is_excited(s.level)) continue;
    const int m = magnetic_number(s.level);
    const int m_prime = m + q;
    if (m_prime < -1 || m_prime > 1) continue;
    const double cg = clebsch_gordan_1x1_to_1(m, q, m_prime);
    if (cg == 0.0) continue;
    const BasisState target{excited_level(m_prime), s.n_left, s.n_right};
    entries.emplace_back(space.index(target), col, cg);
  }
  return from_triplets(space.dim(), entries);
}

Operator atomic_projector(const HilbertSpace& space, AtomicLevel level) {
  std::vector<Triplet> entries;
  for (int i = 0; i < space.dim(); ++i) {
    if (space.state(i).level == level) entries.emplace_back(i, i, 1.0);
  }
  return from_triplets(space.dim(), entries);
}

Operator excited_projector(const HilbertSpace& space) {
  std::vector<Triplet> entries;
  for (int i = 0; i < space.dim(); ++i) {
    if (is_excited(space.state(i).level)) entries.emplace_back(i, i, 1.0);
  }
  return from_triplets(space.dim(), entries);
}

}  // namespace cqed
