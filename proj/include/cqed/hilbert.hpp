#pragma once

// Truncated product space |atomic level> (x) |n_L> (x) |n_R> for an F=1 -> F'=1
// atom in a two-polarization cavity, plus the operators acting on it.

#include <array>
#include <complex>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cqed {

using Complex = std::complex<double>;
using Operator = Eigen::SparseMatrix<Complex>;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

/// Zeeman sublevels, in basis order: ground manifold first, m_F ascending.
enum class AtomicLevel : int { g_m1 = 0, g_0, g_p1, e_m1, e_0, e_p1 };

inline constexpr int kAtomicLevelCount = 6;
inline constexpr std::array<AtomicLevel, kAtomicLevelCount> kAtomicLevels = {
    AtomicLevel::g_m1, AtomicLevel::g_0, AtomicLevel::g_p1,
    AtomicLevel::e_m1, AtomicLevel::e_0, AtomicLevel::e_p1};

constexpr int magnetic_number(AtomicLevel level) { return static_cast<int>(level) % 3 - 1; }
constexpr bool is_excited(AtomicLevel level) { return static_cast<int>(level) >= 3; }

/// Level with the given m_F in the ground (F=1) or excited (F'=1) manifold.
AtomicLevel ground_level(int m);
AtomicLevel excited_level(int m);

/// Short ASCII label such as "gm1", "e0", "ep1".
std::string_view level_label(AtomicLevel level);

enum class Mode { L, R };

struct BasisState {
  AtomicLevel level = AtomicLevel::g_0;
  int n_left = 0;
  int n_right = 0;

  friend bool operator==(const BasisState&, const BasisState&) = default;
};

/// Atom-major ordering: index = (level * (n_max+1) + n_L) * (n_max+1) + n_R.
class HilbertSpace {
 public:
  explicit HilbertSpace(int n_max = 1);

  int n_max() const noexcept { return n_max_; }
  int fock_dim() const noexcept { return n_max_ + 1; }
  int dim() const noexcept { return kAtomicLevelCount * fock_dim() * fock_dim(); }

  int index(const BasisState& state) const;
  BasisState state(int index) const;
  StateVector basis_vector(const BasisState& state) const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  int n_max_;
};

/// <F'=1 m' | F=1 m; 1 q> in the Condon-Shortley convention.
/// Throws DomainError unless all three arguments lie in {-1, 0, +1}.
double clebsch_gordan_1x1_to_1(int m, int q, int m_prime);

Operator identity(const HilbertSpace& space);

/// a_xi (x) identity elsewhere, truncated at n_max.
Operator annihilation(const HilbertSpace& space, Mode mode);

/// A^dagger_{1q} = sum_m CG(m, q, m+q) |e_{m+q}><g_m| (x) 1_Fock.
Operator atomic_raising(const HilbertSpace& space, int q);

/// |level><level| (x) 1_Fock.
Operator atomic_projector(const HilbertSpace& space, AtomicLevel level);

/// Sum of the three excited-level projectors.
Operator excited_projector(const HilbertSpace& space);

}  // namespace cqed
