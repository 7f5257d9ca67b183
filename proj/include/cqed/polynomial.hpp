#pragma once

#include <span>
#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

struct CharacteristicRoots {
  int degree = 0;
  std::vector<Complex> roots;
  double residual = 0.0;  ///< max_i |p(s_i)|
};

/// Horner evaluation; coefficients are ordered from the leading term down.
Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex s);

/// All roots of a complex polynomial of degree 1..3 (coefficients leading
/// term first). Degree 2 uses the cancellation-free quadratic formula, degree 3
/// the companion-matrix eigenvalues followed by Newton polishing.
/// Roots are ordered by descending real part, ties by descending imaginary part.
/// Throws DegenerateDegreeError when the leading coefficient is ~0.
CharacteristicRoots solve_polynomial(std::span<const Complex> coeffs);
CharacteristicRoots solve_polynomial(std::initializer_list<Complex> coeffs);

}  // namespace cqed
