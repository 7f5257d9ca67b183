#include "cqed/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

std::vector<Complex> quadratic_roots(Complex a, Complex b, Complex c) {
  const Complex root_disc = std::sqrt(b * b - 4.0 * a * c);
  // Pick the branch that adds |b| and |sqrt(disc)| constructively.
  const double align = std::real(std::conj(b) * root_disc);
  const Complex q = -0.5 * (align >= 0.0 ? b + root_disc : b - root_disc);
  if (std::abs(q) == 0.0) return {Complex(0.0), Complex(0.0)};
  return {q / a, c / q};
}

std::vector<Complex> companion_roots(std::span<const Complex> coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -coeffs[j + 1] / coeffs[0];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<Complex> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

Complex derivative(std::span<const Complex> coeffs, Complex s) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  Complex acc(0.0);
  for (int k = 0; k < n; ++k) acc = acc * s + coeffs[k] * static_cast<double>(n - k);
  return acc;
}

void polish(std::span<const Complex> coeffs, std::vector<Complex>& roots) {
  for (Complex& s : roots) {
    for (int iter = 0; iter < 4; ++iter) {
      const Complex p = evaluate_polynomial(coeffs, s);
      const Complex dp = derivative(coeffs, s);
      if (std::abs(dp) == 0.0) break;
      const Complex next = s - p / dp;
      if (std::abs(evaluate_polynomial(coeffs, next)) >= std::abs(p)) break;
      s = next;
    }
  }
}

}  // namespace

Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex s) {
  Complex acc(0.0);
  for (const Complex& c : coeffs) acc = acc * s + c;
  return acc;
}

CharacteristicRoots solve_polynomial(std::span<const Complex> coeffs) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree < 1 || degree > 3) {
    throw DomainError("solve_polynomial supports degree 1..3, got " + std::to_string(degree));
  }
  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
  if (std::abs(coeffs[0]) <= 1e-14 * scale || scale == 0.0) {
    throw DegenerateDegreeError("leading coefficient vanishes; polynomial is not of degree " +
                                std::to_string(degree));
  }

  std::vector<Complex> roots;
  switch (degree) {
    case 1:
      roots = {-coeffs[1] / coeffs[0]};
      break;
    case 2:
      roots = quadratic_roots(coeffs[0], coeffs[1], coeffs[2]);
      break;
    default:
      roots = companion_roots(coeffs);
      polish(coeffs, roots);
      break;
  }

  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });

  CharacteristicRoots result{degree, std::move(roots), 0.0};
  for (const Complex& s : result.roots) {
    result.residual = std::max(result.residual, std::abs(evaluate_polynomial(coeffs, s)));
  }
  return result;
}

CharacteristicRoots solve_polynomial(std::initializer_list<Complex> coeffs) {
  return solve_polynomial(std::span<const Complex>(coeffs.begin(), coeffs.size()));
}

}  // namespace cqed
