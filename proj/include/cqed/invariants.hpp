#pragma once

#include <string>
#include <vector>

#include "cqed/dynamics.hpp"

namespace cqed {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< measured quantity
  double threshold = 0.0;  ///< bound it is compared against
  std::string relation;    ///< "<=" or ">="
};

/// Structural checks of both solvers at `params`: trace preservation,
/// Hermiticity, positivity, norm monotonicity under H_eff, Fock truncation
/// insensitivity (n_max 1 vs 2) and gauge invariance under g -> -g.
std::vector<CheckResult> run_invariant_suite(const Params& params);

}  // namespace cqed
