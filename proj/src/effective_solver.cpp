#include "cqed/effective_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/core.h>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr Complex kI(0.0, 1.0);

double factorial_ratio(int n, int k) {
  // n! / (n - k)!
  double r = 1.0;
  for (int j = n - k + 1; j <= n; ++j) r *= j;
  return r;
}

bool nearly_equal_roots(Complex a, Complex b, double rel_tol = 1e-8) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel_tol * scale;
}

/// Photon mode that g0 must absorb to reach e_m (q = m): R for m = +1, L for m = -1.
Mode absorbed_mode(Branch branch) { return branch == Branch::g_plus ? Mode::R : Mode::L; }

BasisState photon_state(AtomicLevel level, Mode mode) {
  return mode == Mode::L ? BasisState{level, 1, 0} : BasisState{level, 0, 1};
}

/// Cavity matrix element <e_m, 0, 0| H |g0, 1_xi>.
double cavity_element(const Params& params, Branch branch) {
  const int m = branch_m(branch);
  return params.g * clebsch_gordan_1x1_to_1(0, m, m);
}

double pump_element(const Params& params, Branch branch) {
  const int m = branch_m(branch);
  return params.omega * clebsch_gordan_1x1_to_1(m, 0, m);
}

void require_window(double t, double lo, double hi, const char* stage) {
  const double eps = 1e-12 * std::max(1.0, std::abs(hi));
  if (t < lo - eps || t > hi + eps) {
    throw DomainError(fmt::format("{} solution requested at t={} outside [{}, {}]", stage, t, lo, hi));
  }
}

}  // namespace

double StageAmplitudes::norm2() const {
  double acc = 0.0;
  for (const Complex& v : values) acc += std::norm(v);
  return acc;
}

Complex StageAmplitudes::at(const BasisState& s) const {
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k] == s) return values[k];
  }
  throw DomainError("basis state not part of this stage");
}

ModeExpansion::ModeExpansion(std::span<const Complex> roots, const Eigen::MatrixXcd& generator,
                             const Eigen::VectorXcd& x0, double merge_tol) {
  const int n = static_cast<int>(generator.rows());
  if (generator.cols() != n || x0.size() != n || static_cast<int>(roots.size()) != n) {
    throw DomainError("mode expansion needs one root per component and a square generator");
  }
  double scale = 0.0;
  for (const Complex& s : roots) scale = std::max(scale, std::abs(s));

  std::vector<std::vector<Complex>> groups;
  for (const Complex& s : roots) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return std::abs(g.front() - s) <= merge_tol * scale; });
    if (it == groups.end()) {
      groups.push_back({s});
    } else {
      it->push_back(s);
    }
  }
  for (const auto& g : groups) {
    Complex mean(0.0);
    for (const Complex& s : g) mean += s;
    mean /= static_cast<double>(g.size());
    for (int k = 0; k < static_cast<int>(g.size()); ++k) {
      basis_roots_.push_back(mean);
      basis_powers_.push_back(k);
    }
  }

  // Match x^(k)(0) = A^k x0 for k = 0..n-1.
  Eigen::MatrixXcd derivs(n, n);  // derivs(j, k) = (A^k x0)_j
  Eigen::VectorXcd current = x0;
  for (int k = 0; k < n; ++k) {
    derivs.col(k) = current;
    current = generator * current;
  }
  Eigen::MatrixXcd basis_derivs = Eigen::MatrixXcd::Zero(n, n);  // (k, b)
  for (int b = 0; b < n; ++b) {
    const int p = basis_powers_[b];
    for (int k = p; k < n; ++k) {
      basis_derivs(k, b) = factorial_ratio(k, p) * std::pow(basis_roots_[b], k - p);
    }
  }
  coefficients_ = basis_derivs.fullPivLu().solve(derivs.transpose()).transpose();
}

Eigen::VectorXcd ModeExpansion::evaluate(double tau) const {
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(coefficients_.rows());
  for (std::size_t b = 0; b < basis_roots_.size(); ++b) {
    const Complex f = std::pow(tau, basis_powers_[b]) * std::exp(basis_roots_[b] * tau);
    x += coefficients_.col(static_cast<int>(b)) * f;
  }
  return x;
}

bool ModeExpansion::confluent() const {
  return std::any_of(basis_powers_.begin(), basis_powers_.end(), [](int p) { return p > 0; });
}

std::vector<Complex> stage1_polynomial(const Params& p) {
  return {2.0, 2.0 * p.kappa + p.gamma - 2.0 * kI * p.delta,
          p.gamma * p.kappa + 2.0 * p.g * p.g - 2.0 * kI * p.kappa * p.delta};
}

std::vector<Complex> stage2_polynomial(const Params& p) {
  const double om2 = p.omega * p.omega;
  return {2.0, 2.0 * p.kappa + p.gamma - 2.0 * kI * p.delta,
          om2 + p.kappa * p.gamma + p.g * p.g - 2.0 * kI * p.delta * p.kappa, om2 * p.kappa};
}

std::vector<Complex> stage3_polynomial(const Params& p) {
  return {2.0, 2.0 * p.kappa + p.gamma - 2.0 * kI * p.delta,
          p.g * p.g + p.kappa * p.gamma - 2.0 * kI * p.kappa * p.delta};
}

CharacteristicRoots stage1_roots(const Params& p) { return solve_polynomial(stage1_polynomial(p)); }
CharacteristicRoots stage2_cubic_roots(const Params& p) { return solve_polynomial(stage2_polynomial(p)); }
CharacteristicRoots stage3_roots(const Params& p) { return solve_polynomial(stage3_polynomial(p)); }

std::vector<BasisState> stage1_states() {
  return {{AtomicLevel::e_0, 0, 0}, {AtomicLevel::g_m1, 0, 1}, {AtomicLevel::g_p1, 1, 0}};
}

std::vector<BasisState> stage2_states(Branch branch) {
  const int m = branch_m(branch);
  return {{excited_level(m), 0, 0}, photon_state(AtomicLevel::g_0, absorbed_mode(branch)), {ground_level(m), 0, 0}};
}

Eigen::MatrixXcd stage1_generator(const Params& p) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
  h(0, 0) = Complex(-p.delta, -0.5 * p.gamma);
  h(0, 1) = h(1, 0) = p.g * clebsch_gordan_1x1_to_1(-1, 1, 0);
  h(0, 2) = h(2, 0) = p.g * clebsch_gordan_1x1_to_1(1, -1, 0);
  h(1, 1) = h(2, 2) = Complex(0.0, -p.kappa);
  return -kI * h;
}

Eigen::MatrixXcd stage2_generator(const Params& p, Branch branch) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
  h(0, 0) = Complex(-p.delta, -0.5 * p.gamma);
  h(0, 1) = h(1, 0) = cavity_element(p, branch);
  h(0, 2) = h(2, 0) = pump_element(p, branch);
  h(1, 1) = Complex(0.0, -p.kappa);
  return -kI * h;
}

StageAmplitudes stage1_analytic(const Params& p, double t) {
  require_window(t, 0.0, p.pump_on, "stage-1");
  const auto roots = stage1_roots(p).roots;
  const Complex s1 = roots[0];
  const Complex s2 = roots[1];
  const Complex prefactor = -kI * p.g / std::sqrt(2.0);
  Complex c1;
  Complex d0;
  if (nearly_equal_roots(s1, s2)) {
    const Complex s = 0.5 * (s1 + s2);
    const Complex e = std::exp(s * t);
    c1 = prefactor * t * e;
    d0 = e * (1.0 + (s + p.kappa) * t);
  } else {
    const Complex e1 = std::exp(s1 * t);
    const Complex e2 = std::exp(s2 * t);
    c1 = prefactor * (e1 - e2) / (s1 - s2);
    d0 = ((s1 + p.kappa) * e1 - (s2 + p.kappa) * e2) / (s1 - s2);
  }
  return {1, stage1_states(), {d0, -c1, c1}};
}

ModeExpansion stage2_modes(const Params& p, Branch branch) {
  const auto roots = stage2_cubic_roots(p).roots;
  Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(3);
  x0(2) = 1.0;
  return ModeExpansion(roots, stage2_generator(p, branch), x0);
}

StageAmplitudes stage2_analytic(const Params& p, double t, Branch branch) {
  require_window(t, p.pump_on, p.pump_off, "stage-2");
  const Eigen::VectorXcd x = stage2_modes(p, branch).evaluate(t - p.pump_on);
  return {2, stage2_states(branch), {x(0), x(1), x(2)}};
}

Complex stage3_s3(const Params& p, Complex excited_t2, Complex c0_t2, Branch branch) {
  return Complex(-0.5 * p.gamma, p.delta) + kI * cavity_element(p, branch) * excited_t2 / c0_t2;
}

Stage3Result stage3_analytic(const Params& p, double t, Complex excited_t2, Complex c0_t2, Branch branch) {
  require_window(t, p.pump_off, p.exit_time, "stage-3");
  const double tau = t - p.pump_off;
  const auto roots = stage3_roots(p).roots;
  const Complex s1 = roots[0];
  const Complex s2 = roots[1];

  // (d, c0) obey a closed 2x2 system once the pump is off.
  const double G = cavity_element(p, branch);
  Eigen::MatrixXcd generator(2, 2);
  generator << Complex(-0.5 * p.gamma, p.delta), -kI * G, -kI * G, Complex(-p.kappa, 0.0);
  Eigen::VectorXcd x0(2);
  x0 << excited_t2, c0_t2;
  const ModeExpansion modes(roots, generator, x0);
  const Eigen::VectorXcd x = modes.evaluate(tau);

  Stage3Result result{x(1), x(0), false};
  if (c0_t2 == Complex(0.0) || std::abs(c0_t2) <= 1e-12 * std::abs(excited_t2)) {
    result.fallback = true;
    return result;
  }
  const Complex s3 = stage3_s3(p, excited_t2, c0_t2, branch);
  if (nearly_equal_roots(s1, s2)) {
    const Complex s = 0.5 * (s1 + s2);
    result.c0 = c0_t2 * std::exp(s * tau) * (1.0 + (s - s3) * tau);
  } else {
    result.c0 = c0_t2 * ((s1 - s3) / (s1 - s2) * std::exp(s1 * tau) + (s2 - s3) / (s2 - s1) * std::exp(s2 * tau));
  }
  return result;
}

namespace {

struct BranchSnapshot {
  double weight = 0.0;
  Complex excited;
  Complex c0;
  Complex ground;
};

/// Amplitudes from the closed forms at time t; `stage` selects the side of a
/// pulse edge.
struct AnalyticProtocol {
  const Params& p;
  std::array<Complex, 3> stage2_end[2];  // (d, c0, c_m) at t2 per branch
  ModeExpansion modes_plus;
  ModeExpansion modes_minus;

  explicit AnalyticProtocol(const Params& params)
      : p(params), modes_plus(stage2_modes(params, Branch::g_plus)), modes_minus(stage2_modes(params, Branch::g_minus)) {
    for (int b = 0; b < 2; ++b) {
      const Eigen::VectorXcd x = (b == 0 ? modes_plus : modes_minus).evaluate(p.pump_off - p.pump_on);
      stage2_end[b] = {x(0), x(1), x(2)};
    }
  }

  BranchSnapshot branch_at(double t, int stage, int b, bool* fallback) const {
    const Branch branch = b == 0 ? Branch::g_plus : Branch::g_minus;
    if (stage == 2) {
      const Eigen::VectorXcd x = (b == 0 ? modes_plus : modes_minus).evaluate(t - p.pump_on);
      return {0.5, x(0), x(1), x(2)};
    }
    const auto& end = stage2_end[b];
    const Stage3Result r = stage3_analytic(p, std::clamp(t, p.pump_off, p.exit_time), end[0], end[1], branch);
    if (r.fallback && fallback) *fallback = true;
    return {0.5, r.excited, r.c0, end[2]};
  }

  int stage_of(double t) const {
    if (t <= p.pump_on) return 1;
    if (t <= p.pump_off) return 2;
    return 3;
  }
};

}  // namespace

PureStateRun evaluate_analytic(const Params& p, const EffectiveOptions& options) {
  const TimeGrid grid(p);
  const AnalyticProtocol protocol(p);
  const double flux = 2.0 * p.kappa;
  const double later_rate = (options.second_rate == SecondPhotonRate::flux ? 2.0 : 1.0) * p.kappa;
  const double amp = std::sqrt(flux);

  PureStateRun run;
  run.series.reserve(grid.sample_count());
  run.paths.sample_dt = p.dt * p.sample_every;

  // Loss rate (photon flux + spontaneous emission) and remaining norm.
  auto loss_and_norm = [&](double t, int stage) -> std::pair<double, double> {
    if (stage == 1) {
      const StageAmplitudes a = stage1_analytic(p, std::min(t, p.pump_on));
      const double photons = std::norm(a.values[1]) + std::norm(a.values[2]);
      return {flux * photons + p.gamma * std::norm(a.values[0]), a.norm2()};
    }
    double loss = 0.0;
    double norm = 0.0;
    for (int b = 0; b < 2; ++b) {
      const BranchSnapshot s = protocol.branch_at(t, stage, b, nullptr);
      loss += s.weight * (flux * std::norm(s.c0) + p.gamma * std::norm(s.excited));
      norm += s.weight * (std::norm(s.excited) + std::norm(s.c0) + std::norm(s.ground));
    }
    return {loss, norm};
  };
  auto simpson = [&](double a, double b, int stage) {
    const double fa = loss_and_norm(a, stage).first;
    const double fm = loss_and_norm(0.5 * (a + b), stage).first;
    const double fb = loss_and_norm(b, stage).first;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };

  double lost = 0.0;
  bool restarted = false;
  double previous_t = 0.0;
  int previous_stage = 1;
  double previous_norm = 1.0;
  const std::size_t n_samples = grid.sample_count();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = grid.time(static_cast<int>(k) * grid.sample_every());
    const int stage = protocol.stage_of(t);

    if (k > 0) {
      // Integrate the loss over [previous_t, t] piecewise; the tally restarts
      // when the pump stage begins.
      std::vector<double> cuts{previous_t};
      for (double edge : {p.pump_on, p.pump_off}) {
        if (edge > previous_t && edge < t) cuts.push_back(edge);
      }
      cuts.push_back(t);
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const int s = protocol.stage_of(0.5 * (cuts[c] + cuts[c + 1]));
        if (s > 1 && !restarted) {
          lost = 0.0;
          restarted = true;
        }
        lost += simpson(cuts[c], cuts[c + 1], s);
      }
    }

    std::array<double, kAtomicLevelCount> pop{};
    double rate_left = 0.0;
    double rate_right = 0.0;
    Complex first_r(0.0), first_l(0.0), second_minus(0.0), second_plus(0.0);
    double norm = 0.0;
    if (stage == 1) {
      const StageAmplitudes a = stage1_analytic(p, t);
      pop[static_cast<int>(AtomicLevel::e_0)] = std::norm(a.values[0]);
      pop[static_cast<int>(AtomicLevel::g_m1)] = std::norm(a.values[1]);
      pop[static_cast<int>(AtomicLevel::g_p1)] = std::norm(a.values[2]);
      rate_right = flux * std::norm(a.values[1]);
      rate_left = flux * std::norm(a.values[2]);
      first_r = amp * a.values[1];
      first_l = amp * a.values[2];
      norm = a.norm2();
    } else {
      for (int b = 0; b < 2; ++b) {
        const int m = b == 0 ? 1 : -1;
        const BranchSnapshot s = protocol.branch_at(t, stage, b, &run.stage3_fallback);
        pop[static_cast<int>(excited_level(m))] += s.weight * std::norm(s.excited);
        pop[static_cast<int>(AtomicLevel::g_0)] += s.weight * std::norm(s.c0);
        pop[static_cast<int>(ground_level(m))] += s.weight * std::norm(s.ground);
        norm += s.weight * (std::norm(s.excited) + std::norm(s.c0) + std::norm(s.ground));
        if (b == 0) {
          rate_right += s.weight * later_rate * std::norm(s.c0);
          second_plus = amp * s.c0;
        } else {
          rate_left += s.weight * later_rate * std::norm(s.c0);
          second_minus = amp * s.c0;
        }
      }
    }
    if (stage > 1 && run.handoff_sample == 0) run.handoff_sample = run.series.size();
    if (k > 0 && norm > previous_norm + options.norm_tolerance && stage == previous_stage) run.norm_monotone = false;
    run.series.push(t, rate_left, rate_right, pop, std::abs(1.0 - norm - lost));
    run.norm.push_back(norm);
    run.paths.first_right.push_back(first_r);
    run.paths.first_left.push_back(first_l);
    run.paths.second_from_minus.push_back(second_minus);
    run.paths.second_from_plus.push_back(second_plus);
    previous_t = t;
    previous_stage = stage;
    previous_norm = norm;
  }
  if (p.pump_on < p.exit_time) run.handoff_residual = stage1_analytic(p, p.pump_on).norm2();
  if (run.handoff_sample == 0) run.handoff_sample = run.series.size();
  return run;
}

PureStateRun integrate_effective(const HilbertSpace& space, const Params& p, const StateVector& psi0,
                                 const EffectiveOptions& options) {
  if (space.n_max() != p.n_max) {
    throw DomainError(fmt::format("space n_max={} differs from params n_max={}", space.n_max(), p.n_max));
  }
  if (psi0.size() != space.dim()) throw DomainError("initial state has the wrong dimension");

  const TimeGrid grid(p);
  const ModelOperators ops(space);
  const Operator& a_left = ops.a(Mode::L);
  const Operator& a_right = ops.a(Mode::R);
  const Operator n_left = Operator(a_left.adjoint()) * a_left;
  const Operator n_right = Operator(a_right.adjoint()) * a_right;
  const Operator& excited = ops.excited();
  const double flux = 2.0 * p.kappa;
  const double later_rate = (options.second_rate == SecondPhotonRate::flux ? 2.0 : 1.0) * p.kappa;
  const double amp = std::sqrt(flux);

  const int idx_gm1 = space.index({AtomicLevel::g_m1, 0, 0});
  const int idx_gp1 = space.index({AtomicLevel::g_p1, 0, 0});
  const int idx_g0 = space.index({AtomicLevel::g_0, 0, 0});

  std::map<std::pair<double, double>, Operator> generators;
  auto generator_at = [&](double t) -> const Operator& {
    const std::pair key{coupling_g(p, t), coupling_omega(p, t)};
    auto it = generators.find(key);
    if (it == generators.end()) {
      Operator gen = Complex(0.0, -1.0) * effective_hamiltonian(ops, p, t);
      it = generators.emplace(key, std::move(gen)).first;
    }
    return it->second;
  };

  struct Track {
    StateVector psi;
    double weight;
  };
  std::vector<Track> tracks{{psi0, 1.0}};
  bool handed_off = false;
  double lost = 0.0;

  auto loss_rate = [&](const StateVector& psi) {
    return flux * (psi.dot(n_left * psi) + psi.dot(n_right * psi)).real() + p.gamma * psi.dot(excited * psi).real();
  };

  PureStateRun run;
  run.series.reserve(grid.sample_count());
  run.paths.sample_dt = p.dt * p.sample_every;

  auto record = [&](int step) {
    const double t = grid.time(step);
    std::array<double, kAtomicLevelCount> pop{};
    const int block = space.fock_dim() * space.fock_dim();
    double rate_left = 0.0;
    double rate_right = 0.0;
    double norm = 0.0;
    const double rate = handed_off ? later_rate : flux;
    for (const Track& tr : tracks) {
      for (int level = 0; level < kAtomicLevelCount; ++level) {
        pop[level] += tr.weight * tr.psi.segment(level * block, block).squaredNorm();
      }
      rate_left += tr.weight * rate * tr.psi.dot(n_left * tr.psi).real();
      rate_right += tr.weight * rate * tr.psi.dot(n_right * tr.psi).real();
      norm += tr.weight * tr.psi.squaredNorm();
    }
    if (handed_off && run.handoff_sample == 0) run.handoff_sample = run.series.size();
    run.series.push(t, rate_left, rate_right, pop, std::abs(1.0 - norm - lost));
    run.norm.push_back(norm);
    if (!handed_off) {
      run.paths.first_right.push_back(amp * (a_right * tracks[0].psi)(idx_gm1));
      run.paths.first_left.push_back(amp * (a_left * tracks[0].psi)(idx_gp1));
      run.paths.second_from_plus.emplace_back(0.0);
      run.paths.second_from_minus.emplace_back(0.0);
    } else {
      run.paths.first_right.emplace_back(0.0);
      run.paths.first_left.emplace_back(0.0);
      run.paths.second_from_plus.push_back(amp * (a_right * tracks[0].psi)(idx_g0));
      run.paths.second_from_minus.push_back(amp * (a_left * tracks[1].psi)(idx_g0));
    }
  };

  auto handoff = [&]() {
    double residual = 0.0;
    for (const Track& tr : tracks) residual += tr.weight * tr.psi.squaredNorm();
    run.handoff_residual = residual;
    tracks = {{space.basis_vector({AtomicLevel::g_p1, 0, 0}), 0.5}, {space.basis_vector({AtomicLevel::g_m1, 0, 0}), 0.5}};
    handed_off = true;
    lost = 0.0;
  };

  const double pump_edge_eps = 1e-9 * p.dt;
  record(0);
  for (int i = 0; i < grid.steps(); ++i) {
    bool recorded = false;
    const auto pieces = grid.substeps(i);
    for (std::size_t s = 0; s < pieces.size(); ++s) {
      const auto [a, b] = pieces[s];
      const double h = b - a;
      const Operator& gen = generator_at(0.5 * (a + b));
      for (Track& tr : tracks) {
        const double norm_before = tr.psi.squaredNorm();
        const double loss_before = loss_rate(tr.psi);
        const StateVector k1 = gen * tr.psi;
        const StateVector k2 = gen * (tr.psi + (0.5 * h) * k1);
        const StateVector k3 = gen * (tr.psi + (0.5 * h) * k2);
        const StateVector k4 = gen * (tr.psi + h * k3);
        tr.psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double norm_after = tr.psi.squaredNorm();
        if (norm_after > norm_before + options.norm_tolerance) {
          throw IntegrationError("effective", b, fmt::format("norm increased from {:.12f} to {:.12f}", norm_before,
                                                             norm_after));
        }
        lost += tr.weight * 0.5 * h * (loss_before + loss_rate(tr.psi));
      }
      if (!handed_off && std::abs(b - p.pump_on) <= pump_edge_eps && p.pump_on < p.exit_time) {
        if (s + 1 == pieces.size() && grid.is_sample(i + 1)) {
          record(i + 1);
          recorded = true;
        }
        handoff();
      }
    }
    if (grid.is_sample(i + 1) && !recorded) record(i + 1);
  }
  if (run.handoff_sample == 0) run.handoff_sample = run.series.size();
  return run;
}

PureStateRun integrate_effective(const HilbertSpace& space, const Params& params, const EffectiveOptions& options) {
  return integrate_effective(space, params, space.basis_vector({AtomicLevel::e_0, 0, 0}), options);
}

}  // namespace cqed
