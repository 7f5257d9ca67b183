// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "oracles.hpp"

#include "cqed/effective_solver.hpp"
#include "cqed/entanglement.hpp"
#include "cqed/invariants.hpp"
#include "cqed/master_solver.hpp"
#include "cqed/runner.hpp"

using namespace cqed;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  if (!o.passed) ++failures;
  fmt::print("[{}] {:>2} {}: {}\n", o.passed ? "PASS" : "FAIL", id, name, o.detail);
  std::fflush(stdout);
}

std::size_t index_at(const TimeSeries& s, double t) {
  std::size_t best = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::abs(s.t[k] - t) < std::abs(s.t[best] - t)) best = k;
  }
  return best;
}

Params with_draw(const oracle::Draw& d) {
  Params p = paper_params();
  p.delta = d.delta;
  p.g = d.g;
  p.omega = d.omega;
  p.gamma = d.gamma;
  p.kappa = d.kappa;
  return p;
}

/// Max deviation between the closed forms and RK4 of the 3x3 systems, over a
/// grid of check times in every stage.
double closed_form_error(const Params& p) {
  constexpr int kSteps = 2000;  // per unit time
  constexpr double kCheckEvery = 0.25;
  double err = 0.0;
  auto advance = [&](const Eigen::MatrixXcd& h, Eigen::VectorXcd& x, double duration) {
    x = oracle::rk4_schrodinger(h, x, duration, std::max(1, static_cast<int>(std::lround(duration * kSteps))));
  };

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(3);
  x(0) = 1.0;
  const Eigen::MatrixXcd h1 = oracle::first_stage_matrix(p.delta, p.g, p.gamma, p.kappa);
  for (double t = 0.0; t < p.pump_on; t += kCheckEvery) {
    const double next = std::min(t + kCheckEvery, p.pump_on);
    advance(h1, x, next - t);
    const StageAmplitudes a = stage1_analytic(p, next);
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(a.values[k] - x(k)));
  }

  x = Eigen::VectorXcd::Zero(3);
  x(2) = 1.0;
  const Eigen::MatrixXcd h2 = oracle::pump_stage_matrix(p.delta, p.g, p.omega, p.gamma, p.kappa);
  for (double t = p.pump_on; t < p.pump_off; t += kCheckEvery) {
    const double next = std::min(t + kCheckEvery, p.pump_off);
    advance(h2, x, next - t);
    const StageAmplitudes a = stage2_analytic(p, next, Branch::g_plus);
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(a.values[k] - x(k)));
  }

  const Complex d2 = x(0);
  const Complex c2 = x(1);
  const Eigen::MatrixXcd h3 = oracle::pump_stage_matrix(p.delta, p.g, 0.0, p.gamma, p.kappa);
  for (double t = p.pump_off; t < p.exit_time; t += kCheckEvery) {
    const double next = std::min(t + kCheckEvery, p.exit_time);
    advance(h3, x, next - t);
    const Stage3Result r = stage3_analytic(p, next, d2, c2, Branch::g_plus);
    err = std::max({err, std::abs(r.c0 - x(1)), std::abs(r.excited - x(0))});
  }
  return err;
}

struct RootCheck {
  double residual_ratio = 0.0;  // max |p(s)| / max |coeff|
  double vieta_sum = 0.0;
  double vieta_product = 0.0;
};

RootCheck check_roots(const std::vector<Complex>& coeffs) {
  const CharacteristicRoots r = solve_polynomial(coeffs);
  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
  RootCheck out;
  Complex sum = 0.0;
  Complex product = 1.0;
  for (const Complex& s : r.roots) {
    out.residual_ratio = std::max(out.residual_ratio, std::abs(evaluate_polynomial(coeffs, s)) / scale);
    sum += s;
    product *= s;
  }
  const int n = static_cast<int>(coeffs.size()) - 1;
  out.vieta_sum = std::abs(sum + coeffs[1] / coeffs[0]);
  out.vieta_product = std::abs(product - (n % 2 == 0 ? 1.0 : -1.0) * coeffs[n] / coeffs[0]);
  return out;
}

std::vector<SweepRow> sweep(const std::string& param, double lo, double hi, int steps) {
  RunConfig cfg;
  cfg.solver = SolverChoice::master;
  cfg.sweep = SweepSpec{param, lo, hi, steps};
  return run_sweep(cfg);
}

}  // namespace

int main() {
  const Params p = paper_params();
  const HilbertSpace space(p.n_max);

  const auto start = std::chrono::steady_clock::now();
  const MasterRun master = integrate_master(space, p, initial_density(space));
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const PureStateRun effective = integrate_effective(space, p);
  const TimeSeries& ms = master.series;

  report(1, "photon efficiency", [&] {
    const PhotonYield y = photon_yield(ms, p);
    return Outcome{y.first >= 0.975 && y.second >= 0.975 && runtime < 30.0,
                   fmt::format("P1={:.5f} P2={:.5f} (>= 0.975), master runtime {:.2f} s (< 30 s, dim {})", y.first,
                               y.second, runtime, space.dim())};
  });

  report(2, "sequential pulses", [&] {
    std::vector<double> peaks;
    for (std::size_t k = 1; k + 1 < ms.size(); ++k) {
      if (ms.p_left[k] > 0.05 && ms.p_left[k] > ms.p_left[k - 1] && ms.p_left[k] >= ms.p_left[k + 1]) {
        peaks.push_back(ms.t[k]);
      }
    }
    double sym = 0.0;
    for (std::size_t k = 0; k < ms.size() && ms.t[k] < p.pump_on; ++k) {
      sym = std::max(sym, std::abs(ms.p_left[k] - ms.p_right[k]));
    }
    const bool ok = peaks.size() == 2 && peaks[0] > 0.0 && peaks[0] < 5.0 && peaks[1] > 14.0 && peaks[1] < 20.0 &&
                    sym <= 1e-9;
    std::string where;
    for (double t : peaks) where += fmt::format(" {:.2f}", t);
    return Outcome{ok, fmt::format("p_L maxima above 0.05 at{} ({} found), max |p_L - p_R| for t < t1 = {:.2e}",
                                   where, peaks.size(), sym)};
  });

  report(3, "master vs non-Hermitian rates", [&] {
    const double dev = max_rate_deviation(ms, effective.series);
    return Outcome{dev <= 0.02, fmt::format("max |dp| = {:.3e} (<= 0.02)", dev)};
  });

  report(4, "closed forms vs 3x3 RK4", [&] {
    double worst = closed_form_error(p);
    const double at_reference = worst;
    for (const auto& d : oracle::random_draws(10, 20241015)) worst = std::max(worst, closed_form_error(with_draw(d)));
    return Outcome{worst <= 1e-8,
                   fmt::format("reference {:.2e}, worst over 10 draws {:.2e} (<= 1e-8)", at_reference, worst)};
  });

  report(5, "characteristic roots", [&] {
    const RootCheck cubic = check_roots(stage2_polynomial(p));
    const RootCheck quad = check_roots(stage3_polynomial(p));
    const double residual = std::max(cubic.residual_ratio, quad.residual_ratio);
    const double vieta = std::max({cubic.vieta_sum, cubic.vieta_product, quad.vieta_sum, quad.vieta_product});
    return Outcome{residual <= 1e-10 && vieta <= 1e-10,
                   fmt::format("residual/max|coeff| = {:.2e}, Vieta = {:.2e} (<= 1e-10)", residual, vieta)};
  });

  report(6, "mixed-state handoff", [&] {
    const std::size_t k = index_at(ms, p.pump_on);
    const double gm = ms.pop[static_cast<int>(AtomicLevel::g_m1)][k];
    const double gp = ms.pop[static_cast<int>(AtomicLevel::g_p1)][k];
    const double e0 = ms.pop[static_cast<int>(AtomicLevel::e_0)][k];
    const double photons = (ms.p_left[k] + ms.p_right[k]) / (2.0 * p.kappa);
    const bool ok = std::abs(gm - 0.5) < 0.02 && std::abs(gp - 0.5) < 0.02 && photons < 0.01 && e0 < 0.01;
    return Outcome{ok, fmt::format("t={} pop(g-1)={:.5f} pop(g+1)={:.5f} <n>={:.2e} pop(e0)={:.2e}", ms.t[k], gm, gp,
                                   photons, e0)};
  });

  report(7, "EPR fidelity", [&] {
    const PairAssembly pair = assemble_pair_state(effective.paths);
    const PairState n = pair.state.normalized();
    const double others = std::max(std::abs(n.amplitudes(0, 0)), std::abs(n.amplitudes(1, 1)));
    const double f = fidelity_epr(pair.state);
    return Outcome{f >= 0.98 && others < 1e-12,
                   fmt::format("F = {:.6f} (>= 0.98), |LL|,|RR| <= {:.1e}, |RL| = {:.4f}, |LR| = {:.4f}", f, others,
                               std::abs(n.rl()), std::abs(n.lr()))};
  });

  report(8, "destructive interference", [&] {
    Params closed = p;
    closed.gamma = 0.0;
    closed.kappa = 0.0;
    const double leak = interference_check(space, closed, 50.0).max_pop_g0();
    const double final_g0 = ms.pop[static_cast<int>(AtomicLevel::g_0)].back();
    return Outcome{leak <= 1e-10 && final_g0 > 0.9,
                   fmt::format("unitary max pop(g0) on [0, 50] = {:.2e} (<= 1e-10), dissipative pop(g0)(T) = {:.4f}",
                               leak, final_g0)};
  });

  report(9, "structural invariants", [&] {
    bool ok = true;
    std::string detail;
    for (const CheckResult& c : run_invariant_suite(p)) {
      ok = ok && c.passed;
      if (!detail.empty()) detail += "; ";
      detail += fmt::format("{} {:.1e}{}", c.passed ? "ok" : "FAILED", c.value, " [" + c.name + "]");
    }
    return Outcome{ok, detail};
  });

  report(10, "regime trends", [&] {
    const auto kappa_rows = sweep("kappa", 0.2, 6.0, 30);
    std::size_t best = 0;
    auto time_of = [](const SweepRow& r) {
      return std::isnan(r.time_to_first_090) ? std::numeric_limits<double>::infinity() : r.time_to_first_090;
    };
    for (std::size_t k = 0; k < kappa_rows.size(); ++k) {
      if (time_of(kappa_rows[k]) < time_of(kappa_rows[best])) best = k;
    }
    const bool interior = best > 0 && best + 1 < kappa_rows.size() &&
                          time_of(kappa_rows.front()) > time_of(kappa_rows[best]) &&
                          time_of(kappa_rows.back()) > time_of(kappa_rows[best]);

    const auto window_rows = sweep("t2", 14.25, 22.0, 32);
    std::size_t top = 0;
    for (std::size_t k = 0; k < window_rows.size(); ++k) {
      if (window_rows[k].second_photon > window_rows[top].second_photon) top = k;
    }
    double dip = window_rows[top].second_photon;
    double dip_at = window_rows[top].value;
    for (std::size_t k = top; k < window_rows.size(); ++k) {
      if (window_rows[k].second_photon < dip) {
        dip = window_rows[k].second_photon;
        dip_at = window_rows[k].value;
      }
    }
    const double peak = window_rows[top].second_photon;
    const bool under_pumped = window_rows.front().second_photon < peak - 0.05;
    const bool rabi_dip = dip < peak - 0.05;

    const auto gamma_rows = sweep("gamma", 0.0, 0.5, 6);
    bool decreasing = true;
    for (std::size_t k = 1; k < gamma_rows.size(); ++k) {
      decreasing = decreasing && gamma_rows[k].first_photon < gamma_rows[k - 1].first_photon;
    }
    return Outcome{interior && under_pumped && rabi_dip && decreasing,
                   fmt::format("kappa optimum {:.3f} (t_0.9={:.3f}, ends {:.3f}/{:.3f}); "
                               "P2(t2): {:.3f} at {:.2f}, peak {:.3f} at {:.2f}, dip {:.3f} at {:.2f}; "
                               "P1(gamma) decreasing: {} ({:.4f} -> {:.4f})",
                               kappa_rows[best].value, time_of(kappa_rows[best]), time_of(kappa_rows.front()),
                               time_of(kappa_rows.back()), window_rows.front().second_photon,
                               window_rows.front().value, peak, window_rows[top].value, dip, dip_at,
                               decreasing ? "yes" : "no", gamma_rows.front().first_photon,
                               gamma_rows.back().first_photon)};
  });

  fmt::print("{} of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
