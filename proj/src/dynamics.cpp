#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/core.h>

#include "cqed/errors.hpp"

namespace cqed {

void Params::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError(msg); };
  for (auto [name, value] : {std::pair{"delta", delta}, {"g", g}, {"omega", omega}, {"gamma", gamma},
                             {"kappa", kappa}, {"t1", pump_on}, {"t2", pump_off}, {"T", exit_time},
                             {"dt", dt}}) {
    if (!std::isfinite(value)) fail(fmt::format("{} must be finite", name));
  }
  if (gamma < 0.0) fail(fmt::format("gamma must be >= 0, got {}", gamma));
  if (kappa < 0.0) fail(fmt::format("kappa must be >= 0, got {}", kappa));
  if (!(pump_on > 0.0)) fail(fmt::format("t1 must be > 0, got {}", pump_on));
  if (pump_on > pump_off) fail(fmt::format("ordering 0 < t1 <= t2 <= T violated: t1={} > t2={}", pump_on, pump_off));
  if (pump_off > exit_time) fail(fmt::format("ordering 0 < t1 <= t2 <= T violated: t2={} > T={}", pump_off, exit_time));
  if (!(dt > 0.0)) fail(fmt::format("dt must be > 0, got {}", dt));
  if (dt > exit_time) fail(fmt::format("dt={} exceeds T={}", dt, exit_time));
  if (n_max < 1) fail(fmt::format("n_max must be >= 1, got {}", n_max));
  if (sample_every < 1) fail(fmt::format("sample_every must be >= 1, got {}", sample_every));
}

Params paper_params() { return Params{}; }

PulseProfile cavity_profile(const Params& p) { return {p.g, 0.0, p.exit_time}; }
PulseProfile pump_profile(const Params& p) { return {p.omega, p.pump_on, p.pump_off}; }

double coupling_g(const Params& params, double t) { return cavity_profile(params).value(t); }
double coupling_omega(const Params& params, double t) { return pump_profile(params).value(t); }

ModelOperators::ModelOperators(const HilbertSpace& space)
    : space_(space),
      a_left_(annihilation(space, Mode::L)),
      a_right_(annihilation(space, Mode::R)),
      raising_{atomic_raising(space, -1), atomic_raising(space, 0), atomic_raising(space, 1)},
      excited_(excited_projector(space)) {
  const Operator& a10 = raising(0);
  pump_term_ = a10 + Operator(a10.adjoint());
  const Operator absorb = raising(1) * a_right_ + raising(-1) * a_left_;
  cavity_term_ = absorb + Operator(absorb.adjoint());
  photon_number_ = Operator(a_left_.adjoint()) * a_left_ + Operator(a_right_.adjoint()) * a_right_;
  for (Operator* op : {&pump_term_, &cavity_term_, &photon_number_}) {
    op->prune(Complex(0.0));
    op->makeCompressed();
  }
}

Operator ModelOperators::hamiltonian(double delta, double g, double omega) const {
  Operator h = Complex(-delta) * excited_ + Complex(omega) * pump_term_ + Complex(g) * cavity_term_;
  h.prune(Complex(0.0));
  return h;
}

Operator hamiltonian(const HilbertSpace& space, const Params& params, double t) {
  return ModelOperators(space).hamiltonian(params.delta, coupling_g(params, t), coupling_omega(params, t));
}

std::vector<Operator> jump_operators(const HilbertSpace& space, const Params& params) {
  const double cavity = std::sqrt(2.0 * params.kappa);
  const double atom = std::sqrt(params.gamma);
  std::vector<Operator> jumps;
  jumps.reserve(5);
  jumps.emplace_back(Complex(cavity) * annihilation(space, Mode::L));
  jumps.emplace_back(Complex(cavity) * annihilation(space, Mode::R));
  for (int q : {-1, 0, 1}) {
    jumps.emplace_back(Complex(atom) * Operator(atomic_raising(space, q).adjoint()));
  }
  for (auto& j : jumps) j.prune(Complex(0.0));
  return jumps;
}

Operator effective_hamiltonian(const ModelOperators& ops, const Params& params, double t) {
  const Complex i(0.0, 1.0);
  Operator h = ops.hamiltonian(params.delta, coupling_g(params, t), coupling_omega(params, t));
  h -= (i * params.kappa) * ops.photon_number();
  h -= (i * (0.5 * params.gamma)) * ops.excited();
  h.prune(Complex(0.0));
  return h;
}

Operator effective_hamiltonian(const HilbertSpace& space, const Params& params, double t) {
  return effective_hamiltonian(ModelOperators(space), params, t);
}

std::vector<double> pulse_breakpoints(const Params& params) {
  std::vector<double> points;
  for (double t : {params.pump_on, params.pump_off}) {
    if (t > 0.0 && t < params.exit_time) points.push_back(t);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace cqed
