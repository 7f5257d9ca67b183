// Python module cqed_epr._core.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqed/config.hpp"
#include "cqed/entanglement.hpp"
#include "cqed/errors.hpp"
#include "cqed/invariants.hpp"
#include "cqed/runner.hpp"

namespace py = pybind11;
using namespace cqed;

namespace {

py::dict series_dict(const TimeSeries& s) {
  py::dict d;
  d["t"] = s.t;
  d["p_L"] = s.p_left;
  d["p_R"] = s.p_right;
  d["P_L"] = s.cum_left;
  d["P_R"] = s.cum_right;
  for (AtomicLevel level : kAtomicLevels) {
    d[py::str("pop_" + std::string(level_label(level)))] = s.pop[static_cast<int>(level)];
  }
  d["trace_err"] = s.trace_err;
  return d;
}

RunConfig config_from_text(const std::string& text) {
  ConfigResult r = validate_config(text);
  if (auto* cfg = std::get_if<RunConfig>(&r)) return *cfg;
  std::string msg;
  for (const auto& issue : std::get<std::vector<ConfigIssue>>(r)) {
    if (!msg.empty()) msg += "; ";
    msg += issue.to_string();
  }
  throw DomainError(msg);
}

RunConfig config_from_kwargs(const py::kwargs& kwargs) {
  std::string text;
  for (const auto& [key, value] : kwargs) {
    text += py::str(key).cast<std::string>() + " = " + py::str(value).cast<std::string>() + "\n";
  }
  return config_from_text(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entangled photon-pair emission from an F=1 -> F'=1 atom in a two-mode cavity";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  py::class_<Params>(m, "Params")
      .def(py::init<>())
      .def_readwrite("delta", &Params::delta)
      .def_readwrite("g", &Params::g)
      .def_readwrite("omega", &Params::omega)
      .def_readwrite("gamma", &Params::gamma)
      .def_readwrite("kappa", &Params::kappa)
      .def_readwrite("t1", &Params::pump_on)
      .def_readwrite("t2", &Params::pump_off)
      .def_readwrite("T", &Params::exit_time)
      .def_readwrite("n_max", &Params::n_max)
      .def_readwrite("dt", &Params::dt)
      .def_readwrite("sample_every", &Params::sample_every)
      .def("validate", &Params::validate)
      .def("__eq__", [](const Params& a, const Params& b) { return a == b; })
      .def("__repr__", [](const Params& p) {
        return "Params(delta=" + std::to_string(p.delta) + ", g=" + std::to_string(p.g) +
               ", omega=" + std::to_string(p.omega) + ", gamma=" + std::to_string(p.gamma) +
               ", kappa=" + std::to_string(p.kappa) + ", t1=" + std::to_string(p.pump_on) +
               ", t2=" + std::to_string(p.pump_off) + ", T=" + std::to_string(p.exit_time) + ")";
      });
  m.def("paper_params", &paper_params, "The reference parameter set.");
  m.def("params_from_config", [](const std::string& text) { return config_from_text(text).params; },
        py::arg("text"), "Validated Params from key = value or JSON text.");

  m.def("clebsch_gordan", &clebsch_gordan_1x1_to_1, py::arg("m"), py::arg("q"), py::arg("m_prime"),
        "<1 m; 1 q | 1 m'>.");
  m.def("hilbert_dim", [](int n_max) { return HilbertSpace(n_max).dim(); }, py::arg("n_max") = 1);
  m.def(
      "hamiltonian",
      [](const Params& p, double t) { return Eigen::MatrixXcd(hamiltonian(HilbertSpace(p.n_max), p, t)); },
      py::arg("params"), py::arg("t"), "Dense H(t) in the atom-major product basis.");
  m.def(
      "effective_hamiltonian",
      [](const Params& p, double t) {
        return Eigen::MatrixXcd(effective_hamiltonian(HilbertSpace(p.n_max), p, t));
      },
      py::arg("params"), py::arg("t"));
  m.def(
      "lindblad_rhs",
      [](const Params& p, double t, const DensityMatrix& rho) {
        return lindblad_rhs(HilbertSpace(p.n_max), p, t, rho);
      },
      py::arg("params"), py::arg("t"), py::arg("rho"));

  m.def(
      "solve_polynomial", [](const std::vector<Complex>& c) { return solve_polynomial(c).roots; },
      py::arg("coefficients"), "Roots of a degree 1-3 polynomial, leading coefficient first.");
  m.def("stage1_polynomial", &stage1_polynomial, py::arg("params"));
  m.def("stage2_polynomial", &stage2_polynomial, py::arg("params"));
  m.def("stage3_polynomial", &stage3_polynomial, py::arg("params"));

  m.def(
      "run",
      [](py::kwargs kwargs) {
        const RunConfig cfg = config_from_kwargs(kwargs);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = execute(cfg);
        }
        const Summary& s = r.summary;
        py::dict out;
        out["P1"] = s.first_photon;
        out["P2"] = s.second_photon;
        out["fidelity_epr"] = s.fidelity_epr;
        out["branch_overlap"] = s.branch_overlap;
        out["peak_t_first"] = s.peak_t_first;
        out["peak_t_second"] = s.peak_t_second;
        out["max_trace_err"] = s.max_trace_err;
        out["cross_solver_max_dev"] = s.cross_solver_max_dev;
        out["analytic_max_dev"] = s.analytic_max_dev;
        out["source"] = s.source;
        if (r.master) out["master"] = series_dict(r.master->series);
        if (r.effective) out["effective"] = series_dict(r.effective->series);
        if (r.analytic) out["analytic"] = series_dict(r.analytic->series);
        return out;
      },
      "Runs the protocol. Keyword arguments use the configuration keys (kappa=1.5, solver='effective', ...).");

  m.def(
      "sweep",
      [](py::kwargs kwargs) {
        const RunConfig cfg = config_from_kwargs(kwargs);
        if (!cfg.sweep) throw DomainError("sweep needs sweep_param, sweep_min, sweep_max and sweep_steps");
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(cfg);
        }
        py::list out;
        for (const SweepRow& r : rows) {
          py::dict d;
          d[py::str(cfg.sweep->parameter)] = r.value;
          d["P1"] = r.first_photon;
          d["P2"] = r.second_photon;
          d["t_first_090"] = r.time_to_first_090;
          d["peak_t_first"] = r.peak_t_first;
          d["peak_t_second"] = r.peak_t_second;
          out.append(d);
        }
        return out;
      },
      "Evaluates a one-parameter sweep; returns one dict per point.");

  m.def(
      "check",
      [](const Params& p) {
        py::list out;
        for (const CheckResult& c : run_invariant_suite(p)) {
          out.append(py::make_tuple(c.name, c.passed, c.value, c.relation, c.threshold));
        }
        return out;
      },
      py::arg("params"), "Structural invariant suite: (name, passed, value, relation, threshold) tuples.");

  m.def(
      "fidelity_epr",
      [](Complex alpha_rl, Complex beta_lr) { return fidelity_epr(PairState::from_branches(alpha_rl, beta_lr)); },
      py::arg("alpha_rl"), py::arg("beta_lr"), "Singlet fidelity of alpha |R>|L> + beta |L>|R>.");
  m.def(
      "interference_check",
      [](const Params& p, double t_end, double dt) {
        const InterferenceRun r = interference_check(HilbertSpace(p.n_max), p, t_end, dt);
        py::dict d;
        d["t"] = r.t;
        d["pop_g0"] = r.pop_g0;
        d["norm"] = r.norm;
        return d;
      },
      py::arg("params"), py::arg("t_end") = 50.0, py::arg("dt") = 1e-2);
}
