#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtnoise/born.hpp"
#include "rtnoise/defect.hpp"
#include "rtnoise/ensemble.hpp"
#include "rtnoise/fidelity.hpp"
#include "rtnoise/grape.hpp"
#include "rtnoise/montecarlo.hpp"

namespace py = pybind11;
using namespace rtnoise;

namespace {

ControlPulse pulse_from_segments(const std::vector<std::pair<double, double>>& segments,
                                 double a_max) {
  ControlPulse pulse;
  pulse.a_max = a_max;
  for (const auto& [duration, amplitude] : segments) pulse.segments.push_back({duration, amplitude});
  pulse.validate();
  return pulse;
}

}  // namespace

PYBIND11_MODULE(_rtnoise, m) {
  m.doc() = "average qubit dynamics under two-state Markov noise";

  py::class_<ControlPulse>(m, "ControlPulse")
      .def(py::init(&pulse_from_segments), py::arg("segments"), py::arg("a_max") = 1.0,
           "segments: list of (duration, amplitude) pairs")
      .def_property_readonly("segments",
                             [](const ControlPulse& p) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& s : p.segments)
                                 out.emplace_back(s.duration, s.amplitude);
                               return out;
                             })
      .def_readonly("a_max", &ControlPulse::a_max)
      .def("duration", &ControlPulse::duration)
      .def("amplitude_at", &ControlPulse::amplitude_at)
      .def("sign_changes", [](const ControlPulse& p) { return sign_changes(p); });

  m.def("pi_pulse", &pi_pulse, py::arg("a_max") = 1.0);
  m.def("corpse_not", &corpse_not, py::arg("a_max") = 1.0);
  m.def("short_corpse_not", &short_corpse_not, py::arg("a_max") = 1.0);

  m.def(
      "pauli",
      [](const std::string& axis) {
        if (axis == "x") return pauli(PauliAxis::X);
        if (axis == "y") return pauli(PauliAxis::Y);
        if (axis == "z") return pauli(PauliAxis::Z);
        throw std::invalid_argument("axis must be 'x', 'y', or 'z'");
      },
      py::arg("axis"));
  m.def("expm", &expm);
  m.def("trace_distance", &trace_distance);
  m.def("bloch", [](const Matrix& rho) { return bloch(DensityOperator(rho)); });
  m.def("from_bloch", [](const Eigen::Vector3d& v) { return from_bloch(v).matrix(); });

  m.def(
      "evolve_ensemble",
      [](const Matrix& rho0, double delta, double tau_c, const ControlPulse& pulse, double t) {
        const MarkovNoiseModel model = rtn_model({delta, tau_c});
        return average_state_raw(
            evolve_ensemble(init_ensemble(DensityOperator(rho0), model), model, pulse, t));
      },
      py::arg("rho0"), py::arg("delta"), py::arg("tau_c"), py::arg("pulse"), py::arg("t"),
      "average state under two-state telegraph noise (exact master equation)");

  m.def(
      "evolve_born",
      [](const Matrix& rho0, double delta, double tau_c, const ControlPulse& pulse, double t) {
        const SystemHamiltonian h_s{Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
        return evolve_born_exponential(h_s, pulse, 0.5 * pauli(PauliAxis::Z), {delta, tau_c},
                                       DensityOperator(rho0), t)
            .rho;
      },
      py::arg("rho0"), py::arg("delta"), py::arg("tau_c"), py::arg("pulse"), py::arg("t"),
      "memory-kernel (exponential autocorrelation) average state");

  m.def(
      "evolve_defect",
      [](const Matrix& rho0, double delta, double tau_c, const ControlPulse& pulse, double t) {
        DefectModel model;
        model.h_s = {Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
        model.k_s = 0.5 * delta * pauli(PauliAxis::Z);
        model.gamma1 = model.gamma2 = 1.0 / tau_c;
        const BlockState blocks = evolve_defect_blocks(model, pulse, DensityOperator(rho0), t);
        return Matrix(blocks.pp + blocks.mm);
      },
      py::arg("rho0"), py::arg("delta"), py::arg("tau_c"), py::arg("pulse"), py::arg("t"),
      "defect-plus-Lindblad-bath average state (high-temperature rates 1/tau_c)");

  m.def(
      "mc_average",
      [](const Matrix& rho0, double delta, double tau_c, const ControlPulse& pulse, double t,
         int n_traj, std::uint64_t seed) {
        const MarkovNoiseModel model = rtn_model({delta, tau_c});
        const McEstimate est =
            mc_average_evolution(model, DensityOperator(rho0), pulse, t, n_traj, seed);
        return py::make_tuple(est.mean_state, est.std_error);
      },
      py::arg("rho0"), py::arg("delta"), py::arg("tau_c"), py::arg("pulse"), py::arg("t"),
      py::arg("n_traj"), py::arg("seed"),
      "trajectory-sampled average state; returns (state, max entrywise std error)");

  m.def(
      "process_matrix",
      [](const ControlPulse& pulse, double delta, double tau_c) {
        return rtn_process_map(pulse, delta, tau_c).matrix;
      },
      py::arg("pulse"), py::arg("delta"), py::arg("tau_c"),
      "4x4 Pauli transfer matrix of the noisy pulse channel");

  m.def(
      "average_gate_fidelity",
      [](const ControlPulse& pulse, const Matrix& target, double delta, double tau_c) {
        return average_gate_fidelity(rtn_process_map(pulse, delta, tau_c), target);
      },
      py::arg("pulse"), py::arg("target"), py::arg("delta"), py::arg("tau_c"));

  py::class_<GrapeResult>(m, "GrapeResult")
      .def_readonly("pulse", &GrapeResult::pulse)
      .def_readonly("fidelity", &GrapeResult::fidelity)
      .def_readonly("iterations", &GrapeResult::iterations)
      .def_readonly("fidelity_history", &GrapeResult::fidelity_history)
      .def_readonly("converged", &GrapeResult::converged);

  m.def(
      "optimize_pulse",
      [](double delta, double tau_c, int n_segments, double gate_time, double a_max,
         int max_iters) {
        GrapeConfig config;
        config.delta = delta;
        config.tau_c = tau_c;
        config.n_segments = n_segments;
        config.total_time = gate_time;
        config.a_max = a_max;
        config.max_iters = max_iters;
        return gate_time > 0.0 ? optimize_pulse_multistart(config, default_starts(config))
                               : optimize_gate(config);
      },
      py::arg("delta"), py::arg("tau_c"), py::arg("n_segments") = 64, py::arg("gate_time") = 0.0,
      py::arg("a_max") = 1.0, py::arg("max_iters") = 2000,
      "gradient-ascent NOT-gate optimization; gate_time 0 searches the composite durations");
}
