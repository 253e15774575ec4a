#include "rtnoise/fidelity.hpp"

#include <array>
#include <cmath>

#include "rtnoise/born.hpp"
#include "rtnoise/defect.hpp"
#include "rtnoise/ensemble.hpp"
#include "rtnoise/markov.hpp"

namespace rtnoise {

namespace {

std::array<Matrix, 4> normalized_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s * pauli(PauliAxis::I), s * pauli(PauliAxis::X), s * pauli(PauliAxis::Y),
          s * pauli(PauliAxis::Z)};
}

}  // namespace

Matrix ProcessMap::apply(const Matrix& rho) const {
  const auto basis = normalized_basis();
  Eigen::Vector4d in;
  for (int i = 0; i < 4; ++i) in(i) = (basis[static_cast<std::size_t>(i)] * rho).trace().real();
  const Eigen::Vector4d out = matrix * in;
  Matrix result = Matrix::Zero(2, 2);
  for (int i = 0; i < 4; ++i) result += out(i) * basis[static_cast<std::size_t>(i)];
  return result;
}

double ProcessMap::trace_preservation_defect() const {
  return std::max({std::abs(matrix(0, 0) - 1.0), std::abs(matrix(0, 1)),
                   std::abs(matrix(0, 2)), std::abs(matrix(0, 3))});
}

ProcessMap process_map(const std::function<Matrix(const Matrix&)>& evolve) {
  const auto basis = normalized_basis();
  ProcessMap map;
  for (int j = 0; j < 4; ++j) {
    const Matrix image = evolve(basis[static_cast<std::size_t>(j)]);
    for (int i = 0; i < 4; ++i) {
      map.matrix(i, j) = (basis[static_cast<std::size_t>(i)] * image).trace().real();
    }
  }
  return map;
}

ProcessMap ptm_of_unitary(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("qubit unitary expected");
  if ((u * u.adjoint() - Matrix::Identity(2, 2)).norm() > 1e-9) {
    throw std::invalid_argument("target must be unitary");
  }
  return process_map([&u](const Matrix& rho) { return Matrix(u * rho * u.adjoint()); });
}

double average_gate_fidelity(const ProcessMap& map, const Matrix& target_unitary) {
  const ProcessMap target = ptm_of_unitary(target_unitary);
  double acc = 0.0;
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j) acc += target.matrix(i, j) * map.matrix(i, j);
  return 0.5 + acc / 6.0;
}

ProcessMap rtn_process_map(const ControlPulse& pulse, double delta, double tau_c,
                           SolverKind solver) {
  pulse.validate();
  const double horizon = pulse.duration();
  switch (solver) {
    case SolverKind::Ensemble: {
      const MarkovNoiseModel model = rtn_model({delta, tau_c});
      return process_map([&](const Matrix& rho0) {
        return average_state_raw(
            evolve_ensemble(init_ensemble_raw(rho0, model), model, pulse, horizon));
      });
    }
    case SolverKind::Born: {
      const SystemHamiltonian h_s{Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
      const Matrix coupling = 0.5 * pauli(PauliAxis::Z);
      const ExponentialKernel kernel{delta, tau_c};
      return process_map([&](const Matrix& rho0) {
        return evolve_born_exponential_raw(h_s, pulse, coupling, kernel, rho0, horizon).rho;
      });
    }
    case SolverKind::Defect: {
      DefectModel model;
      model.h_s = {Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
      model.k_s = 0.5 * delta * pauli(PauliAxis::Z);
      model.gamma1 = model.gamma2 = 1.0 / tau_c;
      return process_map([&](const Matrix& rho0) {
        const BlockState blocks =
            evolve_defect_blocks_from(model, pulse, 0.5 * rho0, 0.5 * rho0, horizon);
        return Matrix(blocks.pp + blocks.mm);
      });
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<SweepRow> fidelity_sweep(
    const std::vector<std::pair<std::string, ControlPulse>>& pulses, double delta,
    const std::vector<double>& tau_c_grid, SolverKind solver) {
  const Matrix target = pauli(PauliAxis::X);
  std::vector<SweepRow> rows;
  rows.reserve(pulses.size() * tau_c_grid.size());
  for (const double tau_c : tau_c_grid) {
    for (const auto& [name, pulse] : pulses) {
      const double phi =
          average_gate_fidelity(rtn_process_map(pulse, delta, tau_c, solver), target);
      rows.push_back({tau_c, name, delta, phi});
    }
  }
  return rows;
}

}  // namespace rtnoise
