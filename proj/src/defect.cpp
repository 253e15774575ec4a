#include "rtnoise/defect.hpp"

#include <cmath>

namespace rtnoise {

void DefectModel::validate() const {
  if (gamma1 < 0.0 || gamma2 < 0.0) throw std::invalid_argument("rates must be nonnegative");
  if (k_s.rows() != dim() || k_s.cols() != dim()) {
    throw std::invalid_argument("K_s dimension must match H_s");
  }
  if (!is_hermitian(k_s) || !is_hermitian(h_s.static_part) || !is_hermitian(h_s.control_part)) {
    throw std::invalid_argument("H_s and K_s must be Hermitian");
  }
}

std::pair<double, double> detailed_balance_rates(double epsilon, double kT, double gamma_sum) {
  if (kT <= 0.0 || gamma_sum <= 0.0) {
    throw std::invalid_argument("kT and gamma_sum must be positive");
  }
  const double ratio = std::exp(epsilon / kT);  // gamma1 / gamma2
  const double gamma2 = gamma_sum / (1.0 + ratio);
  return {gamma_sum - gamma2, gamma2};
}

namespace {

Matrix dissipator_superop(const Matrix& jump, double rate) {
  const Eigen::Index n = jump.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix jj = jump.adjoint() * jump;
  return rate * (kron(jump.conjugate(), jump) -
                 0.5 * (kron(id, jj) + kron(jj.transpose(), id)));
}

}  // namespace

Matrix defect_liouvillian(const DefectModel& model, double amplitude) {
  model.validate();
  const Eigen::Index d = model.dim();
  const Matrix id_s = Matrix::Identity(d, d);
  const Matrix id_d = Matrix::Identity(2, 2);

  Matrix h = kron(id_d, model.h_s.at(amplitude)) +
             0.5 * model.epsilon * kron(pauli(PauliAxis::Z), id_s) +
             kron(pauli(PauliAxis::Z), model.k_s);

  // sigma^- lowers the defect (|+> -> |->), sigma^+ raises it.
  Matrix lower = Matrix::Zero(2, 2);
  lower(1, 0) = 1.0;
  const Matrix raise = lower.adjoint();

  return commutator_superop(h) + dissipator_superop(kron(lower, id_s), model.gamma1) +
         dissipator_superop(kron(raise, id_s), model.gamma2);
}

Matrix evolve_defect_full(const DefectModel& model, const ControlPulse& pulse,
                          const Matrix& rho_ds0, double horizon) {
  const Eigen::Index full = 2 * model.dim();
  if (rho_ds0.rows() != full || rho_ds0.cols() != full) {
    throw std::invalid_argument("initial state must live on the defect (x) system space");
  }
  Eigen::VectorXcd v = vec(rho_ds0);
  for (const auto& piece : constant_segments(pulse, 0.0, horizon)) {
    v = expm(defect_liouvillian(model, piece.amplitude) * piece.duration) * v;
  }
  return symmetrized(unvec(v, full));
}

BlockState evolve_defect_blocks(const DefectModel& model, const ControlPulse& pulse,
                                const DensityOperator& rho0, double horizon) {
  const double sum = model.gamma1 + model.gamma2;
  if (sum <= 0.0) {
    throw std::invalid_argument(
        "gamma1 + gamma2 = 0: stationary initialization is ambiguous, supply initial blocks");
  }
  const double p_plus = model.gamma2 / sum;
  return evolve_defect_blocks_from(model, pulse, p_plus * rho0.matrix(),
                                   (1.0 - p_plus) * rho0.matrix(), horizon);
}

BlockState evolve_defect_blocks_from(const DefectModel& model, const ControlPulse& pulse,
                                     const Matrix& pp0, const Matrix& mm0, double horizon) {
  model.validate();
  const Eigen::Index d = model.dim();
  const Eigen::Index d2 = d * d;
  const Matrix id2 = Matrix::Identity(d2, d2);

  Eigen::VectorXcd v(2 * d2);
  v.head(d2) = vec(pp0);
  v.tail(d2) = vec(mm0);

  for (const auto& piece : constant_segments(pulse, 0.0, horizon)) {
    Matrix gen = Matrix::Zero(2 * d2, 2 * d2);
    gen.topLeftCorner(d2, d2) =
        commutator_superop(model.h_s.at(piece.amplitude) + model.k_s) - model.gamma1 * id2;
    gen.topRightCorner(d2, d2) = model.gamma2 * id2;
    gen.bottomLeftCorner(d2, d2) = model.gamma1 * id2;
    gen.bottomRightCorner(d2, d2) =
        commutator_superop(model.h_s.at(piece.amplitude) - model.k_s) - model.gamma2 * id2;
    v = expm(gen * piece.duration) * v;
  }

  return {symmetrized(unvec(v.head(d2), d)), symmetrized(unvec(v.tail(d2), d))};
}

Matrix offdiag_block_dynamics(const DefectModel& model, const ControlPulse& pulse,
                              const Matrix& pm0, double horizon) {
  model.validate();
  const Eigen::Index d = model.dim();
  const Eigen::Index d2 = d * d;
  const Matrix id = Matrix::Identity(d, d);
  const Matrix id2 = Matrix::Identity(d2, d2);

  Eigen::VectorXcd v = vec(pm0);
  for (const auto& piece : constant_segments(pulse, 0.0, horizon)) {
    const Matrix anticomm_k =
        -kImag * (kron(id, model.k_s) + kron(model.k_s.transpose(), id));
    const Matrix gen = commutator_superop(model.h_s.at(piece.amplitude)) + anticomm_k +
                       (-kImag * model.epsilon - 0.5 * (model.gamma1 + model.gamma2)) * id2;
    v = expm(gen * piece.duration) * v;
  }
  return unvec(v, d);
}

}  // namespace rtnoise
