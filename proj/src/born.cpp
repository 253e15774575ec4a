#include "rtnoise/born.hpp"

#include <cmath>
#include <limits>

namespace rtnoise {

double TabulatedKernel::eval_forward(double u) const {
  const double x = u / dt;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= forward.size()) return forward.back();
  const double f = x - static_cast<double>(i);
  return (1.0 - f) * forward[i] + f * forward[i + 1];
}

double TabulatedKernel::eval_backward(double u) const {
  const double x = u / dt;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= backward.size()) return backward.back();
  const double f = x - static_cast<double>(i);
  return (1.0 - f) * backward[i] + f * backward[i + 1];
}

MemoryState evolve_born_exponential(const SystemHamiltonian& h_s, const ControlPulse& pulse,
                                    const Matrix& coupling, const ExponentialKernel& kernel,
                                    const DensityOperator& rho0, double horizon) {
  if (std::abs(rho0.weight() - 1.0) > 1e-9) {
    throw std::invalid_argument("initial state must have unit trace");
  }
  return evolve_born_exponential_raw(h_s, pulse, coupling, kernel, rho0.matrix(), horizon);
}

MemoryState evolve_born_exponential_raw(const SystemHamiltonian& h_s, const ControlPulse& pulse,
                                        const Matrix& coupling, const ExponentialKernel& kernel,
                                        const Matrix& rho0, double horizon) {
  if (kernel.tau_c <= 0.0) throw std::invalid_argument("tau_c must be positive");
  const Eigen::Index d = h_s.dim();
  const Eigen::Index d2 = d * d;
  const Matrix coupling_superop = kernel.g * commutator_superop(coupling);
  const Matrix id2 = Matrix::Identity(d2, d2);

  Eigen::VectorXcd v(2 * d2);
  v.head(d2) = vec(rho0);
  v.tail(d2).setZero();

  for (const auto& piece : constant_segments(pulse, 0.0, horizon)) {
    const Matrix h_superop = commutator_superop(h_s.at(piece.amplitude));
    Matrix gen = Matrix::Zero(2 * d2, 2 * d2);
    gen.topLeftCorner(d2, d2) = h_superop;
    gen.topRightCorner(d2, d2) = coupling_superop;
    gen.bottomLeftCorner(d2, d2) = coupling_superop;
    gen.bottomRightCorner(d2, d2) = h_superop - (2.0 / kernel.tau_c) * id2;
    v = expm(gen * piece.duration) * v;
  }

  MemoryState out;
  out.rho = symmetrized(unvec(v.head(d2), d));
  out.aux = unvec(v.tail(d2), d);
  out.time = horizon;
  return out;
}

std::pair<Matrix, Matrix> split_conditional(const MemoryState& m) {
  return {0.5 * (m.rho + m.aux), 0.5 * (m.rho - m.aux)};
}

namespace {

struct KernelEval {
  double g2;
  std::function<double(double)> forward;
  std::function<double(double)> backward;
  // Unequal real forward/backward tables make the generator non-Hermiticity
  // preserving; the state is then symmetrized without a drift guard.
  double hermiticity_guard;
};

KernelEval make_eval(const CorrelationKernel& kernel) {
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel)) {
    const double tau_c = e->tau_c;
    auto f = [tau_c](double u) { return std::exp(-2.0 * u / tau_c); };
    return {e->g * e->g, f, f, 1e-6};
  }
  const auto& t = std::get<TabulatedKernel>(kernel);
  const double guard = t.forward == t.backward ? 1e-6
                                               : std::numeric_limits<double>::infinity();
  return {t.g * t.g, [&t](double u) { return t.eval_forward(u); },
          [&t](double u) { return t.eval_backward(u); }, guard};
}

/// Interaction-picture run at fixed step; returns the Schroedinger-picture
/// state at the horizon.
Matrix run_general(const SystemHamiltonian& h_s, const ControlPulse& pulse, const Matrix& coupling,
                   const KernelEval& kernel, const Matrix& rho0, double horizon, int n,
                   double cutoff) {
  const Eigen::Index d = h_s.dim();
  const double h = horizon / n;

  // Free propagators at the grid nodes; within a step the control is split
  // at pulse breakpoints so U0 is exact.
  std::vector<Matrix> k_rot(static_cast<std::size_t>(n) + 1);
  Matrix u0 = Matrix::Identity(d, d);
  k_rot[0] = coupling;
  for (int i = 0; i < n; ++i) {
    for (const auto& piece : constant_segments(pulse, i * h, (i + 1) * h)) {
      u0 = expm(-kImag * h_s.at(piece.amplitude) * piece.duration) * u0;
    }
    k_rot[static_cast<std::size_t>(i) + 1] = u0.adjoint() * coupling * u0;
  }

  std::vector<Matrix> hist(static_cast<std::size_t>(n) + 1);
  hist[0] = rho0;

  // Trapezoidal memory sum for the rhs at node i, with the state at node i
  // supplied explicitly (allows the Heun corrector to pass a predictor).
  auto rhs = [&](int i, const Matrix& state_i) -> Matrix {
    Matrix acc = Matrix::Zero(d, d);
    const auto& ki = k_rot[static_cast<std::size_t>(i)];
    int j_min = 0;
    if (cutoff > 0.0) j_min = std::max(0, i - static_cast<int>(cutoff / h));
    for (int j = j_min; j <= i; ++j) {
      const double u = (i - j) * h;
      const double w = (j == j_min || j == i) ? 0.5 : 1.0;
      const auto& kj = k_rot[static_cast<std::size_t>(j)];
      const Matrix& rho_j = (j == i) ? state_i : hist[static_cast<std::size_t>(j)];
      acc += (w * kernel.forward(u)) * commutator(ki, kj * rho_j) -
             (w * kernel.backward(u)) * commutator(ki, rho_j * kj);
    }
    return (-kernel.g2 * h) * acc;
  };

  for (int i = 0; i < n; ++i) {
    const Matrix f_i = rhs(i, hist[static_cast<std::size_t>(i)]);
    const Matrix predictor = hist[static_cast<std::size_t>(i)] + h * f_i;
    const Matrix f_next = rhs(i + 1, predictor);
    hist[static_cast<std::size_t>(i) + 1] =
        symmetrized(hist[static_cast<std::size_t>(i)] + 0.5 * h * (f_i + f_next),
                    kernel.hermiticity_guard);
  }

  return symmetrized(u0 * hist[static_cast<std::size_t>(n)] * u0.adjoint(),
                     kernel.hermiticity_guard);
}

}  // namespace

BornGeneralResult evolve_born_general(const SystemHamiltonian& h_s, const ControlPulse& pulse,
                                      const Matrix& coupling, const CorrelationKernel& kernel,
                                      const DensityOperator& rho0, double horizon,
                                      const BornGeneralOptions& options) {
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  const KernelEval eval = make_eval(kernel);

  int n = options.dt > 0.0 ? std::max(1, static_cast<int>(std::llround(horizon / options.dt)))
                           : 1000;
  Matrix prev =
      run_general(h_s, pulse, coupling, eval, rho0.matrix(), horizon, n, options.history_cutoff);
  for (int r = 0; r < options.max_refinements; ++r) {
    n *= 2;
    Matrix next =
        run_general(h_s, pulse, coupling, eval, rho0.matrix(), horizon, n, options.history_cutoff);
    const double err = trace_distance(prev, next);
    if (err < options.tolerance) {
      return {next, err, horizon / n};
    }
    prev = next;
  }
  throw std::runtime_error("evolve_born_general: quadrature did not converge to tolerance");
}

}  // namespace rtnoise
