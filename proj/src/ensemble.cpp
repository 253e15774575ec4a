#include "rtnoise/ensemble.hpp"

#include <cmath>

namespace rtnoise {

namespace {

Eigen::VectorXcd stack(const ConditionalEnsemble& e) {
  const Eigen::Index d2 = e.parts.front().size();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(e.parts.size()) * d2);
  for (std::size_t k = 0; k < e.parts.size(); ++k) {
    v.segment(static_cast<Eigen::Index>(k) * d2, d2) = vec(e.parts[k]);
  }
  return v;
}

void unstack(const Eigen::VectorXcd& v, ConditionalEnsemble& e) {
  const Eigen::Index d = e.parts.front().rows();
  const Eigen::Index d2 = d * d;
  for (std::size_t k = 0; k < e.parts.size(); ++k) {
    e.parts[k] = symmetrized(unvec(v.segment(static_cast<Eigen::Index>(k) * d2, d2), d));
  }
}

}  // namespace

ConditionalEnsemble init_ensemble(const DensityOperator& rho0, const MarkovNoiseModel& model) {
  if (std::abs(rho0.weight() - 1.0) > 1e-9) {
    throw std::invalid_argument("initial state must have unit trace");
  }
  return init_ensemble_raw(rho0.matrix(), model);
}

ConditionalEnsemble init_ensemble_raw(const Matrix& rho0, const MarkovNoiseModel& model) {
  const RealVector p = stationary_distribution(model);
  ConditionalEnsemble e;
  e.parts.reserve(static_cast<std::size_t>(model.n_states()));
  for (int k = 0; k < model.n_states(); ++k) {
    e.parts.push_back(p(k) * rho0);
  }
  return e;
}

Matrix ensemble_generator(const MarkovNoiseModel& model, double amplitude) {
  const int n = model.n_states();
  const Eigen::Index d2 = model.dim() * model.dim();
  Matrix g = Matrix::Zero(n * d2, n * d2);
  const Matrix id2 = Matrix::Identity(d2, d2);
  for (int k = 0; k < n; ++k) {
    g.block(k * d2, k * d2, d2, d2) = commutator_superop(model.hamiltonian(k, amplitude));
    for (int j = 0; j < n; ++j) {
      g.block(k * d2, j * d2, d2, d2) += model.rates(k, j) * id2;
    }
  }
  return g;
}

ConditionalEnsemble evolve_ensemble(const ConditionalEnsemble& e, const MarkovNoiseModel& model,
                                    const ControlPulse& pulse, double t1,
                                    EnsembleBackend backend) {
  if (t1 < e.time) throw std::invalid_argument("evolve_ensemble: non-monotonic time");
  if (backend == EnsembleBackend::Auto) {
    backend = (model.dim() <= 4 && model.n_states() <= 4) ? EnsembleBackend::Exact
                                                          : EnsembleBackend::Rk4;
  }

  ConditionalEnsemble out = e;
  Eigen::VectorXcd v = stack(out);
  const auto pieces = constant_segments(pulse, e.time, t1);

  if (backend == EnsembleBackend::Exact) {
    for (const auto& piece : pieces) {
      v = expm(ensemble_generator(model, piece.amplitude) * piece.duration) * v;
    }
  } else {
    double rate_max = 0.0;
    for (int k = 0; k < model.n_states(); ++k) {
      rate_max = std::max(rate_max, -model.rates(k, k));
    }
    const double h_max = std::min(0.01, rate_max > 0.0 ? 1.0 / (100.0 * rate_max)
                                                       : std::numeric_limits<double>::infinity());
    if (h_max < 1e-12) throw std::runtime_error("evolve_ensemble: step size underflow");
    for (const auto& piece : pieces) {
      const int steps = std::max(1, static_cast<int>(std::ceil(piece.duration / h_max)));
      const double h = piece.duration / steps;
      const Matrix g = ensemble_generator(model, piece.amplitude);
      for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXcd k1 = g * v;
        const Eigen::VectorXcd k2 = g * (v + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = g * (v + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = g * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
  }

  unstack(v, out);
  out.time = t1;
  return out;
}

DensityOperator average_state(const ConditionalEnsemble& e) {
  return DensityOperator(average_state_raw(e));
}

Matrix average_state_raw(const ConditionalEnsemble& e) {
  Matrix sum = e.parts.front();
  for (std::size_t k = 1; k < e.parts.size(); ++k) sum += e.parts[k];
  return sum;
}

}  // namespace rtnoise
