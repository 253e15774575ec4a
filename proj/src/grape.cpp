#include "rtnoise/grape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rtnoise/ensemble.hpp"
#include "rtnoise/fidelity.hpp"
#include "rtnoise/markov.hpp"

namespace rtnoise {

double GrapeConfig::gate_time() const {
  return total_time > 0.0 ? total_time : 7.0 * std::numbers::pi / (3.0 * a_max);
}

void GrapeConfig::validate() const {
  if (n_segments < 1) throw std::invalid_argument("n_segments must be >= 1");
  if (a_max <= 0.0) throw std::invalid_argument("a_max must be positive");
  if (tau_c <= 0.0) throw std::invalid_argument("tau_c must be positive");
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  if (!initial_amplitudes.empty() &&
      initial_amplitudes.size() != static_cast<std::size_t>(n_segments)) {
    throw std::invalid_argument("initial_amplitudes length must equal n_segments");
  }
}

namespace {

constexpr int kDim = 8;  // two conditional 2x2 operators, vectorized

struct Problem {
  Matrix drift;    // generator at zero control
  Matrix control;  // generator derivative w.r.t. the amplitude
  Matrix weight;   // Phi = 1/2 + Re Tr[M * weight] for the full propagator M
  double h;        // segment duration
};

Problem build_problem(const GrapeConfig& config) {
  Problem p;
  const MarkovNoiseModel model = rtn_model({config.delta, config.tau_c});
  p.drift = ensemble_generator(model, 0.0);
  p.control = ensemble_generator(model, 1.0) - p.drift;
  p.h = config.gate_time() / config.n_segments;

  // Fidelity is linear in the stacked propagator M: each transfer-matrix
  // entry is w_i^dag M u_j with u the stationary-split input and w the
  // block-summing output functional.
  const ProcessMap target = ptm_of_unitary(config.target);
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<Matrix, 3> basis = {s * pauli(PauliAxis::X), s * pauli(PauliAxis::Y),
                                       s * pauli(PauliAxis::Z)};
  p.weight = Matrix::Zero(kDim, kDim);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXcd u(kDim), w(kDim);
      u << 0.5 * vec(basis[static_cast<std::size_t>(j)]),
          0.5 * vec(basis[static_cast<std::size_t>(j)]);
      w << vec(basis[static_cast<std::size_t>(i)]), vec(basis[static_cast<std::size_t>(i)]);
      p.weight += (target.matrix(i + 1, j + 1) / 6.0) * u * w.adjoint();
    }
  }
  return p;
}

Matrix segment_propagator(const Problem& p, double a) {
  return expm((p.drift + a * p.control) * p.h);
}

/// Propagator and its amplitude derivative via the augmented exponential.
std::pair<Matrix, Matrix> segment_propagator_and_derivative(const Problem& p, double a) {
  Matrix aug = Matrix::Zero(2 * kDim, 2 * kDim);
  const Matrix gen = (p.drift + a * p.control) * p.h;
  aug.topLeftCorner(kDim, kDim) = gen;
  aug.bottomRightCorner(kDim, kDim) = gen;
  aug.topRightCorner(kDim, kDim) = p.control * p.h;
  const Matrix e = expm(aug);
  return {e.topLeftCorner(kDim, kDim), e.topRightCorner(kDim, kDim)};
}

double fidelity_of(const Problem& p, const std::vector<double>& amps) {
  Matrix m = Matrix::Identity(kDim, kDim);
  for (const double a : amps) m = segment_propagator(p, a) * m;
  return 0.5 + (m * p.weight).trace().real();
}

std::vector<double> gradient_of(const Problem& p, const std::vector<double>& amps,
                                double* fidelity_out) {
  const int n = static_cast<int>(amps.size());
  std::vector<Matrix> props(static_cast<std::size_t>(n)), derivs(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    auto [prop, deriv] = segment_propagator_and_derivative(p, amps[static_cast<std::size_t>(s)]);
    props[static_cast<std::size_t>(s)] = std::move(prop);
    derivs[static_cast<std::size_t>(s)] = std::move(deriv);
  }

  // prefix[s] = M_s ... M_1, suffix[s] = M_n ... M_{s+1}
  std::vector<Matrix> prefix(static_cast<std::size_t>(n) + 1), suffix(static_cast<std::size_t>(n) + 1);
  prefix[0] = Matrix::Identity(kDim, kDim);
  for (int s = 0; s < n; ++s) {
    prefix[static_cast<std::size_t>(s) + 1] = props[static_cast<std::size_t>(s)] * prefix[static_cast<std::size_t>(s)];
  }
  suffix[static_cast<std::size_t>(n)] = Matrix::Identity(kDim, kDim);
  for (int s = n - 1; s >= 0; --s) {
    suffix[static_cast<std::size_t>(s)] = suffix[static_cast<std::size_t>(s) + 1] * props[static_cast<std::size_t>(s)];
  }
  if (fidelity_out != nullptr) {
    *fidelity_out = 0.5 + (prefix[static_cast<std::size_t>(n)] * p.weight).trace().real();
  }

  std::vector<double> grad(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const Matrix around =
        prefix[static_cast<std::size_t>(s)] * p.weight * suffix[static_cast<std::size_t>(s) + 1];
    grad[static_cast<std::size_t>(s)] = (derivs[static_cast<std::size_t>(s)] * around).trace().real();
  }
  return grad;
}

std::vector<double> initial_amps(const GrapeConfig& config) {
  if (!config.initial_amplitudes.empty()) return config.initial_amplitudes;
  return std::vector<double>(static_cast<std::size_t>(config.n_segments),
                             std::numbers::pi / config.gate_time());
}

ControlPulse make_pulse(const GrapeConfig& config, const std::vector<double>& amps) {
  ControlPulse pulse;
  pulse.a_max = config.a_max;
  const double h = config.gate_time() / config.n_segments;
  for (const double a : amps) pulse.segments.push_back({h, a});
  return pulse;
}

}  // namespace

double grape_fidelity(const std::vector<double>& amplitudes, const GrapeConfig& config) {
  config.validate();
  return fidelity_of(build_problem(config), amplitudes);
}

std::vector<double> fidelity_gradient(const std::vector<double>& amplitudes,
                                      const GrapeConfig& config) {
  config.validate();
  return gradient_of(build_problem(config), amplitudes, nullptr);
}

GrapeResult optimize_pulse(const GrapeConfig& config) {
  config.validate();
  const Problem problem = build_problem(config);
  std::vector<double> amps = initial_amps(config);
  for (double& a : amps) a = std::clamp(a, -config.a_max, config.a_max);

  double phi = 0.0;
  std::vector<double> grad = gradient_of(problem, amps, &phi);

  GrapeResult result;
  result.fidelity_history.push_back(phi);

  double step = 1.0;
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    // Backtracking line search on the projected step.
    bool accepted = false;
    while (step > 1e-14) {
      std::vector<double> trial = amps;
      double directional = 0.0;
      for (std::size_t s = 0; s < trial.size(); ++s) {
        trial[s] = std::clamp(trial[s] + step * grad[s], -config.a_max, config.a_max);
        directional += grad[s] * (trial[s] - amps[s]);
      }
      const double phi_trial = fidelity_of(problem, trial);
      if (phi_trial >= phi + 1e-4 * directional && phi_trial > phi) {
        amps = std::move(trial);
        phi = phi_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent direction at resolvable step sizes
    result.fidelity_history.push_back(phi);
    step = std::min(step * 2.0, 1e6);
    grad = gradient_of(problem, amps, nullptr);

    const auto& hist = result.fidelity_history;
    const std::size_t window = static_cast<std::size_t>(config.convergence_window);
    if (hist.size() > window &&
        hist.back() - hist[hist.size() - 1 - window] < config.convergence_tol) {
      result.converged = true;
      break;
    }
  }

  result.pulse = make_pulse(config, amps);
  result.fidelity = phi;
  result.iterations = iter;
  if (!result.converged && iter < config.max_iters) {
    result.converged = true;  // line-search stall: gradient no longer ascends
  }
  return result;
}

GrapeResult optimize_pulse_multistart(const GrapeConfig& config,
                                      const std::vector<std::vector<double>>& starts) {
  GrapeResult best;
  best.fidelity = -1.0;
  for (const auto& start : starts) {
    GrapeConfig c = config;
    c.initial_amplitudes = start;
    GrapeResult r = optimize_pulse(c);
    if (r.fidelity > best.fidelity) best = std::move(r);
  }
  return best;
}

GrapeResult optimize_gate(const GrapeConfig& base) {
  // The best gate time depends on the noise regime: fast noise rewards the
  // shortest gate, quasistatic noise rewards the longer self-correcting
  // sequences. Search the composite durations, seeding each with the
  // constant pulse plus whichever composite natively fits that duration.
  const double pi = std::numbers::pi;
  GrapeResult best;
  best.fidelity = -1.0;
  for (const double t : {pi / base.a_max, 7.0 * pi / (3.0 * base.a_max),
                         13.0 * pi / (3.0 * base.a_max)}) {
    GrapeConfig config = base;
    config.total_time = t;
    config.initial_amplitudes.clear();

    std::vector<std::vector<double>> starts;
    starts.push_back(initial_amps(config));
    for (const ControlPulse& composite :
         {corpse_not(config.a_max), short_corpse_not(config.a_max)}) {
      if (std::abs(composite.duration() - t) > 1e-9 * t) continue;
      const ControlPulse grid = resampled(composite, config.n_segments, t);
      std::vector<double> amps;
      for (const auto& seg : grid.segments) amps.push_back(seg.amplitude);
      starts.push_back(std::move(amps));
    }

    GrapeResult r = optimize_pulse_multistart(config, starts);
    if (r.fidelity > best.fidelity) best = std::move(r);
  }
  return best;
}

std::vector<std::vector<double>> default_starts(const GrapeConfig& config) {
  const double t = config.gate_time();
  std::vector<std::vector<double>> starts;
  starts.push_back(initial_amps(config));
  for (const ControlPulse& composite :
       {corpse_not(config.a_max), short_corpse_not(config.a_max)}) {
    // Stretch the composite onto the gate time, preserving the shape; areas
    // rescale but gradient ascent recovers the lost rotation angle.
    ControlPulse scaled = composite;
    const double ratio = t / composite.duration();
    for (auto& seg : scaled.segments) seg.duration *= ratio;
    const ControlPulse grid = resampled(scaled, config.n_segments, t);
    std::vector<double> amps;
    for (const auto& seg : grid.segments) amps.push_back(seg.amplitude);
    starts.push_back(std::move(amps));
  }
  return starts;
}

}  // namespace rtnoise
