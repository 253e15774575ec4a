#include "rtnoise/markov.hpp"

#include <cmath>

namespace rtnoise {

void MarkovNoiseModel::validate() const {
  const int n = n_states();
  if (n < 1) throw std::invalid_argument("noise model needs at least one state");
  if (rates.rows() != n || rates.cols() != n) {
    throw std::invalid_argument("rate matrix shape must match state count");
  }
  for (int j = 0; j < n; ++j) {
    double col_sum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k != j && rates(k, j) < 0.0) {
        throw std::invalid_argument("off-diagonal rates must be nonnegative");
      }
      col_sum += rates(k, j);
    }
    if (std::abs(col_sum) > 1e-12) {
      throw std::invalid_argument("rate matrix columns must sum to zero");
    }
  }
  for (const auto& h : statics) {
    if (h.rows() != dim() || h.cols() != dim()) {
      throw std::invalid_argument("static Hamiltonian dimension mismatch");
    }
    if (!is_hermitian(h)) throw std::invalid_argument("static Hamiltonian must be Hermitian");
  }
  if (!is_hermitian(control)) throw std::invalid_argument("control operator must be Hermitian");
}

MarkovNoiseModel rtn_model(const RtnSpec& spec) {
  if (spec.tau_c <= 0.0) throw std::invalid_argument("tau_c must be positive");
  if (spec.delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  const double r = 1.0 / spec.tau_c;
  MarkovNoiseModel m;
  m.rates = RealMatrix(2, 2);
  m.rates << -r, r, r, -r;
  m.control = 0.5 * pauli(PauliAxis::X);
  m.statics = {spec.delta * spec.coupling_axis, -spec.delta * spec.coupling_axis};
  m.validate();
  return m;
}

RealVector stationary_distribution(const MarkovNoiseModel& model) {
  model.validate();
  const int n = model.n_states();
  if (n == 1) return RealVector::Ones(1);

  Eigen::JacobiSVD<RealMatrix> svd(model.rates, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv(0), 1.0);
  int null_dim = 0;
  for (int i = 0; i < n; ++i) {
    if (sv(i) < 1e-10 * scale) ++null_dim;
  }
  if (null_dim != 1) {
    throw std::runtime_error("rate matrix has a degenerate null space (reducible chain)");
  }
  RealVector p = svd.matrixV().col(n - 1);
  if (p.sum() < 0.0) p = -p;
  if (p.minCoeff() < -1e-10) {
    throw std::runtime_error("stationary vector has negative entries");
  }
  p = p.cwiseMax(0.0);
  return p / p.sum();
}

int NoiseTrajectory::state_at(double t) const {
  int s = initial_state;
  for (const auto& [tau, k] : switches) {
    if (tau > t) break;
    s = k;
  }
  return s;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

StreamRng::StreamRng(std::uint64_t master_seed, std::uint64_t stream)
    : gen_(splitmix64(splitmix64(master_seed) ^ splitmix64(~stream))) {}

double StreamRng::uniform() {
  // 53-bit mantissa, shifted into (0, 1); avoids distribution objects whose
  // output is implementation-defined.
  const std::uint64_t bits = gen_() >> 11;
  double u = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  return u;
}

double StreamRng::exponential(double rate) {
  return -std::log(uniform()) / rate;
}

int StreamRng::categorical(const RealVector& weights) {
  const double total = weights.sum();
  double u = uniform() * total;
  for (int i = 0; i < weights.size(); ++i) {
    u -= weights(i);
    if (u <= 0.0) return i;
  }
  return static_cast<int>(weights.size()) - 1;
}

NoiseTrajectory sample_trajectory(const MarkovNoiseModel& model, double horizon, StreamRng& rng) {
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  const RealVector p_stat = stationary_distribution(model);
  NoiseTrajectory traj;
  traj.horizon = horizon;
  traj.initial_state = rng.categorical(p_stat);

  int state = traj.initial_state;
  double t = 0.0;
  while (true) {
    const double exit_rate = -model.rates(state, state);
    if (exit_rate <= 0.0) break;  // absorbing state
    t += rng.exponential(exit_rate);
    if (t >= horizon) break;
    RealVector w = model.rates.col(state);
    w(state) = 0.0;
    state = rng.categorical(w);
    traj.switches.emplace_back(t, state);
  }
  return traj;
}

}  // namespace rtnoise
