#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

/// Classical N-state Markovian noise. State k contributes the Hamiltonian
/// H_k(a) = a * control + statics[k], with a(t) the shared control amplitude.
/// Column j of `rates` holds the probability flow out of state j:
/// off-diagonals are nonnegative and each column sums to zero.
struct MarkovNoiseModel {
  RealMatrix rates;
  Matrix control;
  std::vector<Matrix> statics;

  int n_states() const { return static_cast<int>(statics.size()); }
  Eigen::Index dim() const { return control.rows(); }
  Matrix hamiltonian(int k, double amplitude) const {
    return amplitude * control + statics[static_cast<std::size_t>(k)];
  }
  void validate() const;
};

/// Single bistable fluctuator coupled along coupling_axis with strength
/// delta. Each directed flip happens at rate 1/tau_c, so the +-1 telegraph
/// signal decorrelates as exp(-2t/tau_c).
struct RtnSpec {
  double delta;
  double tau_c;
  Matrix coupling_axis = 0.5 * pauli(PauliAxis::Z);
};

/// RTN model with H_pm(a) = a*sigma_x/2 +- delta*sigma_z/2 (default axis).
MarkovNoiseModel rtn_model(const RtnSpec& spec);

/// Null space of the rate matrix, normalized to a probability vector.
/// Throws if the zero eigenvalue is not unique (reducible chain).
RealVector stationary_distribution(const MarkovNoiseModel& model);

/// One realization of the noise process: piecewise-constant state path.
struct NoiseTrajectory {
  int initial_state;
  std::vector<std::pair<double, int>> switches;  // (time, new state), increasing times
  double horizon;

  int state_at(double t) const;
};

/// Deterministic per-trajectory RNG stream derived from (seed, stream index),
/// so sampled ensembles are independent of scheduling order.
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream);

  double uniform();  // in (0, 1)
  double exponential(double rate);
  int categorical(const RealVector& weights);

 private:
  std::mt19937_64 gen_;
};

/// Gillespie sampling: initial state from the stationary distribution,
/// exponential dwell times at rate |gamma_kk|.
NoiseTrajectory sample_trajectory(const MarkovNoiseModel& model, double horizon, StreamRng& rng);

}  // namespace rtnoise
