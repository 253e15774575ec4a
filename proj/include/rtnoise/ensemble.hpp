#pragma once

#include <vector>

#include "rtnoise/markov.hpp"
#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

/// Conditional density operators rho_k, one per noise state, each
/// subnormalized to the occupation probability of its state. Their sum is
/// the physical average state.
struct ConditionalEnsemble {
  std::vector<Matrix> parts;
  double time = 0.0;
};

enum class EnsembleBackend { Auto, Exact, Rk4 };

/// rho_k(0) = P_k^stat * rho0.
ConditionalEnsemble init_ensemble(const DensityOperator& rho0, const MarkovNoiseModel& model);

/// Like init_ensemble but for an arbitrary (not necessarily PSD) matrix;
/// used when probing the linear map itself, e.g. for process tomography.
ConditionalEnsemble init_ensemble_raw(const Matrix& rho0, const MarkovNoiseModel& model);

/// Generator of the stacked vectorized conditional system at control
/// amplitude a: d/dt vec(rho_k) = -i[H_k(a), rho_k] + sum_j gamma_kj rho_j.
/// Column-stacking order; block (k, j) of size d^2.
Matrix ensemble_generator(const MarkovNoiseModel& model, double amplitude);

/// Propagate to t1 under the piecewise-constant control. Exact backend
/// exponentiates the (N d^2)-dimensional generator per constant segment;
/// RK4 uses a fixed step h <= min(0.01, tau_min/100).
ConditionalEnsemble evolve_ensemble(const ConditionalEnsemble& e, const MarkovNoiseModel& model,
                                    const ControlPulse& pulse, double t1,
                                    EnsembleBackend backend = EnsembleBackend::Auto);

/// Physical average state: sum of the conditional parts.
DensityOperator average_state(const ConditionalEnsemble& e);

/// Same sum without density-operator validation (for raw linear-map probes).
Matrix average_state_raw(const ConditionalEnsemble& e);

}  // namespace rtnoise
