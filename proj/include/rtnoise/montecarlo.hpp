#pragma once

#include <cstdint>

#include "rtnoise/fidelity.hpp"
#include "rtnoise/markov.hpp"
#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

struct McEstimate {
  Matrix mean_state;
  double std_error = 0.0;  // max entrywise standard error of the mean
  int n_traj = 0;
};

/// Stochastic-trajectory average: each sampled noise path evolves unitarily
/// with the Hamiltonian switching at noise flips and pulse breakpoints.
/// Deterministic for a fixed seed; trajectory i always uses stream i.
McEstimate mc_average_evolution(const MarkovNoiseModel& model, const DensityOperator& rho0,
                                const ControlPulse& pulse, double horizon, int n_traj,
                                std::uint64_t seed);

struct McFidelity {
  double fidelity = 0.0;
  double std_error = 0.0;  // from 10 trajectory batches
  int n_traj = 0;
};

/// Fidelity of the trajectory-averaged channel against a target unitary.
McFidelity mc_gate_fidelity(const MarkovNoiseModel& model, const ControlPulse& pulse,
                            const Matrix& target, int n_traj, std::uint64_t seed);

/// Piecewise-unitary propagator of a single noise realization.
Matrix trajectory_propagator(const MarkovNoiseModel& model, const NoiseTrajectory& traj,
                             const ControlPulse& pulse, double horizon);

}  // namespace rtnoise
