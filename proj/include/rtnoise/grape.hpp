#pragma once

#include <vector>

#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

/// Gradient-ascent setup for a NOT gate under RTN dephasing. The default
/// gate time is the short-CORPSE duration so optimized pulses compete
/// against the best composite sequence on equal footing.
struct GrapeConfig {
  int n_segments = 64;
  double total_time = 0.0;  // 0 -> 7 pi / (3 a_max)
  double a_max = 1.0;
  double delta = 0.125;
  double tau_c = 5.0;
  Matrix target = pauli(PauliAxis::X);
  int max_iters = 2000;
  double convergence_tol = 1e-10;  // on |dPhi| over convergence_window iters
  int convergence_window = 10;
  std::vector<double> initial_amplitudes;  // empty -> constant pi / total_time

  double gate_time() const;
  void validate() const;
};

struct GrapeResult {
  ControlPulse pulse;
  double fidelity = 0.0;
  int iterations = 0;
  std::vector<double> fidelity_history;  // accepted iterates, non-decreasing
  bool converged = false;
};

/// Average gate fidelity of the amplitude vector under the config's noise.
double grape_fidelity(const std::vector<double>& amplitudes, const GrapeConfig& config);

/// Exact gradient of the fidelity w.r.t. each segment amplitude: forward and
/// adjoint products of the stacked conditional-pair propagators, with each
/// segment derivative from the block-triangular augmented exponential.
std::vector<double> fidelity_gradient(const std::vector<double>& amplitudes,
                                      const GrapeConfig& config);

/// Projected gradient ascent with backtracking line search; amplitudes are
/// clipped to [-a_max, a_max] after every trial step. Deterministic.
GrapeResult optimize_pulse(const GrapeConfig& config);

/// Best of optimize_pulse started from each provided amplitude vector.
GrapeResult optimize_pulse_multistart(const GrapeConfig& config,
                                      const std::vector<std::vector<double>>& starts);

/// Standard starts: stretched pi-pulse plus CORPSE and short CORPSE
/// resampled onto the config's segment grid.
std::vector<std::vector<double>> default_starts(const GrapeConfig& config);

/// Best multistart result over the composite gate times (pi, 7pi/3, 13pi/3
/// over a_max); total_time and initial_amplitudes in the config are ignored.
GrapeResult optimize_gate(const GrapeConfig& config);

}  // namespace rtnoise
