#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

/// System Hamiltonian H_s(a) = static_part + a * control_part.
struct SystemHamiltonian {
  Matrix static_part;
  Matrix control_part;

  Matrix at(double amplitude) const { return static_part + amplitude * control_part; }
  Eigen::Index dim() const { return static_part.rows(); }
};

/// Bath autocorrelation C_e(u) = exp(-2|u|/tau_c), forward = backward.
struct ExponentialKernel {
  double g;
  double tau_c;
};

/// Sampled forward/backward correlations on a uniform grid (C(u, 0) and
/// C(0, u) respectively), linearly interpolated.
struct TabulatedKernel {
  double g;
  std::vector<double> forward;
  std::vector<double> backward;
  double dt;

  double eval_forward(double u) const;
  double eval_backward(double u) const;
};

using CorrelationKernel = std::variant<ExponentialKernel, TabulatedKernel>;

/// System state plus the accumulated history integral: the conditional
/// operators of the equivalent RTN picture are rho/2 +- aux/2.
struct MemoryState {
  Matrix rho;
  Matrix aux;
  double time = 0.0;
};

/// Local closure of the exponential-kernel Born equation:
///   d rho/dt = -i [H_s(t), rho] - i g [K, aux]
///   d aux/dt = -(2/tau_c) aux - i [H_s(t), aux] - i g [K, rho],  aux(0) = 0.
/// Exact per-segment exponentials of the stacked 2 d^2 generator.
MemoryState evolve_born_exponential(const SystemHamiltonian& h_s, const ControlPulse& pulse,
                                    const Matrix& coupling, const ExponentialKernel& kernel,
                                    const DensityOperator& rho0, double horizon);

/// Raw-matrix variant for probing the induced linear map.
MemoryState evolve_born_exponential_raw(const SystemHamiltonian& h_s, const ControlPulse& pulse,
                                        const Matrix& coupling, const ExponentialKernel& kernel,
                                        const Matrix& rho0, double horizon);

/// (rho_plus, rho_minus) = (rho + aux)/2, (rho - aux)/2.
std::pair<Matrix, Matrix> split_conditional(const MemoryState& m);

struct BornGeneralOptions {
  double dt = 0.0;          // 0 -> horizon / 1000
  double tolerance = 1e-6;  // trace-distance change allowed under halving dt
  int max_refinements = 4;
  double history_cutoff = 0.0;  // drop history older than this; 0 -> keep all
};

struct BornGeneralResult {
  Matrix rho;
  double achieved_error;  // trace distance between the last two refinements
  double dt;
};

/// History-quadrature solver for the full integro-differential equation with
/// distinct forward/backward kernels, integrated in the interaction picture
/// with trapezoidal memory sums and a Heun corrector. Refines the step until
/// halving it moves the result by less than the tolerance; throws if the
/// refinement budget runs out.
BornGeneralResult evolve_born_general(const SystemHamiltonian& h_s, const ControlPulse& pulse,
                                      const Matrix& coupling, const CorrelationKernel& kernel,
                                      const DensityOperator& rho0, double horizon,
                                      const BornGeneralOptions& options = {});

}  // namespace rtnoise
