#pragma once

#include <utility>

#include "rtnoise/born.hpp"
#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

/// System coupled to a bistable defect that relaxes through a Markovian
/// bath: tunneling-out rate gamma1, tunneling-in rate gamma2, defect
/// splitting epsilon. Tensor ordering is defect (x) system throughout, so
/// index blocks of the joint state are (++, +-; -+, --) in the defect basis.
struct DefectModel {
  SystemHamiltonian h_s;
  Matrix k_s;
  double epsilon = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  Eigen::Index dim() const { return h_s.dim(); }
  void validate() const;
};

/// Rates with ratio gamma1/gamma2 = exp(epsilon / kT) and the given sum.
std::pair<double, double> detailed_balance_rates(double epsilon, double kT, double gamma_sum);

/// Full Lindblad evolution on the defect (x) system space; exact vectorized
/// exponential per constant control segment.
Matrix evolve_defect_full(const DefectModel& model, const ControlPulse& pulse,
                          const Matrix& rho_ds0, double horizon);

/// Liouvillian of the full equation at fixed control amplitude.
Matrix defect_liouvillian(const DefectModel& model, double amplitude);

struct BlockState {
  Matrix pp;
  Matrix mm;
};

/// Diagonal-block equations only (dimension 2 d^2): the blocks see
/// H_s +- K_s and exchange weight at the tunneling rates. Initial split is
/// the defect's stationary populations; throws when gamma1 + gamma2 = 0
/// since no stationary split exists then.
BlockState evolve_defect_blocks(const DefectModel& model, const ControlPulse& pulse,
                                const DensityOperator& rho0, double horizon);

/// Same propagation from explicitly given initial blocks.
BlockState evolve_defect_blocks_from(const DefectModel& model, const ControlPulse& pulse,
                                     const Matrix& pp0, const Matrix& mm0, double horizon);

/// Closed linear evolution of the off-diagonal block rho_{+-}: commutator
/// with H_s, anticommutator with K_s, phase -i*epsilon and damping at
/// (gamma1 + gamma2)/2.
Matrix offdiag_block_dynamics(const DefectModel& model, const ControlPulse& pulse,
                              const Matrix& pm0, double horizon);

}  // namespace rtnoise
