#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

/// Pauli transfer matrix of a qubit channel in the normalized basis
/// {I, sigma_x, sigma_y, sigma_z}/sqrt(2). Trace preservation means the
/// first row is (1, 0, 0, 0).
struct ProcessMap {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();

  Matrix apply(const Matrix& rho) const;
  double trace_preservation_defect() const;
};

/// Tomography of any linear qubit evolution: probes the 4 basis elements.
ProcessMap process_map(const std::function<Matrix(const Matrix&)>& evolve);

/// Transfer matrix of conjugation by a 2x2 unitary.
ProcessMap ptm_of_unitary(const Matrix& u);

/// Uniform pure-state average of Tr[U rho0 U^dag E(rho0)]; equals
/// 1/2 + (1/6) sum_ij T_ij R_ij over the traceless block, where T is the
/// target's transfer matrix. Exact for the Haar measure since the integrand
/// is quadratic in the Bloch vector.
double average_gate_fidelity(const ProcessMap& map, const Matrix& target_unitary);

/// Which deterministic master-equation backend realizes the RTN channel.
enum class SolverKind { Ensemble, Born, Defect };

/// Channel of a noisy RTN gate: sigma_x/2 control, noise +-delta sigma_z/2,
/// flip rate 1/tau_c, evolved over the pulse duration.
ProcessMap rtn_process_map(const ControlPulse& pulse, double delta, double tau_c,
                           SolverKind solver = SolverKind::Ensemble);

struct SweepRow {
  double tau_c;
  std::string pulse_name;
  double delta;
  double fidelity;
};

std::vector<SweepRow> fidelity_sweep(const std::vector<std::pair<std::string, ControlPulse>>& pulses,
                                     double delta, const std::vector<double>& tau_c_grid,
                                     SolverKind solver = SolverKind::Ensemble);

}  // namespace rtnoise
