#include "rtnoise/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rtnoise {

namespace {

/// exp(-i H dt) with a closed form for qubits (H = c0 I + c . sigma/1).
Matrix unitary_step(const Matrix& h, double dt) {
  if (h.rows() == 2) {
    const Complex c0 = 0.5 * (h(0, 0) + h(1, 1));
    const double nx = h(0, 1).real();
    const double ny = -h(0, 1).imag();
    const double nz = 0.5 * (h(0, 0) - h(1, 1)).real();
    const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
    const double theta = n * dt;
    Matrix u = std::cos(theta) * Matrix::Identity(2, 2);
    if (n > 0.0) {
      const Complex f = -kImag * std::sin(theta) / n;
      u(0, 0) += f * nz;
      u(1, 1) -= f * nz;
      u(0, 1) += f * Complex(nx, -ny);
      u(1, 0) += f * Complex(nx, ny);
    }
    return std::exp(-kImag * c0 * dt) * u;
  }
  return expm(-kImag * h * dt);
}

}  // namespace

Matrix trajectory_propagator(const MarkovNoiseModel& model, const NoiseTrajectory& traj,
                             const ControlPulse& pulse, double horizon) {
  // Merge noise-flip times with pulse breakpoints.
  std::vector<double> cuts{0.0};
  for (const auto& [t, k] : traj.switches) {
    if (t < horizon) cuts.push_back(t);
  }
  double acc = 0.0;
  for (const auto& s : pulse.segments) {
    acc += s.duration;
    if (acc < horizon) cuts.push_back(acc);
  }
  cuts.push_back(horizon);
  std::sort(cuts.begin(), cuts.end());

  Matrix u = Matrix::Identity(model.dim(), model.dim());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double dt = cuts[i + 1] - cuts[i];
    if (dt <= 0.0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const Matrix h = model.hamiltonian(traj.state_at(mid), pulse.amplitude_at(mid));
    u = unitary_step(h, dt) * u;
  }
  return u;
}

McEstimate mc_average_evolution(const MarkovNoiseModel& model, const DensityOperator& rho0,
                                const ControlPulse& pulse, double horizon, int n_traj,
                                std::uint64_t seed) {
  if (n_traj < 2) throw std::invalid_argument("n_traj must be >= 2");
  const Eigen::Index d = model.dim();
  Matrix sum = Matrix::Zero(d, d);
  RealMatrix sum_sq = RealMatrix::Zero(d, d);  // sum of |entry|^2

  for (int i = 0; i < n_traj; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    const NoiseTrajectory traj = sample_trajectory(model, horizon, rng);
    const Matrix u = trajectory_propagator(model, traj, pulse, horizon);
    const Matrix state = u * rho0.matrix() * u.adjoint();
    sum += state;
    sum_sq += state.cwiseAbs2();
  }

  McEstimate est;
  est.n_traj = n_traj;
  est.mean_state = symmetrized(sum / n_traj, 1e-9);
  const RealMatrix variance =
      (sum_sq / n_traj - est.mean_state.cwiseAbs2()).cwiseMax(0.0) * n_traj / (n_traj - 1.0);
  est.std_error = std::sqrt(variance.maxCoeff() / n_traj);
  return est;
}

McFidelity mc_gate_fidelity(const MarkovNoiseModel& model, const ControlPulse& pulse,
                            const Matrix& target, int n_traj, std::uint64_t seed) {
  if (n_traj < 2) throw std::invalid_argument("n_traj must be >= 2");
  constexpr int kBatches = 10;
  const double horizon = pulse.duration();

  Eigen::Matrix4d total = Eigen::Matrix4d::Zero();
  std::vector<Eigen::Matrix4d> batches(kBatches, Eigen::Matrix4d::Zero());
  std::vector<int> batch_counts(kBatches, 0);

  for (int i = 0; i < n_traj; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    const NoiseTrajectory traj = sample_trajectory(model, horizon, rng);
    const Matrix u = trajectory_propagator(model, traj, pulse, horizon);
    const Eigen::Matrix4d ptm = ptm_of_unitary(u).matrix;
    total += ptm;
    const int b = i % kBatches;
    batches[static_cast<std::size_t>(b)] += ptm;
    ++batch_counts[static_cast<std::size_t>(b)];
  }

  McFidelity out;
  out.n_traj = n_traj;
  ProcessMap mean_map;
  mean_map.matrix = total / n_traj;
  out.fidelity = average_gate_fidelity(mean_map, target);

  double phi_sum = 0.0, phi_sq = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    ProcessMap map;
    map.matrix = batches[static_cast<std::size_t>(b)] / batch_counts[static_cast<std::size_t>(b)];
    const double phi = average_gate_fidelity(map, target);
    phi_sum += phi;
    phi_sq += phi * phi;
  }
  const double mean = phi_sum / kBatches;
  const double var = std::max(0.0, phi_sq / kBatches - mean * mean) * kBatches / (kBatches - 1.0);
  out.std_error = std::sqrt(var / kBatches);
  return out;
}

}  // namespace rtnoise
