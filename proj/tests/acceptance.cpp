// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier checks parallelize over independent grid cells.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstring>
#include <iomanip>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "rtnoise/born.hpp"
#include "rtnoise/defect.hpp"
#include "rtnoise/ensemble.hpp"
#include "rtnoise/fidelity.hpp"
#include "rtnoise/grape.hpp"
#include "rtnoise/montecarlo.hpp"

using namespace rtnoise;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  static auto last = std::chrono::steady_clock::now();
  const auto now = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(now - last).count();
  last = now;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what << " ["
            << std::fixed << std::setprecision(1) << seconds << "s]\n"
            << std::defaultfloat << std::setprecision(6);
  std::cout.flush();
  if (!pass) ++failures;
}

Matrix random_hermitian(std::mt19937_64& gen, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(dist(gen), dist(gen));
  return scale * 0.5 * (m + m.adjoint());
}

DensityOperator random_density(std::mt19937_64& gen) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(dist(gen), dist(gen));
  Matrix rho = m * m.adjoint();
  rho /= rho.trace();
  return DensityOperator(0.5 * (rho + rho.adjoint()));
}

ControlPulse random_pulse(std::mt19937_64& gen, int n_segments, double total_time) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ControlPulse pulse;
  pulse.a_max = 1.0;
  for (int i = 0; i < n_segments; ++i) pulse.segments.push_back({total_time / n_segments, dist(gen)});
  return pulse;
}

// --- criterion 1: memory-kernel vs RTN-ensemble equivalence -----------------

void criterion_equivalence_born() {
  std::mt19937_64 gen(20260823);
  std::uniform_real_distribution<double> g_dist(0.0, 0.5);
  std::uniform_real_distribution<double> tau_dist(0.5, 50.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix coupling = random_hermitian(gen, 2);
    const SystemHamiltonian h_s{random_hermitian(gen, 2, 0.3), 0.5 * pauli(PauliAxis::X)};
    const double g = g_dist(gen), tau_c = tau_dist(gen);
    const ControlPulse pulse = random_pulse(gen, 8, 10.0);
    const DensityOperator rho0 = random_density(gen);

    const MemoryState m = evolve_born_exponential(h_s, pulse, coupling, {g, tau_c}, rho0, 10.0);

    MarkovNoiseModel mirror;
    mirror.rates = RealMatrix(2, 2);
    mirror.rates << -1.0 / tau_c, 1.0 / tau_c, 1.0 / tau_c, -1.0 / tau_c;
    mirror.control = h_s.control_part;
    mirror.statics = {h_s.static_part + g * coupling, h_s.static_part - g * coupling};
    const Matrix avg =
        average_state_raw(evolve_ensemble(init_ensemble(rho0, mirror), mirror, pulse, 10.0));
    worst = std::max(worst, trace_distance(m.rho, avg));
  }
  std::ostringstream msg;
  msg << "Born memory kernel == RTN ensemble on 20 random configs (worst " << worst
      << ", tol 1e-7)";
  report(1, worst <= 1e-7, msg.str());
}

// --- criterion 2: Lindblad block decoupling and RTN correspondence ----------

void criterion_equivalence_defect() {
  std::mt19937_64 gen(77001);
  const std::vector<double> deltas{0.05, 0.1, 0.15, 0.2, 0.25};
  const std::vector<double> taus{0.5, 2.0, 5.0, 20.0, 50.0};
  const ControlPulse pulse = random_pulse(gen, 4, 6.0);
  const DensityOperator rho0 = random_density(gen);

  double worst_blocks = 0.0, worst_rtn = 0.0;
  for (const double delta : deltas) {
    for (const double tau_c : taus) {
      DefectModel model;
      model.h_s = {Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
      model.k_s = 0.5 * delta * pauli(PauliAxis::Z);
      model.gamma1 = model.gamma2 = 1.0 / tau_c;

      Matrix joint0 = Matrix::Zero(4, 4);
      joint0.topLeftCorner(2, 2) = 0.5 * rho0.matrix();
      joint0.bottomRightCorner(2, 2) = 0.5 * rho0.matrix();
      const Matrix joint = evolve_defect_full(model, pulse, joint0, 6.0);
      const BlockState blocks = evolve_defect_blocks(model, pulse, rho0, 6.0);
      worst_blocks = std::max(
          worst_blocks, trace_distance(joint.topLeftCorner(2, 2) + joint.bottomRightCorner(2, 2),
                                       blocks.pp + blocks.mm));

      const MarkovNoiseModel rtn = rtn_model({delta, tau_c});
      const ConditionalEnsemble e = evolve_ensemble(init_ensemble(rho0, rtn), rtn, pulse, 6.0);
      worst_rtn = std::max(worst_rtn, trace_distance(blocks.pp + blocks.mm, average_state_raw(e)));
    }
  }
  std::ostringstream msg;
  msg << "Lindblad blocks: Tr_d(full) vs blocks worst " << worst_blocks << ", blocks vs RTN worst "
      << worst_rtn << " (tol 1e-10)";
  report(2, worst_blocks <= 1e-10 && worst_rtn <= 1e-10, msg.str());
}

// --- criterion 3: dephasing closed form --------------------------------------

void criterion_dephasing() {
  double worst = 0.0;
  for (const double product : {0.05, 0.125, 0.5, 2.0}) {
    const double tau_c = 4.0;
    const double delta = product / tau_c;
    const MarkovNoiseModel rtn = rtn_model({delta, tau_c});
    const DensityOperator rho0 = from_bloch(Eigen::Vector3d(1, 0, 0));
    for (const double t : {1.0, 4.0, 12.0}) {
      const ControlPulse quiet = {{{t, 0.0}}, 1.0};
      const ConditionalEnsemble e = evolve_ensemble(init_ensemble(rho0, rtn), rtn, quiet, t,
                                                    EnsembleBackend::Exact);
      const Complex c = average_state_raw(e)(0, 1) / rho0.matrix()(0, 1);
      const Complex w = std::sqrt(Complex(1.0 / (tau_c * tau_c) - delta * delta, 0.0));
      const Complex expected =
          std::exp(-t / tau_c) * (std::cosh(w * t) + std::sinh(w * t) / (w * tau_c));
      worst = std::max(worst, std::abs(c - expected));
    }
  }
  std::ostringstream msg;
  msg << "RTN dephasing closed form on both branches (worst " << worst << ", tol 1e-8)";
  report(3, worst <= 1e-8, msg.str());
}

// --- criterion 4: Monte Carlo consistency ------------------------------------

void criterion_montecarlo() {
  const std::vector<double> deltas{0.05, 0.1, 0.15, 0.2, 0.25};
  const std::vector<double> taus{0.5, 2.0, 5.0, 20.0, 50.0};
  const int n_traj = 100000;
  const ControlPulse pulse = pi_pulse(1.0);
  const DensityOperator rho0 = from_bloch(Eigen::Vector3d(1, 0, 0));
  const Matrix target = pauli(PauliAxis::X);

  struct Cell {
    double state_z, fid_z, worst_se;
  };
  std::vector<std::future<Cell>> jobs;
  for (const double delta : deltas) {
    for (const double tau_c : taus) {
      jobs.push_back(std::async(std::launch::async, [=]() {
        const MarkovNoiseModel rtn = rtn_model({delta, tau_c});
        const McEstimate est =
            mc_average_evolution(rtn, rho0, pulse, pulse.duration(), n_traj, 424242);
        const Matrix det = average_state_raw(
            evolve_ensemble(init_ensemble(rho0, rtn), rtn, pulse, pulse.duration()));
        const double state_z =
            (est.mean_state - det).cwiseAbs().maxCoeff() / std::max(est.std_error, 1e-15);

        const McFidelity mc = mc_gate_fidelity(rtn, pulse, target, n_traj, 87654);
        const double exact =
            average_gate_fidelity(rtn_process_map(pulse, delta, tau_c), target);
        const double fid_z = std::abs(mc.fidelity - exact) / std::max(mc.std_error, 1e-15);
        return Cell{state_z, fid_z, std::max(est.std_error, mc.std_error)};
      }));
    }
  }
  double worst_z = 0.0, worst_se = 0.0;
  for (auto& job : jobs) {
    const Cell c = job.get();
    worst_z = std::max({worst_z, c.state_z, c.fid_z});
    worst_se = std::max(worst_se, c.worst_se);
  }
  std::ostringstream msg;
  msg << "MC (1e5 traj, 5x5 grid) within 3 sigma of the master equations (worst z " << worst_z
      << ", worst se " << worst_se << ")";
  report(4, worst_z <= 3.0 && worst_se <= 2e-3, msg.str());
}

// --- criterion 5: gradient correctness ---------------------------------------

void criterion_gradient() {
  std::mt19937_64 gen(5150);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GrapeConfig config;
  config.n_segments = 64;
  config.delta = 0.2;
  config.tau_c = 10.0;

  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> amps(64);
    for (double& a : amps) a = dist(gen);
    const std::vector<double> grad = fidelity_gradient(amps, config);
    const double h = 1e-6;
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < amps.size(); ++s) {
      std::vector<double> up = amps, down = amps;
      up[s] += h;
      down[s] -= h;
      const double fd = (grape_fidelity(up, config) - grape_fidelity(down, config)) / (2 * h);
      num += (grad[s] - fd) * (grad[s] - fd);
      den += fd * fd;
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  std::ostringstream msg;
  msg << "adjoint gradient vs central differences on 10 random 64-segment pulses (worst rel "
      << worst << ", tol 1e-6)";
  report(5, worst <= 1e-6, msg.str());
}

// --- criteria 6-8: figure reproduction ---------------------------------------

struct SweepPoint {
  double tau_c;
  double phi_pi, phi_corpse, phi_short, phi_opt;
  ControlPulse optimized;
};

std::vector<SweepPoint> run_panel(double delta, std::vector<double> taus) {
  std::vector<std::future<SweepPoint>> jobs;
  for (const double tau_c : taus) {
    jobs.push_back(std::async(std::launch::async, [=]() {
      const Matrix target = pauli(PauliAxis::X);
      SweepPoint p;
      p.tau_c = tau_c;
      p.phi_pi = average_gate_fidelity(rtn_process_map(pi_pulse(1.0), delta, tau_c), target);
      p.phi_corpse =
          average_gate_fidelity(rtn_process_map(corpse_not(1.0), delta, tau_c), target);
      p.phi_short =
          average_gate_fidelity(rtn_process_map(short_corpse_not(1.0), delta, tau_c), target);
      GrapeConfig config;
      config.delta = delta;
      config.tau_c = tau_c;
      config.max_iters = 1500;
      const GrapeResult r = optimize_gate(config);
      p.phi_opt = r.fidelity;
      p.optimized = r.pulse;
      return p;
    }));
  }
  std::vector<SweepPoint> out;
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

void criterion_fig1a_fig2(const std::vector<SweepPoint>& panel) {
  bool opt_dominates = true, short_beats_pi = true, narrowing = true;
  double worst_gap = 0.0;
  for (const auto& p : panel) {
    const double best_composite = std::max({p.phi_pi, p.phi_corpse, p.phi_short});
    worst_gap = std::min(worst_gap, p.phi_opt - best_composite);
    if (p.phi_opt < best_composite - 1e-4) opt_dominates = false;
    if (p.tau_c >= 20.0 && p.phi_short <= p.phi_pi) short_beats_pi = false;
    if (p.tau_c <= 0.1 + 1e-12) {
      // The composite tolerance is 5e-3 rather than 1e-3: the motional
      // narrowing error rate delta^2 tau_c / 2 over the CORPSE duration
      // 13 pi / 3 alone costs ~3.5e-3 of fidelity at these parameters.
      if (p.phi_pi < 1.0 - 1e-3 || p.phi_opt < 1.0 - 1e-3) narrowing = false;
      if (p.phi_corpse < 1.0 - 5e-3 || p.phi_short < 1.0 - 5e-3) narrowing = false;
    }
  }
  std::ostringstream msg;
  msg << "Fig 1(a) orderings at delta=0.125 (worst opt-composite gap " << worst_gap << ")";
  report(6, opt_dominates && short_beats_pi && narrowing, msg.str());
}

void criterion_fig1b(const std::vector<SweepPoint>& panel) {
  double min_margin = 1.0;
  for (const auto& p : panel) {
    min_margin = std::min(min_margin, p.phi_opt - std::max({p.phi_pi, p.phi_corpse, p.phi_short}));
  }
  std::ostringstream msg;
  msg << "Fig 1(b) delta=0.25: optimized strictly above every composite (min margin "
      << min_margin << ")";
  report(7, min_margin > 0.0, msg.str());
}

void criterion_fig2_morphology(const std::vector<SweepPoint>& panel) {
  ControlPulse at5, at50;
  for (const auto& p : panel) {
    if (p.tau_c == 5.0) at5 = p.optimized;
    if (p.tau_c == 50.0) at50 = p.optimized;
  }

  // Round-trip through the CSV emission format before counting lobes.
  auto through_csv = [](const ControlPulse& pulse, const std::string& path) {
    {
      std::ofstream out(path);
      out << "t_start,amplitude\n";
      double t = 0.0;
      for (const auto& s : pulse.segments) {
        out << t << "," << s.amplitude << "\n";
        t += s.duration;
      }
    }
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    ControlPulse back;
    back.a_max = pulse.a_max;
    double prev_t = 0.0;
    bool first = true;
    double prev_a = 0.0;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      const double t = std::stod(line.substr(0, comma));
      const double a = std::stod(line.substr(comma + 1));
      if (!first) back.segments.push_back({t - prev_t, prev_a});
      prev_t = t;
      prev_a = a;
      first = false;
    }
    back.segments.push_back({pulse.duration() - prev_t, prev_a});
    return back;
  };

  const int changes5 = sign_changes(through_csv(at5, "acceptance_pulse_tau5.csv"));
  const int changes50 = sign_changes(through_csv(at50, "acceptance_pulse_tau50.csv"));
  std::ostringstream msg;
  msg << "Fig 2 morphology: sign changes " << changes5 << " at tau_c=5 (<=1), " << changes50
      << " at tau_c=50 (>=2)";
  report(8, changes5 <= 1 && changes50 >= 2, msg.str());
}

// --- criterion 9: composite-pulse sanity --------------------------------------

void criterion_composites() {
  const Matrix target = pauli(PauliAxis::X);
  bool ok = true;
  for (const ControlPulse& pulse : {pi_pulse(1.0), corpse_not(1.0), short_corpse_not(1.0)}) {
    const double phi = average_gate_fidelity(rtn_process_map(pulse, 0.0, 1.0), target);
    if (std::abs(phi - 1.0) > 1e-10) ok = false;

    Matrix u = Matrix::Identity(2, 2);
    for (const auto& s : pulse.segments) {
      u = expm(-kImag * 0.5 * s.amplitude * pauli(PauliAxis::X) * s.duration) * u;
    }
    const Complex overlap = (target.adjoint() * u).trace() / 2.0;
    if ((u - (overlap / std::abs(overlap)) * target).norm() > 1e-12) ok = false;
  }
  report(9, ok, "pi/CORPSE/short-CORPSE: Phi = 1 at delta = 0 and exact NOT composition");
}

// --- criterion 10: invariant suite --------------------------------------------

void criterion_invariants() {
  bool ok = true;
  std::mt19937_64 gen(1010);
  const ControlPulse pulse = random_pulse(gen, 6, 8.0);
  const MarkovNoiseModel rtn = rtn_model({0.2, 3.0});
  const DensityOperator rho0 = random_density(gen);

  const Matrix avg =
      average_state_raw(evolve_ensemble(init_ensemble(rho0, rtn), rtn, pulse, 8.0));
  if (std::abs(avg.trace().real() - 1.0) > 1e-9) ok = false;
  if (hermiticity_defect(avg) > 1e-9) ok = false;

  const ProcessMap map = rtn_process_map(pulse, 0.2, 3.0);
  if (map.trace_preservation_defect() > 1e-10) ok = false;
  const double phi = average_gate_fidelity(map, pauli(PauliAxis::X));
  if (phi < 0.5 - 1e-9 || phi > 1.0 + 1e-9) ok = false;

  // delta <-> -delta symmetry via relabeling the two noise states
  MarkovNoiseModel flipped = rtn;
  std::swap(flipped.statics[0], flipped.statics[1]);
  const ProcessMap map_flipped = process_map([&](const Matrix& m) {
    return average_state_raw(
        evolve_ensemble(init_ensemble_raw(m, flipped), flipped, pulse, 8.0));
  });
  if (std::abs(phi - average_gate_fidelity(map_flipped, pauli(PauliAxis::X))) > 1e-9) ok = false;

  // determinism: bit-identical reruns
  const ProcessMap rerun = rtn_process_map(pulse, 0.2, 3.0);
  if (std::memcmp(map.matrix.data(), rerun.matrix.data(), sizeof(double) * 16) != 0) ok = false;
  const McEstimate mc1 = mc_average_evolution(rtn, rho0, pulse, 8.0, 2000, 5);
  const McEstimate mc2 = mc_average_evolution(rtn, rho0, pulse, 8.0, 2000, 5);
  if ((mc1.mean_state - mc2.mean_state).norm() != 0.0) ok = false;

  report(10, ok, "trace/hermiticity, PTM row, Phi bounds, delta-sign symmetry, determinism");
}

}  // namespace

int main() {
  criterion_equivalence_born();
  criterion_equivalence_defect();
  criterion_dephasing();
  criterion_montecarlo();
  criterion_gradient();
  // Default sweep grid: 30 log-spaced correlation times in [0.1, 100], plus
  // the two Fig 2 values reused by the morphology criterion.
  std::vector<double> grid;
  for (int i = 0; i < 30; ++i) grid.push_back(0.1 * std::pow(1000.0, i / 29.0));
  grid.push_back(5.0);
  grid.push_back(50.0);
  const std::vector<SweepPoint> panel_a = run_panel(0.125, grid);
  criterion_fig1a_fig2(panel_a);
  const std::vector<SweepPoint> panel_b = run_panel(0.25, grid);
  criterion_fig1b(panel_b);
  criterion_fig2_morphology(panel_a);
  criterion_composites();
  criterion_invariants();

  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
