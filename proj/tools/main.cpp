// Command-line front end: deterministic experiment orchestration and CSV/JSON
// artifact emission on top of the solver library.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rtnoise/born.hpp"
#include "rtnoise/defect.hpp"
#include "rtnoise/ensemble.hpp"
#include "rtnoise/fidelity.hpp"
#include "rtnoise/grape.hpp"
#include "rtnoise/io.hpp"
#include "rtnoise/montecarlo.hpp"

using nlohmann::json;
using namespace rtnoise;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal representation that round-trips, for byte-stable CSVs.
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
    std::sscanf(shorter, "%lf", &back);
    if (back == x) return shorter;
  }
  return buf;
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int jobs = 0;  // 0 -> hardware concurrency
  std::string solver;

  json file_config;

  int effective_jobs() const {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "JSON config file");
  cmd->add_option("--seed", common.seed, "master RNG seed");
  cmd->add_option("--out", common.out_dir, "output directory");
  cmd->add_option("--jobs", common.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--solver", common.solver, "ensemble|born|defect|mc");
}

void load_config(Common& common) {
  common.file_config = json::object();
  if (common.config_path.empty()) return;
  std::ifstream in(common.config_path);
  if (!in) throw ConfigError("cannot open config file: " + common.config_path);
  try {
    in >> common.file_config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
  if (!common.file_config.is_object()) throw ConfigError("config root must be a JSON object");
}

template <typename T>
T get_or(const json& cfg, const std::string& key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

ControlPulse pulse_from_config(const json& cfg, double a_max) {
  const json spec = cfg.contains("pulse") ? cfg.at("pulse") : json("pi");
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    if (name == "pi") return pi_pulse(a_max);
    if (name == "corpse") return corpse_not(a_max);
    if (name == "short_corpse") return short_corpse_not(a_max);
    throw ConfigError("config key 'pulse': unknown pulse name '" + name + "'");
  }
  try {
    return pulse_from_json(spec);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config key 'pulse': ") + e.what());
  }
}

std::filesystem::path ensure_out_dir(const Common& common) {
  std::filesystem::path dir(common.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir.string());
  return dir;
}

void write_json(const std::filesystem::path& path, const json& resolved, json body) {
  body["version"] = kVersion;
  body["config"] = resolved;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path.string());
  out << body.dump(2) << "\n";
}

/// Deterministic parallel map: results are assembled in input order.
template <typename T, typename F>
std::vector<T> parallel_map(int n, int jobs, F&& work) {
  std::vector<std::future<T>> futures;
  futures.reserve(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  // Launch at most `jobs` concurrent evaluations by chunking indices.
  std::vector<T> out(static_cast<std::size_t>(n));
  std::vector<std::thread> pool;
  const int n_threads = std::min(jobs, n);
  for (int w = 0; w < n_threads; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        out[static_cast<std::size_t>(i)] = work(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

// --- evolve -------------------------------------------------------------------

Matrix evolve_once(const std::string& solver, double delta, double tau_c,
                   const ControlPulse& pulse, const DensityOperator& rho0, double t,
                   int n_traj, std::uint64_t seed) {
  if (solver == "ensemble") {
    const MarkovNoiseModel model = rtn_model({delta, tau_c});
    return average_state_raw(evolve_ensemble(init_ensemble(rho0, model), model, pulse, t));
  }
  if (solver == "born") {
    const SystemHamiltonian h_s{Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
    return evolve_born_exponential(h_s, pulse, 0.5 * pauli(PauliAxis::Z), {delta, tau_c}, rho0, t)
        .rho;
  }
  if (solver == "defect") {
    DefectModel model;
    model.h_s = {Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
    model.k_s = 0.5 * delta * pauli(PauliAxis::Z);
    model.gamma1 = model.gamma2 = 1.0 / tau_c;
    const BlockState blocks = evolve_defect_blocks(model, pulse, rho0, t);
    return blocks.pp + blocks.mm;
  }
  if (solver == "mc") {
    const MarkovNoiseModel model = rtn_model({delta, tau_c});
    return mc_average_evolution(model, rho0, pulse, t, n_traj, seed).mean_state;
  }
  throw ConfigError("unknown solver '" + solver + "' (expected ensemble|born|defect|mc)");
}

int cmd_evolve(Common& common) {
  const json& cfg = common.file_config;
  const std::string solver = !common.solver.empty() ? common.solver
                                                    : get_or<std::string>(cfg, "solver", "ensemble");
  const double delta = get_or(cfg, "delta", 0.125);
  const double tau_c = get_or(cfg, "tau_c", 5.0);
  const double a_max = get_or(cfg, "a_max", 1.0);
  if (tau_c <= 0.0) throw ConfigError("config key 'tau_c': must be positive");
  if (delta < 0.0) throw ConfigError("config key 'delta': must be nonnegative");
  const ControlPulse pulse = pulse_from_config(cfg, a_max);
  const double horizon = get_or(cfg, "horizon", pulse.duration());
  const int n_points = get_or(cfg, "n_points", 100);
  const int n_traj = get_or(cfg, "n_traj", 10000);
  if (horizon <= 0.0) throw ConfigError("config key 'horizon': must be positive");
  if (n_points < 1) throw ConfigError("config key 'n_points': must be >= 1");

  const std::vector<double> bloch_v =
      get_or(cfg, "initial_bloch", std::vector<double>{1.0, 0.0, 0.0});
  if (bloch_v.size() != 3) throw ConfigError("config key 'initial_bloch': need 3 components");
  const DensityOperator rho0 = from_bloch(Eigen::Vector3d(bloch_v[0], bloch_v[1], bloch_v[2]));

  std::uint64_t seed = common.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 0));
  if (solver == "mc" && !common.seed && !cfg.contains("seed")) {
    throw ConfigError("solver 'mc' requires an explicit --seed");
  }

  const json resolved = {{"command", "evolve"},   {"solver", solver},
                         {"delta", delta},        {"tau_c", tau_c},
                         {"a_max", a_max},        {"pulse", pulse_to_json(pulse)},
                         {"horizon", horizon},    {"n_points", n_points},
                         {"n_traj", n_traj},      {"initial_bloch", bloch_v},
                         {"seed", seed}};

  const auto states = parallel_map<Matrix>(n_points + 1, common.effective_jobs(), [&](int i) {
    const double t = horizon * i / n_points;
    return t == 0.0 ? rho0.matrix()
                    : evolve_once(solver, delta, tau_c, pulse, rho0, t, n_traj, seed);
  });

  CsvWriter csv((ensure_out_dir(common) / "evolve.csv").string(), resolved);
  csv.header("t,rho00_re,rho00_im,rho01_re,rho01_im,rho10_re,rho10_im,rho11_re,rho11_im");
  for (int i = 0; i <= n_points; ++i) {
    const double t = horizon * i / n_points;
    const Matrix& m = states[static_cast<std::size_t>(i)];
    std::string row = fmt(t);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        row += "," + fmt(m(r, c).real()) + "," + fmt(m(r, c).imag());
      }
    }
    csv.row(row);
  }
  return 0;
}

// --- fig1 / fig2 ---------------------------------------------------------------

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
  }
  return out;
}

struct FigRow {
  double tau_c, phi_pi, phi_corpse, phi_short, phi_opt;
  ControlPulse optimized;
};

FigRow fig_point(double delta, double tau_c, int max_iters) {
  const Matrix target = pauli(PauliAxis::X);
  FigRow row;
  row.tau_c = tau_c;
  row.phi_pi = average_gate_fidelity(rtn_process_map(pi_pulse(1.0), delta, tau_c), target);
  row.phi_corpse = average_gate_fidelity(rtn_process_map(corpse_not(1.0), delta, tau_c), target);
  row.phi_short =
      average_gate_fidelity(rtn_process_map(short_corpse_not(1.0), delta, tau_c), target);
  GrapeConfig config;
  config.delta = delta;
  config.tau_c = tau_c;
  config.max_iters = max_iters;
  const GrapeResult r = optimize_gate(config);
  row.phi_opt = r.fidelity;
  row.optimized = r.pulse;
  return row;
}

int cmd_fig1(Common& common) {
  const json& cfg = common.file_config;
  const std::vector<double> deltas = get_or(cfg, "deltas", std::vector<double>{0.125, 0.25});
  const int n_grid = get_or(cfg, "n_tau", 30);
  const double tau_lo = get_or(cfg, "tau_min", 0.1);
  const double tau_hi = get_or(cfg, "tau_max", 100.0);
  const int max_iters = get_or(cfg, "max_iters", 1500);
  if (n_grid < 1 || tau_lo <= 0.0 || tau_hi < tau_lo) {
    throw ConfigError("invalid tau grid: need n_tau >= 1 and 0 < tau_min <= tau_max");
  }
  const std::vector<double> taus = log_grid(tau_lo, tau_hi, n_grid);
  const auto out_dir = ensure_out_dir(common);

  for (const double delta : deltas) {
    const json resolved = {{"command", "fig1"}, {"delta", delta},
                           {"tau_c", taus},     {"max_iters", max_iters},
                           {"n_tau", n_grid},   {"tau_min", tau_lo},
                           {"tau_max", tau_hi}};
    const auto rows =
        parallel_map<FigRow>(static_cast<int>(taus.size()), common.effective_jobs(), [&](int i) {
          return fig_point(delta, taus[static_cast<std::size_t>(i)], max_iters);
        });
    char name[64];
    std::snprintf(name, sizeof(name), "fig1_delta_%g.csv", delta);
    CsvWriter csv((out_dir / name).string(), resolved);
    csv.header("tau_c,phi_pi,phi_corpse,phi_short_corpse,phi_optimized");
    for (const auto& r : rows) {
      csv.row(fmt(r.tau_c) + "," + fmt(r.phi_pi) + "," + fmt(r.phi_corpse) + "," +
              fmt(r.phi_short) + "," + fmt(r.phi_opt));
    }
  }
  return 0;
}

int cmd_fig2(Common& common) {
  const json& cfg = common.file_config;
  const double delta = get_or(cfg, "delta", 0.125);
  const std::vector<double> taus = get_or(cfg, "tau_c", std::vector<double>{5.0, 20.0, 50.0});
  const int max_iters = get_or(cfg, "max_iters", 2000);
  const auto out_dir = ensure_out_dir(common);

  const auto rows =
      parallel_map<FigRow>(static_cast<int>(taus.size()), common.effective_jobs(), [&](int i) {
        return fig_point(delta, taus[static_cast<std::size_t>(i)], max_iters);
      });

  json summary = json::array();
  for (const auto& r : rows) {
    const json resolved = {{"command", "fig2"}, {"delta", delta},
                           {"tau_c", r.tau_c},  {"max_iters", max_iters}};
    char name[64];
    std::snprintf(name, sizeof(name), "pulse_tau_%g.csv", r.tau_c);
    CsvWriter csv((out_dir / name).string(), resolved);
    csv.header("t_start,t_end,amplitude");
    double t = 0.0;
    for (const auto& seg : r.optimized.segments) {
      csv.row(fmt(t) + "," + fmt(t + seg.duration) + "," + fmt(seg.amplitude));
      t += seg.duration;
    }
    summary.push_back({{"tau_c", r.tau_c},
                       {"file", name},
                       {"phi_optimized", r.phi_opt},
                       {"phi_pi", r.phi_pi},
                       {"phi_corpse", r.phi_corpse},
                       {"phi_short_corpse", r.phi_short},
                       {"sign_changes", sign_changes(r.optimized)}});
  }
  const json resolved = {
      {"command", "fig2"}, {"delta", delta}, {"tau_c", taus}, {"max_iters", max_iters}};
  write_json(out_dir / "fig2_summary.json", resolved, {{"pulses", std::move(summary)}});
  return 0;
}

// --- check ---------------------------------------------------------------------

int cmd_check(Common& common) {
  const json& cfg = common.file_config;
  const std::vector<double> deltas =
      get_or(cfg, "deltas", std::vector<double>{0.05, 0.125, 0.25});
  const std::vector<double> taus = get_or(cfg, "taus", std::vector<double>{0.5, 5.0, 50.0});
  const double tolerance = get_or(cfg, "tolerance", 1e-7);
  // Negative-control knob: scales gamma1 of the defect model away from the
  // symmetric-RTN correspondence.
  const double gamma_ratio = get_or(cfg, "gamma_ratio", 1.0);
  const ControlPulse pulse = pulse_from_config(cfg, get_or(cfg, "a_max", 1.0));
  const double horizon = get_or(cfg, "horizon", pulse.duration());
  const DensityOperator rho0 = from_bloch(Eigen::Vector3d(1.0, 0.0, 0.0));

  struct Pair {
    std::string name;
    double worst = 0.0, worst_delta = 0.0, worst_tau = 0.0;
    void update(double d, double delta, double tau_c) {
      if (d > worst) {
        worst = d;
        worst_delta = delta;
        worst_tau = tau_c;
      }
    }
  };
  Pair eb{"ensemble_vs_born"}, ed{"ensemble_vs_defect"}, bd{"born_vs_defect"};

  for (const double delta : deltas) {
    for (const double tau_c : taus) {
      const Matrix ens = evolve_once("ensemble", delta, tau_c, pulse, rho0, horizon, 0, 0);
      const Matrix born = evolve_once("born", delta, tau_c, pulse, rho0, horizon, 0, 0);
      DefectModel model;
      model.h_s = {Matrix::Zero(2, 2), 0.5 * pauli(PauliAxis::X)};
      model.k_s = 0.5 * delta * pauli(PauliAxis::Z);
      model.gamma1 = gamma_ratio / tau_c;
      model.gamma2 = 1.0 / tau_c;
      const BlockState blocks = evolve_defect_blocks(model, pulse, rho0, horizon);
      const Matrix defect = blocks.pp + blocks.mm;
      eb.update(trace_distance(ens, born), delta, tau_c);
      ed.update(trace_distance(ens, defect), delta, tau_c);
      bd.update(trace_distance(born, defect), delta, tau_c);
    }
  }

  const json resolved = {{"command", "check"},     {"deltas", deltas},
                         {"taus", taus},           {"tolerance", tolerance},
                         {"gamma_ratio", gamma_ratio}, {"pulse", pulse_to_json(pulse)},
                         {"horizon", horizon}};
  json pairs = json::array();
  bool ok = true;
  for (const Pair* p : {&eb, &ed, &bd}) {
    pairs.push_back({{"pair", p->name},
                     {"max_trace_distance", p->worst},
                     {"worst_delta", p->worst_delta},
                     {"worst_tau_c", p->worst_tau},
                     {"pass", p->worst <= tolerance}});
    if (p->worst > tolerance) ok = false;
  }
  write_json(ensure_out_dir(common) / "check_report.json", resolved,
             {{"pairs", std::move(pairs)}, {"pass", ok}});
  if (!ok) {
    throw CheckFailure("equivalence check failed; see check_report.json");
  }
  return 0;
}

// --- mc-validate -----------------------------------------------------------------

int cmd_mc_validate(Common& common) {
  const json& cfg = common.file_config;
  if (!common.seed && !cfg.contains("seed")) {
    throw ConfigError("mc-validate requires an explicit --seed");
  }
  const std::uint64_t seed = common.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 0));
  const std::vector<double> deltas = get_or(cfg, "deltas", std::vector<double>{0.125, 0.25});
  const std::vector<double> taus = get_or(cfg, "taus", std::vector<double>{2.0, 5.0, 20.0});
  const int n_traj = get_or(cfg, "n_traj", 20000);
  const ControlPulse pulse = pulse_from_config(cfg, get_or(cfg, "a_max", 1.0));
  const DensityOperator rho0 = from_bloch(Eigen::Vector3d(1.0, 0.0, 0.0));
  const Matrix target = pauli(PauliAxis::X);

  struct Cell {
    double delta, tau_c, state_z, fid_z, se;
  };
  std::vector<std::pair<double, double>> grid;
  for (const double d : deltas)
    for (const double t : taus) grid.emplace_back(d, t);

  const auto cells =
      parallel_map<Cell>(static_cast<int>(grid.size()), common.effective_jobs(), [&](int i) {
        const auto [delta, tau_c] = grid[static_cast<std::size_t>(i)];
        const MarkovNoiseModel model = rtn_model({delta, tau_c});
        const McEstimate est =
            mc_average_evolution(model, rho0, pulse, pulse.duration(), n_traj, seed);
        const Matrix det = evolve_once("ensemble", delta, tau_c, pulse, rho0, pulse.duration(), 0, 0);
        const McFidelity mc = mc_gate_fidelity(model, pulse, target, n_traj, seed + 1);
        const double exact =
            average_gate_fidelity(rtn_process_map(pulse, delta, tau_c), target);
        return Cell{delta, tau_c,
                    (est.mean_state - det).cwiseAbs().maxCoeff() / std::max(est.std_error, 1e-15),
                    std::abs(mc.fidelity - exact) / std::max(mc.std_error, 1e-15),
                    std::max(est.std_error, mc.std_error)};
      });

  const json resolved = {{"command", "mc-validate"}, {"seed", seed},
                         {"deltas", deltas},         {"taus", taus},
                         {"n_traj", n_traj},         {"pulse", pulse_to_json(pulse)}};
  json rows = json::array();
  bool ok = true;
  for (const auto& c : cells) {
    const bool pass = c.state_z <= 3.0 && c.fid_z <= 3.0;
    if (!pass) ok = false;
    rows.push_back({{"delta", c.delta},
                    {"tau_c", c.tau_c},
                    {"state_z", c.state_z},
                    {"fidelity_z", c.fid_z},
                    {"std_error", c.se},
                    {"pass", pass}});
  }
  write_json(ensure_out_dir(common) / "mc_report.json", resolved,
             {{"cells", std::move(rows)}, {"pass", ok}});
  if (!ok) throw CheckFailure("Monte Carlo validation failed; see mc_report.json");
  return 0;
}

// --- optimize ---------------------------------------------------------------------

int cmd_optimize(Common& common) {
  const json& cfg = common.file_config;
  GrapeConfig config;
  config.delta = get_or(cfg, "delta", 0.125);
  config.tau_c = get_or(cfg, "tau_c", 5.0);
  config.a_max = get_or(cfg, "a_max", 1.0);
  config.n_segments = get_or(cfg, "n_segments", 64);
  config.total_time = get_or(cfg, "gate_time", 0.0);
  config.max_iters = get_or(cfg, "max_iters", 2000);
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("optimizer config: ") + e.what());
  }

  // gate_time 0 searches the composite durations; a fixed value optimizes at
  // exactly that duration.
  const GrapeResult r = config.total_time > 0.0
                            ? optimize_pulse_multistart(config, default_starts(config))
                            : optimize_gate(config);

  const json resolved = {{"command", "optimize"},       {"delta", config.delta},
                         {"tau_c", config.tau_c},       {"a_max", config.a_max},
                         {"n_segments", config.n_segments}, {"gate_time", config.total_time},
                         {"max_iters", config.max_iters}};
  const auto out_dir = ensure_out_dir(common);
  CsvWriter csv((out_dir / "optimized_pulse.csv").string(), resolved);
  csv.header("t_start,t_end,amplitude");
  double t = 0.0;
  for (const auto& seg : r.pulse.segments) {
    csv.row(fmt(t) + "," + fmt(t + seg.duration) + "," + fmt(seg.amplitude));
    t += seg.duration;
  }
  write_json(out_dir / "optimize_summary.json", resolved,
             {{"fidelity", r.fidelity},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"gate_time", r.pulse.duration()},
              {"sign_changes", sign_changes(r.pulse)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"average dynamics of a qubit under two-state Markov noise: solvers, "
               "equivalence checks, and NOT-gate pulse optimization"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    Common common;
    int (*run)(Common&);
  };
  std::vector<Sub> subs;
  subs.push_back({app.add_subcommand("evolve", "time-resolved average state CSV"), {}, cmd_evolve});
  subs.push_back({app.add_subcommand("fig1", "fidelity-vs-correlation-time sweeps"), {}, cmd_fig1});
  subs.push_back(
      {app.add_subcommand("fig2", "optimized pulse shapes at tau_c = 5, 20, 50"), {}, cmd_fig2});
  subs.push_back(
      {app.add_subcommand("check", "three-solver pairwise equivalence report"), {}, cmd_check});
  subs.push_back({app.add_subcommand("mc-validate", "Monte Carlo vs deterministic comparison"),
                  {},
                  cmd_mc_validate});
  subs.push_back(
      {app.add_subcommand("optimize", "single gradient-ascent pulse optimization"), {}, cmd_optimize});
  for (auto& sub : subs) add_common(sub.cmd, sub.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto& sub : subs) {
    if (!sub.cmd->parsed()) continue;
    try {
      load_config(sub.common);
      return sub.run(sub.common);
    } catch (const CheckFailure& e) {
      std::cerr << "check failed: " << e.what() << "\n";
      return 1;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
