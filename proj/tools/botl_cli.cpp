// botl: command-line front end for simulation, localization, clustering,
// Monte Carlo campaigns and bounds.
//
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure
// (degenerate or non-identifiable geometry). Data goes to the output file or
// stdout; diagnostics go to stderr.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "botl/botl.hpp"
#include "botl/config.hpp"

namespace {

using namespace botl;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string output;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BOTL_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidInput(std::string("BOTL_SEED is not an unsigned integer: '") + env + "'");
  }
  return kDefaultSeed;
}

// Buffered so that a failure never leaves a half-written file behind.
void emit(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file '" + path + "'");
  out << data;
  if (!out) throw InvalidInput("failed writing output file '" + path + "'");
}

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed,
                  "Master seed (default: $BOTL_SEED, else " + std::to_string(kDefaultSeed) + ")");
}

void add_output(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("-o,--output", c.output, what + " CSV path (default: stdout)");
}

Scenario scenario_with_overrides(const std::string& path, const std::optional<double>& sigma_deg,
                                 const std::optional<double>& sigma_pol_deg) {
  auto s = load_scenario(path);
  if (sigma_deg) {
    if (*sigma_deg < 0) throw InvalidInput("--sigma-deg must be >= 0");
    s.sigma_bearing = deg_to_rad(*sigma_deg);
    if (!sigma_pol_deg) s.sigma_polarization = s.sigma_bearing;
  }
  if (sigma_pol_deg) {
    if (*sigma_pol_deg < 0) throw InvalidInput("--sigma-pol-deg must be >= 0");
    s.sigma_polarization = deg_to_rad(*sigma_pol_deg);
  }
  return s;
}

std::vector<ObservationFrame> simulate_trial(const Scenario& s, std::uint64_t seed,
                                             std::size_t trial) {
  const NoiseModel noise{s.sigma_bearing, s.sigma_polarization, derive_seed(seed, 0, trial)};
  return generate_observations(s.track, s.targets, noise, static_cast<std::uint32_t>(trial));
}

void scenario_meta(csv::Writer& w, const std::string& path, const Scenario& s,
                   std::uint64_t seed) {
  w.comment("scenario", path);
  w.comment("seed", std::to_string(seed));
  w.comment("sigma_bearing_deg", csv::format_double(rad_to_deg(s.sigma_bearing)));
  w.comment("sigma_polarization_deg", csv::format_double(rad_to_deg(s.sigma_polarization)));
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::string scenario;
  std::size_t trials = 1;
  bool reveal = false;
  std::optional<double> sigma_deg, sigma_pol_deg;
};

int run_simulate(const SimulateArgs& a) {
  const auto s = scenario_with_overrides(a.scenario, a.sigma_deg, a.sigma_pol_deg);
  const auto seed = resolve_seed(a.common.seed);
  std::ostringstream out;
  csv::Writer w(out);
  scenario_meta(w, a.scenario, s, seed);
  std::vector<std::string> cols{"trial", "step", "slot", "theta_hat_rad", "gamma_hat_rad",
                                "eta_hat_rad"};
  if (a.reveal) cols.push_back("truth_label");
  w.header(cols);
  for (std::size_t trial = 0; trial < a.trials; ++trial) {
    for (const auto& f : simulate_trial(s, seed, trial)) {
      for (std::size_t slot = 0; slot < f.measurements.size(); ++slot) {
        const auto& m = f.measurements[slot];
        std::vector<std::string> row{std::to_string(trial), std::to_string(f.step),
                                     std::to_string(slot), csv::format_double(m.theta),
                                     csv::format_double(m.polarization->gamma),
                                     csv::format_double(m.polarization->eta)};
        if (a.reveal) row.push_back(std::to_string(f.truth_labels[slot]));
        w.row_strings(row);
      }
    }
  }
  emit(a.common.output, out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct LocalizeArgs {
  Common common;
  std::string input;
  std::string method = "nls";
};

int run_localize(const LocalizeArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw InvalidInput("cannot open input file '" + a.input + "'");
  const auto table = csv::read_numeric(in);
  const auto cx = table.column("x_r_m");
  const auto cy = table.column("y_r_m");
  const auto ct = table.column("theta_rad");
  std::vector<BearingSample> samples;
  for (const auto& r : table.rows) samples.push_back({Point2(r[cx], r[cy]), r[ct]});
  const BearingStream stream(std::move(samples));

  PositionEstimate est;
  if (a.method == "nls") {
    est = nls_localize(stream);
  } else if (a.method == "ov") {
    est = ov_localize(stream);
  } else {
    est = tls_localize(stream);
  }
  std::ostringstream out;
  csv::Writer w(out);
  w.comment("input", a.input);
  w.header({"method", "x_m", "y_m", "final_cost_rad2", "iterations", "converged"});
  w.row(a.method, est.position.x(), est.position.y(), est.final_cost, est.iterations,
        est.converged ? 1 : 0);
  emit(a.common.output, out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ClusterArgs {
  Common common;
  std::string scenario;
  std::string algorithm = "bearing";
  std::string estimates;
  std::size_t trials = 1;
  std::size_t stride = 1;
  std::size_t window = 5;
  std::optional<double> sigma_deg, sigma_pol_deg;
};

int run_cluster(const ClusterArgs& a) {
  const auto s = scenario_with_overrides(a.scenario, a.sigma_deg, a.sigma_pol_deg);
  const auto seed = resolve_seed(a.common.seed);
  std::ostringstream labels_out, est_out;
  csv::Writer lw(labels_out), ew(est_out);
  for (auto* w : {&lw, &ew}) {
    scenario_meta(*w, a.scenario, s, seed);
    w->comment("algorithm", a.algorithm);
  }
  lw.header({"trial", "step", "slot", "assigned_target", "true_target"});
  ew.header({"trial", "target", "x_m", "y_m", "true_x_m", "true_y_m", "error_m",
             "clustering_error", "iterations"});

  for (std::size_t trial = 0; trial < a.trials; ++trial) {
    const auto frames = simulate_trial(s, seed, trial);
    ClusterSettings settings;
    settings.stride = a.stride;
    settings.self_start_window = a.window;
    settings.seed = derive_seed(seed, 0, trial, 0x6b6dULL);
    const auto result = a.algorithm == "bearing" ? cluster_by_bearing(frames, s.track, settings)
                                                 : cluster_by_polarization(frames, s.track, settings);
    for (std::size_t j = 0; j < frames.size(); ++j) {
      const auto target_of = result.labels.target_of_slot(j);
      for (std::size_t slot = 0; slot < target_of.size(); ++slot) {
        lw.row(trial, frames[j].step, slot, target_of[slot], frames[j].truth_labels[slot]);
      }
    }
    std::vector<Point2> positions;
    for (const auto& e : result.estimates) positions.push_back(e.position);
    const auto sq = detail::matched_squared_errors(positions, s.targets.targets());
    // Report each estimate next to the target it was matched to.
    const auto n = static_cast<Eigen::Index>(positions.size());
    CostMatrix cost(n, n);
    for (Eigen::Index e = 0; e < n; ++e) {
      for (Eigen::Index t = 0; t < n; ++t) {
        cost(e, t) = (positions[static_cast<std::size_t>(e)] -
                      s.targets[static_cast<std::size_t>(t)].position)
                         .squaredNorm();
      }
    }
    const auto match = assign(cost);
    const double cerr = clustering_error(result.labels, frames);
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const auto& truth = s.targets[match.col_of_row[k]].position;
      ew.row(trial, k, positions[k].x(), positions[k].y(), truth.x(), truth.y(),
             std::sqrt(sq[match.col_of_row[k]]), cerr, result.estimates[k].iterations);
    }
  }
  emit(a.common.output, labels_out.str());
  if (!a.estimates.empty()) emit(a.estimates, est_out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  Common common;
  std::string preset;
  std::string algorithm = "bearing";
  std::size_t trials = 500;
  std::size_t threads = 0;
  std::string per_trial;
  std::optional<double> sigma_deg, sigma_pol_deg;
  std::vector<double> sweep;
};

int run_experiment(const ExperimentArgs& a) {
  PresetOptions opt;
  opt.trials = a.trials;
  opt.threads = a.threads;
  opt.seed = resolve_seed(a.common.seed);
  if (a.sigma_deg) {
    if (*a.sigma_deg < 0) throw InvalidInput("--sigma-deg must be >= 0");
    opt.sigma_bearing = deg_to_rad(*a.sigma_deg);
  }
  if (a.sigma_pol_deg) {
    if (*a.sigma_pol_deg < 0) throw InvalidInput("--sigma-pol-deg must be >= 0");
    opt.sigma_polarization = deg_to_rad(*a.sigma_pol_deg);
  }
  if (!a.sweep.empty()) opt.sweep = a.sweep;

  ExperimentSpec spec;
  if (a.preset == "y-sweep") {
    spec = y_sweep_spec(opt);
  } else if (a.preset == "x-sweep") {
    spec = x_sweep_spec(opt);
  } else if (a.preset == "estimator-comparison") {
    spec = estimator_comparison_spec(opt);
  } else if (a.preset == "orientation-sweep") {
    spec = orientation_sweep_spec(
        a.algorithm == "bearing" ? Method::kClusterByBearing : Method::kClusterByPolarization, opt);
  } else {
    spec = noise_sweep_spec(opt);
  }
  const auto table = run_monte_carlo(spec);
  std::ostringstream out;
  table.write_csv(out);
  if (!a.per_trial.empty()) {
    std::vector<double> values;
    for (const auto& p : spec.points) values.push_back(p.value);
    std::ostringstream long_out;
    table.write_per_trial_csv(long_out, values);
    emit(a.per_trial, long_out.str());
  }
  emit(a.common.output, out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CrlbArgs {
  Common common;
  std::string scenario;
  bool as_printed = false;
  std::optional<double> sigma_deg;
};

int run_crlb(const CrlbArgs& a) {
  const auto s = scenario_with_overrides(a.scenario, a.sigma_deg, std::nullopt);
  if (!(s.sigma_bearing > 0.0)) {
    throw InvalidInput("bounds need a positive bearing noise: set noise.sigma_bearing_deg or "
                       "--sigma-deg");
  }
  const auto form = a.as_printed ? CrlbForm::kAsPrinted : CrlbForm::kSquaredSum;
  std::ostringstream out;
  csv::Writer w(out);
  w.comment("scenario", a.scenario);
  w.comment("sigma_bearing_deg", csv::format_double(rad_to_deg(s.sigma_bearing)));
  w.comment("determinant_form", a.as_printed ? "as-printed" : "squared-sum");
  w.header({"target", "x_m", "y_m", "crlb_angular", "crlb_position_m"});
  const auto& receivers = s.track.positions();
  for (std::size_t t = 0; t < s.targets.size(); ++t) {
    const auto& p = s.targets[t].position;
    w.row(t, p.x(), p.y(), crlb_paper(receivers, p, s.sigma_bearing, form),
          crlb_position(receivers, p, s.sigma_bearing));
  }
  emit(a.common.output, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing-only multi-target localization toolkit.\n"
               "Boundary units: track geometry in km, angles and noise in degrees, target "
               "positions in m."};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate unlabeled DoA observations");
  simulate->add_option("-s,--scenario", sim.scenario, "Scenario TOML file")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--trials", sim.trials, "Independent noise realizations")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--reveal-labels", sim.reveal, "Add the truth_label column");
  simulate->add_option("--sigma-deg", sim.sigma_deg, "Override bearing noise std (deg)");
  simulate->add_option("--sigma-pol-deg", sim.sigma_pol_deg,
                       "Override polarization noise std (deg)");
  add_seed(simulate, sim.common);
  add_output(simulate, sim.common, "Observations");

  LocalizeArgs loc;
  auto* localize = app.add_subcommand(
      "localize", "Estimate one target from a bearing CSV (columns x_r_m, y_r_m, theta_rad)");
  localize->add_option("-i,--input", loc.input, "Bearing CSV: receiver x, y (m), bearing (rad)")
      ->required()
      ->check(CLI::ExistingFile);
  localize->add_option("-m,--method", loc.method, "Estimator")
      ->check(CLI::IsMember({"nls", "ov", "tls"}))
      ->capture_default_str();
  add_output(localize, loc.common, "Estimate");

  ClusterArgs clu;
  auto* cluster = app.add_subcommand("cluster", "Associate measurements to targets and localize");
  cluster->add_option("-s,--scenario", clu.scenario, "Scenario TOML file")
      ->required()
      ->check(CLI::ExistingFile);
  cluster->add_option("-a,--algorithm", clu.algorithm, "Association algorithm")
      ->check(CLI::IsMember({"bearing", "polarization"}))
      ->capture_default_str();
  cluster->add_option("--trials", clu.trials, "Independent noise realizations")
      ->check(CLI::PositiveNumber);
  cluster->add_option("--stride", clu.stride, "Re-localize every N frames (bearing only)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster->add_option("--window", clu.window, "Self-start window in frames (bearing only)")
      ->capture_default_str();
  cluster->add_option("--estimates", clu.estimates, "Write position estimates (m) to this CSV");
  cluster->add_option("--sigma-deg", clu.sigma_deg, "Override bearing noise std (deg)");
  cluster->add_option("--sigma-pol-deg", clu.sigma_pol_deg,
                      "Override polarization noise std (deg)");
  add_seed(cluster, clu.common);
  add_output(cluster, clu.common, "Labels");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo campaign");
  experiment
      ->add_option("preset", exp.preset,
                   "y-sweep | x-sweep | estimator-comparison | orientation-sweep | noise-sweep")
      ->required()
      ->check(CLI::IsMember(
          {"y-sweep", "x-sweep", "estimator-comparison", "orientation-sweep", "noise-sweep"}));
  experiment->add_option("--algorithm", exp.algorithm, "Association for orientation-sweep")
      ->check(CLI::IsMember({"bearing", "polarization"}))
      ->capture_default_str();
  experiment->add_option("--trials", exp.trials, "Trials per sweep point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--threads", exp.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();
  experiment->add_option("--sigma-deg", exp.sigma_deg,
                         "Bearing noise std (deg) for fixed-noise presets [2]");
  experiment->add_option("--sigma-pol-deg", exp.sigma_pol_deg,
                         "Polarization noise std (deg); default tracks --sigma-deg");
  experiment->add_option("--sweep", exp.sweep,
                         "Replace sweep values (y/x in km, sigma or orientation in deg)");
  experiment->add_option("--per-trial", exp.per_trial, "Also write per-trial long-format CSV");
  add_seed(experiment, exp.common);
  add_output(experiment, exp.common, "Result table");

  CrlbArgs crlb;
  auto* crlb_cmd = app.add_subcommand("crlb", "Lower bounds for every target of a scenario");
  crlb_cmd->add_option("-s,--scenario", crlb.scenario, "Scenario TOML file")
      ->required()
      ->check(CLI::ExistingFile);
  crlb_cmd->add_option("--sigma-deg", crlb.sigma_deg, "Override bearing noise std (deg)");
  crlb_cmd->add_flag("--as-printed", crlb.as_printed,
                     "Angular bound with the determinant read term by term");
  add_output(crlb_cmd, crlb.common, "Bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*localize) return run_localize(loc);
    if (*cluster) return run_cluster(clu);
    if (*experiment) return run_experiment(exp);
    return run_crlb(crlb);
  } catch (const NumericalError& e) {
    std::cerr << "botl: error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvalidInput& e) {
    std::cerr << "botl: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "botl: error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
