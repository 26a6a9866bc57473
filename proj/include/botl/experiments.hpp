#pragma once

// Monte Carlo harness and the simulation campaigns: target range and
// offset sweeps, estimator comparison, two-target orientation sweep, and the
// clustering noise sweep.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "botl/assignment.hpp"
#include "botl/clustering.hpp"
#include "botl/csv.hpp"
#include "botl/errors.hpp"
#include "botl/estimators.hpp"
#include "botl/measurement.hpp"
#include "botl/rng.hpp"
#include "botl/scenario.hpp"

namespace botl {

/// Seed used when neither a flag nor BOTL_SEED supplies one.
inline constexpr std::uint64_t kDefaultSeed = 20210518;

/// Root of the mean squared Euclidean error of `estimates` about `truth`.
inline double rmse(std::span<const Point2> estimates, const Point2& truth) {
  if (estimates.empty()) throw InvalidInput("rmse of an empty estimate list");
  double sum = 0.0;
  for (const auto& e : estimates) sum += (e - truth).squaredNorm();
  return std::sqrt(sum / static_cast<double>(estimates.size()));
}

enum class Method {
  kNls,
  kOv,
  kTls,
  kClusterByBearing,
  kClusterByPolarization,
};

inline std::string method_name(Method m) {
  switch (m) {
    case Method::kNls: return "nls";
    case Method::kOv: return "ov";
    case Method::kTls: return "tls";
    case Method::kClusterByBearing: return "bearing";
    case Method::kClusterByPolarization: return "polarization";
  }
  return "?";
}

inline bool is_clustering(Method m) {
  return m == Method::kClusterByBearing || m == Method::kClusterByPolarization;
}

/// One row of a sweep: a complete scenario plus the noise level.
struct SweepPoint {
  double value = 0.0;  // reported in the sweep column, in display units
  std::vector<Point2> track;
  std::vector<Target> targets;
  double sigma_bearing = 0.0;
  double sigma_polarization = 0.0;
};

struct ExperimentSpec {
  std::string preset;
  std::string sweep_column;
  std::vector<SweepPoint> points;
  std::vector<Method> methods;
  std::size_t trials = 500;
  std::uint64_t master_seed = kDefaultSeed;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::size_t bootstrap_resamples = 1000;
  ClusterSettings cluster;
  std::vector<std::pair<std::string, std::string>> meta;

  void validate() const {
    if (trials < 1) throw InvalidConfiguration("trials must be >= 1");
    if (points.empty()) throw InvalidConfiguration("sweep must not be empty");
    if (methods.empty()) throw InvalidConfiguration("no estimator or algorithm selected");
    for (const auto& p : points) {
      if (p.targets.empty() || p.track.size() < 2) {
        throw InvalidConfiguration("sweep point needs a track and at least one target");
      }
    }
  }
};

/// Outcome of one method on one simulated trial.
struct TrialRecord {
  std::size_t point = 0;
  std::size_t trial = 0;
  Method method = Method::kNls;
  bool failed = false;
  /// Squared position error per target (m^2), estimates matched to targets
  /// by minimum total squared distance.
  std::vector<double> squared_errors;
  /// NaN for methods that use the true labels.
  double clustering_error = std::numeric_limits<double>::quiet_NaN();
  double mean_iterations = 0.0;
};

struct ResultTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Every per-trial record, ordered by (point, trial, method).
  std::vector<TrialRecord> records;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw InvalidInput("no column named '" + std::string(name) + "'");
  }
  double at(std::size_t row, std::string_view name) const { return rows.at(row)[column(name)]; }

  void write_csv(std::ostream& out) const {
    csv::Writer w(out);
    for (const auto& [k, v] : meta) w.comment(k, v);
    w.header(columns);
    for (const auto& r : rows) {
      std::vector<std::string> cells;
      cells.reserve(r.size());
      for (double v : r) cells.push_back(csv::format_double(v));
      w.row_strings(cells);
    }
  }

  void write_per_trial_csv(std::ostream& out, const std::vector<double>& sweep_values) const {
    csv::Writer w(out);
    for (const auto& [k, v] : meta) w.comment(k, v);
    w.header({"point", "sweep_value", "trial", "method", "target", "squared_error_m2",
              "clustering_error", "mean_iterations", "failed"});
    for (const auto& r : records) {
      for (std::size_t t = 0; t < r.squared_errors.size(); ++t) {
        w.row(r.point, sweep_values.at(r.point), r.trial, method_name(r.method), t,
              r.squared_errors[t], r.clustering_error, r.mean_iterations, r.failed ? 1 : 0);
      }
    }
  }
};

namespace detail {

inline BearingStream truth_stream(std::span<const ObservationFrame> frames,
                                  const ReceiverTrack& track, std::size_t target) {
  std::vector<BearingSample> samples;
  samples.reserve(frames.size());
  for (const auto& f : frames) {
    for (std::size_t s = 0; s < f.truth_labels.size(); ++s) {
      if (f.truth_labels[s] == target) samples.push_back({track[f.step], f.measurements[s].theta});
    }
  }
  return BearingStream(std::move(samples));
}

/// Squared errors after matching estimates to targets one-to-one with
/// minimum total squared distance.
inline std::vector<double> matched_squared_errors(const std::vector<Point2>& estimates,
                                                  const std::vector<Target>& targets) {
  const auto n = static_cast<Eigen::Index>(targets.size());
  CostMatrix cost(n, n);
  for (Eigen::Index e = 0; e < n; ++e) {
    for (Eigen::Index t = 0; t < n; ++t) {
      cost(e, t) = (estimates[static_cast<std::size_t>(e)] -
                    targets[static_cast<std::size_t>(t)].position)
                       .squaredNorm();
    }
  }
  if (!cost.allFinite()) {
    return std::vector<double>(targets.size(), std::numeric_limits<double>::infinity());
  }
  const auto match = assign(cost);
  std::vector<double> out(targets.size());
  for (std::size_t e = 0; e < targets.size(); ++e) {
    out[match.col_of_row[e]] =
        cost(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(match.col_of_row[e]));
  }
  return out;
}

inline TrialRecord run_method(Method method, std::span<const ObservationFrame> frames,
                              const ReceiverTrack& track, const std::vector<Target>& targets,
                              const ClusterSettings& cluster) {
  TrialRecord rec;
  rec.method = method;
  const std::size_t n = targets.size();
  try {
    std::vector<PositionEstimate> est;
    if (is_clustering(method)) {
      const auto result = method == Method::kClusterByBearing
                              ? cluster_by_bearing(frames, track, cluster)
                              : cluster_by_polarization(frames, track, cluster);
      rec.clustering_error = clustering_error(result.labels, frames);
      est = result.estimates;
    } else {
      for (std::size_t t = 0; t < n; ++t) {
        const auto stream = truth_stream(frames, track, t);
        switch (method) {
          case Method::kNls: est.push_back(nls_localize(stream, cluster.solver)); break;
          case Method::kOv: est.push_back(ov_localize(stream)); break;
          default: est.push_back(tls_localize(stream)); break;
        }
      }
    }
    std::vector<Point2> positions;
    double iterations = 0.0;
    for (const auto& e : est) {
      positions.push_back(e.position);
      iterations += static_cast<double>(e.iterations);
    }
    rec.mean_iterations = iterations / static_cast<double>(n);
    rec.squared_errors = matched_squared_errors(positions, targets);
    for (double e : rec.squared_errors) rec.failed = rec.failed || !std::isfinite(e);
  } catch (const Error&) {
    rec.failed = true;
    rec.squared_errors.assign(n, std::numeric_limits<double>::quiet_NaN());
  }
  return rec;
}

/// Position bounds averaged in quadrature over the targets, so they compare
/// with the pooled RMSE.
inline std::pair<double, double> pooled_bounds(const SweepPoint& p) {
  double angular = 0.0, position = 0.0;
  for (const auto& t : p.targets) {
    const double a = crlb_paper(p.track, t.position, p.sigma_bearing);
    double b = 0.0;
    if (p.sigma_bearing > 0.0) {
      try {
        b = crlb_position(p.track, t.position, p.sigma_bearing);
      } catch (const NonIdentifiable&) {
        b = std::numeric_limits<double>::infinity();
      }
    }
    angular += a * a;
    position += b * b;
  }
  const auto n = static_cast<double>(p.targets.size());
  return {std::sqrt(angular / n), std::sqrt(position / n)};
}

struct Summary {
  double rmse = std::numeric_limits<double>::quiet_NaN();
  double rmse_se = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> rmse_per_target;
  double cluster_error = std::numeric_limits<double>::quiet_NaN();
  double cluster_error_se = std::numeric_limits<double>::quiet_NaN();
  double mean_iterations = std::numeric_limits<double>::quiet_NaN();
  std::size_t failures = 0;
};

inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// RMSE over successful trials, and bootstrap standard errors from
/// resampling whole trials.
inline Summary summarize(const std::vector<const TrialRecord*>& recs, std::size_t targets,
                         std::size_t resamples, std::uint64_t seed) {
  Summary s;
  std::vector<const TrialRecord*> ok;
  for (const auto* r : recs) {
    if (r->failed) {
      ++s.failures;
    } else {
      ok.push_back(r);
    }
  }
  if (ok.empty()) return s;
  const bool clustered = !std::isnan(ok.front()->clustering_error);

  // Per-trial sums keep the pooled RMSE exact and make resampling cheap.
  std::vector<double> trial_sq(ok.size(), 0.0);
  std::vector<double> per_target(targets, 0.0);
  double sq = 0.0, cerr = 0.0, iters = 0.0;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    for (std::size_t t = 0; t < targets; ++t) {
      trial_sq[i] += ok[i]->squared_errors[t];
      per_target[t] += ok[i]->squared_errors[t];
      sq += ok[i]->squared_errors[t];
    }
    cerr += ok[i]->clustering_error;
    iters += ok[i]->mean_iterations;
  }
  const auto m = static_cast<double>(ok.size());
  s.rmse = std::sqrt(sq / (m * static_cast<double>(targets)));
  for (double v : per_target) s.rmse_per_target.push_back(std::sqrt(v / m));
  s.mean_iterations = iters / m;
  if (clustered) s.cluster_error = cerr / m;

  RandomStream rng(seed, {StreamPurpose::kBootstrap, 0, 0});
  std::vector<double> boot_rmse, boot_cerr;
  boot_rmse.reserve(resamples);
  boot_cerr.reserve(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    double bsq = 0.0, bc = 0.0;
    for (std::size_t i = 0; i < ok.size(); ++i) {
      const std::size_t pick = rng.below(ok.size());
      bsq += trial_sq[pick];
      if (clustered) bc += ok[pick]->clustering_error;
    }
    boot_rmse.push_back(std::sqrt(bsq / (m * static_cast<double>(targets))));
    boot_cerr.push_back(bc / m);
  }
  s.rmse_se = sample_sd(boot_rmse);
  if (clustered) s.cluster_error_se = sample_sd(boot_cerr);
  return s;
}

inline std::string describe_point(const Point2& p) {
  return csv::format_double(p.x()) + " " + csv::format_double(p.y());
}

}  // namespace detail

/// Runs every (sweep point, trial) pair, possibly on several threads, and
/// reduces the per-trial records in index order. Output depends only on the
/// spec (including the master seed), never on the thread count.
inline ResultTable run_monte_carlo(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t n_points = spec.points.size();
  const std::size_t n_methods = spec.methods.size();
  const std::size_t work = n_points * spec.trials;
  std::vector<TrialRecord> records(work * n_methods);

  std::vector<ReceiverTrack> tracks;
  std::vector<TargetSet> target_sets;
  for (const auto& p : spec.points) {
    tracks.emplace_back(p.track);
    target_sets.emplace_back(p.targets);
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t item = next++; item < work; item = next++) {
      try {
        const std::size_t pi = item / spec.trials;
        const std::size_t trial = item % spec.trials;
        const auto& point = spec.points[pi];
        NoiseModel noise{point.sigma_bearing, point.sigma_polarization,
                         derive_seed(spec.master_seed, pi, trial)};
        std::vector<ObservationFrame> frames;
        bool generated = true;
        try {
          frames = generate_observations(tracks[pi], target_sets[pi], noise,
                                         static_cast<std::uint32_t>(trial));
        } catch (const Error&) {
          generated = false;
        }
        ClusterSettings cluster = spec.cluster;
        cluster.seed = derive_seed(noise.seed, 0x6b6dULL);
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
          TrialRecord rec;
          if (generated) {
            rec = detail::run_method(spec.methods[mi], frames, tracks[pi], point.targets, cluster);
          } else {
            rec.failed = true;
            rec.method = spec.methods[mi];
            rec.squared_errors.assign(point.targets.size(),
                                      std::numeric_limits<double>::quiet_NaN());
          }
          rec.point = pi;
          rec.trial = trial;
          records[item * n_methods + mi] = std::move(rec);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::size_t threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(work, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ResultTable table;
  table.meta.emplace_back("preset", spec.preset);
  table.meta.emplace_back("seed", std::to_string(spec.master_seed));
  table.meta.emplace_back("trials", std::to_string(spec.trials));
  table.meta.emplace_back("bootstrap_resamples", std::to_string(spec.bootstrap_resamples));
  table.meta.emplace_back("solver",
                          "levenberg-marquardt max_iterations=" +
                              std::to_string(spec.cluster.solver.max_iterations) +
                              " cost_tolerance=" +
                              csv::format_double(spec.cluster.solver.cost_tolerance) +
                              " step_tolerance_m=" +
                              csv::format_double(spec.cluster.solver.step_tolerance));
  table.meta.emplace_back("rmse_matching", "estimates matched to targets by minimum total squared distance");
  for (const auto& kv : spec.meta) table.meta.push_back(kv);

  const std::size_t n_targets = spec.points.front().targets.size();
  table.columns.push_back(spec.sweep_column);
  for (std::size_t t = 0; t < n_targets; ++t) {
    table.columns.push_back("target" + std::to_string(t) + "_x_m");
    table.columns.push_back("target" + std::to_string(t) + "_y_m");
  }
  table.columns.push_back("sigma_bearing_deg");
  for (Method m : spec.methods) {
    const auto name = method_name(m);
    table.columns.push_back("rmse_" + name + "_m");
    table.columns.push_back("rmse_" + name + "_se_m");
    if (n_targets > 1) {
      for (std::size_t t = 0; t < n_targets; ++t) {
        table.columns.push_back("rmse_" + name + "_target" + std::to_string(t) + "_m");
      }
    }
    if (is_clustering(m)) {
      table.columns.push_back("cluster_error_" + name);
      table.columns.push_back("cluster_error_" + name + "_se");
    }
    table.columns.push_back("mean_iterations_" + name);
    table.columns.push_back("failures_" + name);
  }
  table.columns.push_back("crlb_angular");
  table.columns.push_back("crlb_position_m");
  table.columns.push_back("trials");

  for (std::size_t pi = 0; pi < n_points; ++pi) {
    const auto& point = spec.points[pi];
    if (point.targets.size() != n_targets) {
      throw InvalidConfiguration("every sweep point must have the same number of targets");
    }
    std::vector<double> row{point.value};
    for (const auto& t : point.targets) {
      row.push_back(t.position.x());
      row.push_back(t.position.y());
    }
    row.push_back(point.sigma_bearing * (180.0 / kPi));
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      std::vector<const TrialRecord*> recs;
      for (std::size_t trial = 0; trial < spec.trials; ++trial) {
        recs.push_back(&records[(pi * spec.trials + trial) * n_methods + mi]);
      }
      const auto s = detail::summarize(recs, n_targets, spec.bootstrap_resamples,
                                       derive_seed(spec.master_seed, pi, mi, 0xB007ULL));
      row.push_back(s.rmse);
      row.push_back(s.rmse_se);
      if (n_targets > 1) {
        for (std::size_t t = 0; t < n_targets; ++t) {
          row.push_back(s.rmse_per_target.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                  : s.rmse_per_target[t]);
        }
      }
      if (is_clustering(spec.methods[mi])) {
        row.push_back(s.cluster_error);
        row.push_back(s.cluster_error_se);
      }
      row.push_back(s.mean_iterations);
      row.push_back(static_cast<double>(s.failures));
    }
    const auto [angular, position] = detail::pooled_bounds(point);
    row.push_back(angular);
    row.push_back(position);
    row.push_back(static_cast<double>(spec.trials));
    table.rows.push_back(std::move(row));
  }
  table.records = std::move(records);
  return table;
}

// ---------------------------------------------------------------------------
// Campaign presets

/// Overrides shared by every preset.
struct PresetOptions {
  std::size_t trials = 500;
  std::uint64_t seed = kDefaultSeed;
  std::size_t threads = 0;
  /// Bearing noise for presets with a fixed noise level (radians).
  double sigma_bearing = deg_to_rad(2.0);
  /// Polarization noise; unset ties it to the bearing noise.
  std::optional<double> sigma_polarization;
  /// Replaces the preset's sweep values (preset display units).
  std::optional<std::vector<double>> sweep;
  ClusterSettings cluster;
};

inline constexpr double kTrackLengthM = 30000.0;
inline constexpr std::size_t kTrackSamples = 100;

inline std::vector<Point2> reference_track() {
  return generate_track(LinearPreset{{0, 0}, {kTrackLengthM, 0}, kTrackSamples}).positions();
}

/// Polarizations of the two-target campaigns: gamma and eta each 40 degrees
/// apart.
inline std::vector<Polarization> two_target_polarizations() {
  return {{deg_to_rad(25.0), deg_to_rad(-20.0)}, {deg_to_rad(65.0), deg_to_rad(20.0)}};
}

namespace detail {

inline ExperimentSpec base_spec(std::string preset, std::string column,
                                const PresetOptions& opt) {
  ExperimentSpec spec;
  spec.preset = std::move(preset);
  spec.sweep_column = std::move(column);
  spec.trials = opt.trials;
  spec.master_seed = opt.seed;
  spec.threads = opt.threads;
  spec.cluster = opt.cluster;
  spec.meta.emplace_back("track", "linear 0 0 -> 30000 0 m, 100 samples");
  return spec;
}

inline double sigma_pol(const PresetOptions& opt, double sigma_bearing) {
  return opt.sigma_polarization.value_or(sigma_bearing);
}

inline void add_noise_meta(ExperimentSpec& spec, const PresetOptions& opt) {
  spec.meta.emplace_back("sigma_bearing_deg", csv::format_double(rad_to_deg(opt.sigma_bearing)));
  spec.meta.emplace_back("sigma_polarization_deg",
                         opt.sigma_polarization
                             ? csv::format_double(rad_to_deg(*opt.sigma_polarization))
                             : std::string("tied to sigma_bearing"));
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(lo * std::pow(hi / lo, t));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace detail

/// Target at x = 15 km, y swept logarithmically from 1 to 100 km.
inline ExperimentSpec y_sweep_spec(const PresetOptions& opt = {}) {
  auto spec = detail::base_spec("y-sweep", "target_y_km", opt);
  detail::add_noise_meta(spec, opt);
  spec.methods = {Method::kNls};
  for (double y_km : opt.sweep.value_or(detail::log_grid(1.0, 100.0, 8))) {
    spec.points.push_back({y_km, reference_track(), {Target{{15000.0, y_km * 1000.0}, {}}},
                           opt.sigma_bearing, detail::sigma_pol(opt, opt.sigma_bearing)});
  }
  return spec;
}

/// Target at y = 15 km, x stepped from 15 to 40 km.
inline ExperimentSpec x_sweep_spec(const PresetOptions& opt = {}) {
  auto spec = detail::base_spec("x-sweep", "target_x_km", opt);
  detail::add_noise_meta(spec, opt);
  spec.methods = {Method::kNls};
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(15.0 + 2.5 * i);
  for (double x_km : opt.sweep.value_or(xs)) {
    spec.points.push_back({x_km, reference_track(), {Target{{x_km * 1000.0, 15000.0}, {}}},
                           opt.sigma_bearing, detail::sigma_pol(opt, opt.sigma_bearing)});
  }
  return spec;
}

/// NLS, OV and TLS against both bounds over a bearing-noise sweep, target
/// at (15, 15) km.
inline ExperimentSpec estimator_comparison_spec(const PresetOptions& opt = {}) {
  auto spec = detail::base_spec("estimator-comparison", "sigma_deg", opt);
  spec.meta.emplace_back("target_m", "15000 15000");
  spec.methods = {Method::kNls, Method::kOv, Method::kTls};
  for (double s_deg : opt.sweep.value_or(std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0})) {
    const double s = deg_to_rad(s_deg);
    spec.points.push_back({s_deg, reference_track(), {Target{{15000.0, 15000.0}, {}}}, s,
                           detail::sigma_pol(opt, s)});
  }
  return spec;
}

inline constexpr double kOrientationRadiusM = 3000.0;

/// Two targets on opposite ends of a diameter of a circle centered at
/// (17.5, 15) km, rotated through 18 orientations.
inline ExperimentSpec orientation_sweep_spec(Method algorithm, const PresetOptions& opt = {}) {
  if (!is_clustering(algorithm)) {
    throw InvalidConfiguration("orientation sweep needs a clustering algorithm");
  }
  auto spec = detail::base_spec("orientation-sweep", "orientation_deg", opt);
  detail::add_noise_meta(spec, opt);
  spec.meta.emplace_back("algorithm", method_name(algorithm));
  spec.meta.emplace_back("circle_center_m", "17500 15000");
  spec.meta.emplace_back("circle_radius_m", csv::format_double(kOrientationRadiusM));
  spec.meta.emplace_back("polarizations_deg", "gamma/eta 25/-20 and 65/20");
  spec.methods = {algorithm};
  std::vector<double> angles;
  for (int i = 0; i < 18; ++i) angles.push_back(10.0 * i);
  const auto pols = two_target_polarizations();
  const Point2 center(17500.0, 15000.0);
  for (double a_deg : opt.sweep.value_or(angles)) {
    const double a = deg_to_rad(a_deg);
    const Point2 arm = kOrientationRadiusM * Point2(std::cos(a), std::sin(a));
    spec.points.push_back({a_deg, reference_track(),
                           {Target{center + arm, pols[0]}, Target{center - arm, pols[1]}},
                           opt.sigma_bearing, detail::sigma_pol(opt, opt.sigma_bearing)});
  }
  return spec;
}

/// Clustering error of both algorithms over a log grid of noise levels,
/// targets at (14.5, 15) and (20.5, 15) km.
inline ExperimentSpec noise_sweep_spec(const PresetOptions& opt = {}) {
  auto spec = detail::base_spec("noise-sweep", "sigma_deg", opt);
  const auto pols = two_target_polarizations();
  const std::vector<Target> targets{Target{{14500.0, 15000.0}, pols[0]},
                                    Target{{20500.0, 15000.0}, pols[1]}};
  spec.meta.emplace_back("targets_m", detail::describe_point(targets[0].position) + "; " +
                                          detail::describe_point(targets[1].position));
  spec.meta.emplace_back("polarizations_deg", "gamma/eta 25/-20 and 65/20");
  spec.meta.emplace_back("sigma_polarization_deg",
                         opt.sigma_polarization
                             ? csv::format_double(rad_to_deg(*opt.sigma_polarization))
                             : std::string("tied to sigma_bearing"));
  spec.methods = {Method::kClusterByBearing, Method::kClusterByPolarization};
  for (double s_deg : opt.sweep.value_or(detail::log_grid(0.1, 10.0, 7))) {
    const double s = deg_to_rad(s_deg);
    spec.points.push_back({s_deg, reference_track(), targets, s, detail::sigma_pol(opt, s)});
  }
  return spec;
}

inline ResultTable preset_y_sweep(const PresetOptions& opt = {}) {
  return run_monte_carlo(y_sweep_spec(opt));
}
inline ResultTable preset_x_sweep(const PresetOptions& opt = {}) {
  return run_monte_carlo(x_sweep_spec(opt));
}
inline ResultTable preset_estimator_comparison(const PresetOptions& opt = {}) {
  return run_monte_carlo(estimator_comparison_spec(opt));
}
inline ResultTable preset_orientation_sweep(Method algorithm, const PresetOptions& opt = {}) {
  return run_monte_carlo(orientation_sweep_spec(algorithm, opt));
}
inline ResultTable preset_noise_sweep(const PresetOptions& opt = {}) {
  return run_monte_carlo(noise_sweep_spec(opt));
}

}  // namespace botl
