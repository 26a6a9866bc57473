#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "botl/errors.hpp"
#include "botl/geometry.hpp"
#include "botl/rng.hpp"
#include "botl/scenario.hpp"

namespace botl {

/// Gaussian noise on the direction-of-arrival tuple. sigma_polarization is
/// applied independently to gamma and eta.
struct NoiseModel {
  double sigma_bearing = 0.0;       // radians
  double sigma_polarization = 0.0;  // radians
  std::uint64_t seed = 0;
};

/// One unlabeled DoA measurement. Polarization is absent for bearing-only
/// sensors.
struct Measurement {
  double theta = 0.0;  // azimuth, (-pi, pi]
  std::optional<Polarization> polarization;
};

/// All measurements taken at one time step, in shuffled order.
/// truth_labels[slot] is the target that produced measurements[slot]; it is
/// kept for scoring and never read by the clustering code.
struct ObservationFrame {
  std::size_t step = 0;
  std::vector<Measurement> measurements;
  std::vector<std::size_t> truth_labels;
};

/// Bearing of `target` from `receiver` in (-pi, pi], counterclockwise from +x.
inline double true_bearing(const Point2& receiver, const Point2& target) {
  if (receiver == target) {
    throw DegenerateGeometry("bearing undefined: receiver and target coincide");
  }
  return bearing_unchecked(receiver, target);
}

/// Simulates one frame per receiver position. Each frame draws from its own
/// substream keyed by (noise.seed, trial, step), so a frame's content does not
/// depend on which other frames were generated.
inline ObservationFrame generate_frame(const ReceiverTrack& track, const TargetSet& targets,
                                       const NoiseModel& noise, std::size_t step,
                                       std::uint32_t trial = 0) {
  RandomStream rng(noise.seed, {StreamPurpose::kObservation, trial,
                                static_cast<std::uint32_t>(step)});
  const std::size_t n = targets.size();
  std::vector<Measurement> clean(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& target = targets[t];
    const double theta = true_bearing(track[step], target.position);
    Polarization pol;
    const double d_theta = rng.normal();
    const double d_gamma = rng.normal();
    const double d_eta = rng.normal();
    pol.gamma = std::clamp(target.polarization.gamma + noise.sigma_polarization * d_gamma, 0.0,
                           kPi / 2);
    pol.eta = wrap_angle(target.polarization.eta + noise.sigma_polarization * d_eta);
    clean[t] = {wrap_angle(theta + noise.sigma_bearing * d_theta), pol};
  }

  ObservationFrame frame;
  frame.step = step;
  frame.truth_labels.resize(n);
  std::iota(frame.truth_labels.begin(), frame.truth_labels.end(), std::size_t{0});
  rng.shuffle(std::span(frame.truth_labels));
  frame.measurements.reserve(n);
  for (std::size_t slot = 0; slot < n; ++slot) {
    frame.measurements.push_back(clean[frame.truth_labels[slot]]);
  }
  return frame;
}

inline std::vector<ObservationFrame> generate_observations(const ReceiverTrack& track,
                                                           const TargetSet& targets,
                                                           const NoiseModel& noise,
                                                           std::uint32_t trial = 0) {
  if (!(noise.sigma_bearing >= 0.0) || !(noise.sigma_polarization >= 0.0)) {
    throw InvalidInput("noise standard deviations must be non-negative");
  }
  const auto report = check_observability(track, targets);
  if (!report.assumption1()) throw PreconditionError(report.describe());
  std::vector<ObservationFrame> frames;
  frames.reserve(track.size());
  for (std::size_t i = 0; i < track.size(); ++i) {
    frames.push_back(generate_frame(track, targets, noise, i, trial));
  }
  return frames;
}

}  // namespace botl
