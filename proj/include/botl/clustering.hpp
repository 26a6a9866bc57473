#pragma once

// Data association for unlabeled multi-target bearings: iterative labeling by
// predicted bearing, and non-iterative labeling by polarization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "botl/assignment.hpp"
#include "botl/errors.hpp"
#include "botl/estimators.hpp"
#include "botl/geometry.hpp"
#include "botl/kmeans.hpp"
#include "botl/measurement.hpp"
#include "botl/scenario.hpp"

namespace botl {

/// Circular distance between two angles, in [0, pi].
inline double angular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

/// Bearing from `receiver` to each previous position estimate.
inline std::vector<double> predict_bearings(std::span<const Point2> estimates,
                                            const Point2& receiver) {
  std::vector<double> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) out.push_back(true_bearing(receiver, e));
  return out;
}

/// slot_of_target[frame][target] is the measurement slot labeled as that
/// target in that frame. Each row is a permutation.
struct LabelAssignment {
  std::vector<std::vector<std::size_t>> slot_of_target;

  std::size_t frames() const { return slot_of_target.size(); }
  std::size_t targets() const { return slot_of_target.empty() ? 0 : slot_of_target[0].size(); }

  std::vector<std::size_t> target_of_slot(std::size_t frame) const {
    const auto& row = slot_of_target.at(frame);
    std::vector<std::size_t> out(row.size());
    for (std::size_t t = 0; t < row.size(); ++t) out[row[t]] = t;
    return out;
  }

  bool is_bijective() const {
    for (const auto& row : slot_of_target) {
      std::vector<char> seen(row.size(), 0);
      for (std::size_t s : row) {
        if (s >= row.size() || seen[s]) return false;
        seen[s] = 1;
      }
    }
    return true;
  }
};

struct ClusterSettings {
  SolverSettings solver;
  /// Frames used to self-start the iterative method.
  std::size_t self_start_window = 5;
  /// Re-localize every `stride` frames (the last frame always re-localizes).
  std::size_t stride = 1;
  KMeansSettings kmeans;
  std::uint64_t seed = 0;
};

struct ClusteringResult {
  LabelAssignment labels;
  std::vector<PositionEstimate> estimates;
};

namespace detail {

inline std::size_t validate_frames(std::span<const ObservationFrame> frames,
                                   const ReceiverTrack& track) {
  if (frames.empty()) throw InvalidInput("no observation frames");
  if (frames.size() != track.size()) {
    throw InvalidInput("frame count (" + std::to_string(frames.size()) +
                       ") does not match track length (" + std::to_string(track.size()) + ")");
  }
  const std::size_t n = frames[0].measurements.size();
  if (n == 0) throw InvalidInput("frames contain no measurements");
  for (const auto& f : frames) {
    if (f.measurements.size() != n) {
      throw InvalidInput("every frame must hold the same number of measurements");
    }
  }
  return n;
}

/// Per-frame bijection: match each frame's slots to the given centroids.
template <int Dim, typename FeatureOf>
std::vector<std::size_t> match_to_centroids(const ObservationFrame& frame,
                                            const std::vector<Feature<Dim>>& centroids,
                                            FeatureOf feature_of) {
  const auto n = static_cast<Eigen::Index>(centroids.size());
  CostMatrix cost(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index s = 0; s < n; ++s) {
      cost(k, s) = (feature_of(frame.measurements[static_cast<std::size_t>(s)]) -
                    centroids[static_cast<std::size_t>(k)])
                       .norm();
    }
  }
  return assign(cost).col_of_row;
}

inline BearingStream stream_for(std::span<const ObservationFrame> frames,
                                const ReceiverTrack& track, const LabelAssignment& labels,
                                std::size_t target, std::size_t frame_count) {
  std::vector<BearingSample> samples;
  samples.reserve(frame_count);
  for (std::size_t j = 0; j < frame_count; ++j) {
    samples.push_back(
        {track[j], frames[j].measurements[labels.slot_of_target[j][target]].theta});
  }
  return BearingStream(std::move(samples));
}

inline Feature<2> azimuth_feature(const Measurement& m) {
  return Feature<2>(std::cos(m.theta), std::sin(m.theta));
}

/// Polarization embedding: gamma scaled to [0, 1], eta on a circle of
/// radius 1/2.
inline Feature<3> polarization_feature(const Measurement& m) {
  const auto& p = *m.polarization;
  return Feature<3>(p.gamma * (2.0 / kPi), 0.5 * std::cos(p.eta), 0.5 * std::sin(p.eta));
}

/// Self-start: k-means on the azimuths of the first frames (embedded on the
/// unit circle), then one fit per cluster.
inline std::vector<Point2> self_start(std::span<const ObservationFrame> frames,
                                      const ReceiverTrack& track, std::size_t n,
                                      const ClusterSettings& settings) {
  const std::size_t window = settings.self_start_window;
  if (window > frames.size()) {
    throw InvalidConfiguration("self-start window (" + std::to_string(window) +
                               ") exceeds the number of frames (" +
                               std::to_string(frames.size()) + ")");
  }
  if (window < 2) throw InvalidConfiguration("self-start window must be at least 2 frames");

  std::vector<Feature<2>> points;
  points.reserve(window * n);
  for (std::size_t j = 0; j < window; ++j) {
    for (const auto& m : frames[j].measurements) points.push_back(azimuth_feature(m));
  }
  const auto km = kmeans<2>(points, n, settings.seed, settings.kmeans);
  LabelAssignment labels;
  for (std::size_t j = 0; j < window; ++j) {
    labels.slot_of_target.push_back(
        match_to_centroids<2>(frames[j], km.centroids, azimuth_feature));
  }
  // A short window often leaves the range unobservable. The seed only has to
  // predict bearings, so a failed fit falls back to a far point along the
  // cluster's azimuth; later re-fits replace it.
  Point2 origin = Point2::Zero();
  double extent = 0.0;
  for (std::size_t j = 0; j < window; ++j) origin += track[j];
  origin /= static_cast<double>(window);
  for (std::size_t j = 0; j < window; ++j) extent = std::max(extent, (track[j] - origin).norm());
  const double far_range = 100.0 * std::max(2.0 * extent, 1.0);

  std::vector<Point2> init;
  init.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      init.push_back(
          nls_localize(stream_for(frames, track, labels, k, window), settings.solver).position);
    } catch (const NumericalError&) {
      Point2 dir = km.centroids[k];
      if (!(dir.norm() > 1e-9)) dir = azimuth_feature(frames[0].measurements[labels.slot_of_target[0][k]]);
      init.push_back(origin + far_range * dir.normalized());
    }
  }
  return init;
}

}  // namespace detail

/// Iterative association: at each frame, predict every target's bearing
/// from its current estimate, match predictions to measurements by minimum
/// total angular distance, append the labels, and re-fit every target on all
/// measurements labeled so far. Past labels are never revised.
inline ClusteringResult cluster_by_bearing(
    std::span<const ObservationFrame> frames, const ReceiverTrack& track,
    const ClusterSettings& settings = {},
    std::optional<std::vector<Point2>> init_estimates = std::nullopt) {
  const std::size_t n = detail::validate_frames(frames, track);
  const std::size_t t_count = frames.size();
  if (settings.stride < 1) throw InvalidConfiguration("re-localization stride must be >= 1");

  std::vector<Point2> current;
  if (init_estimates) {
    if (init_estimates->size() != n) {
      throw InvalidInput("expected " + std::to_string(n) + " initial estimates");
    }
    current = *init_estimates;
  } else {
    current = detail::self_start(frames, track, n, settings);
  }

  ClusteringResult result;
  result.labels.slot_of_target.reserve(t_count);
  result.estimates.assign(n, PositionEstimate{});
  for (std::size_t k = 0; k < n; ++k) result.estimates[k].position = current[k];

  bool have_two_positions = false;
  CostMatrix cost(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < t_count; ++j) {
    const auto predicted = predict_bearings(current, track[j]);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < n; ++s) {
        cost(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)) =
            angular_distance(predicted[k], frames[j].measurements[s].theta);
      }
    }
    result.labels.slot_of_target.push_back(assign(cost).col_of_row);

    have_two_positions = have_two_positions || track[j] != track[0];
    const bool last = j + 1 == t_count;
    if (!have_two_positions || (!last && (j + 1) % settings.stride != 0)) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const auto stream = detail::stream_for(frames, track, result.labels, k, j + 1);
      if (last) {
        result.estimates[k] = nls_localize(stream, settings.solver);
      } else {
        try {
          result.estimates[k] = nls_localize(stream, settings.solver);
        } catch (const NumericalError&) {
          continue;  // keep the previous estimate until more data arrives
        }
      }
      current[k] = result.estimates[k].position;
    }
  }
  return result;
}

/// Non-iterative association: pool every polarization measurement, k-means
/// with k = number of targets, then match each frame's slots to the
/// centroids one-to-one and fit each cluster once.
inline ClusteringResult cluster_by_polarization(std::span<const ObservationFrame> frames,
                                                const ReceiverTrack& track,
                                                const ClusterSettings& settings = {}) {
  const std::size_t n = detail::validate_frames(frames, track);
  std::vector<Feature<3>> points;
  points.reserve(frames.size() * n);
  for (const auto& f : frames) {
    for (const auto& m : f.measurements) {
      if (!m.polarization) {
        throw InvalidInput("frame " + std::to_string(f.step) +
                           " lacks polarization measurements");
      }
      points.push_back(detail::polarization_feature(m));
    }
  }
  // Sorting the pooled features and the centroids makes the clustering a
  // function of the measurement multiset, independent of frame order.
  const auto lex_less = [](const Feature<3>& a, const Feature<3>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  std::sort(points.begin(), points.end(), lex_less);
  auto km = kmeans<3>(points, n, settings.seed, settings.kmeans);
  std::sort(km.centroids.begin(), km.centroids.end(), lex_less);

  ClusteringResult result;
  result.labels.slot_of_target.reserve(frames.size());
  for (const auto& f : frames) {
    result.labels.slot_of_target.push_back(
        detail::match_to_centroids<3>(f, km.centroids, detail::polarization_feature));
  }
  result.estimates.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.estimates.push_back(nls_localize(
        detail::stream_for(frames, track, result.labels, k, frames.size()), settings.solver));
  }
  return result;
}

/// Fraction of measurements whose label disagrees with the truth, minimized
/// over all relabelings of the clusters. truth[frame][slot] is the true
/// target of each slot.
inline double clustering_error(const LabelAssignment& labels,
                               const std::vector<std::vector<std::size_t>>& truth) {
  if (labels.frames() != truth.size() || labels.frames() == 0) {
    throw InvalidInput("label and truth frame counts differ");
  }
  const std::size_t n = labels.targets();
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n));
  double total = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (truth[j].size() != n || labels.slot_of_target[j].size() != n) {
      throw InvalidInput("label and truth shapes differ at frame " + std::to_string(j));
    }
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t slot = labels.slot_of_target[j][k];
      if (slot >= n || truth[j][slot] >= n) throw InvalidInput("label index out of range");
      confusion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(truth[j][slot])) += 1.0;
      total += 1.0;
    }
  }
  // Best relabeling = maximum-weight matching on the confusion counts.
  const CostMatrix cost = confusion.maxCoeff() - confusion.array();
  const auto best = assign(cost);
  double agree = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    agree += confusion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(best.col_of_row[k]));
  }
  return (total - agree) / total;
}

inline double clustering_error(const LabelAssignment& labels,
                               std::span<const ObservationFrame> frames) {
  std::vector<std::vector<std::size_t>> truth;
  truth.reserve(frames.size());
  for (const auto& f : frames) truth.push_back(f.truth_labels);
  return clustering_error(labels, truth);
}

}  // namespace botl
