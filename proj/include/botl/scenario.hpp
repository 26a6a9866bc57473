#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "botl/errors.hpp"
#include "botl/geometry.hpp"

namespace botl {

/// Ordered receiver positions, one per time step. Holds at least two
/// samples; whether they are distinct is reported by check_observability.
class ReceiverTrack {
 public:
  explicit ReceiverTrack(std::vector<Point2> positions) : positions_(std::move(positions)) {
    if (positions_.size() < 2) {
      throw InvalidInput("receiver track needs at least 2 positions, got " +
                         std::to_string(positions_.size()));
    }
    for (const auto& p : positions_) {
      if (!p.allFinite()) throw InvalidInput("receiver track contains a non-finite position");
    }
  }

  std::size_t size() const { return positions_.size(); }
  const Point2& operator[](std::size_t i) const { return positions_[i]; }
  const std::vector<Point2>& positions() const { return positions_; }

  ReceiverTrack transformed(const RigidMotion& motion) const {
    std::vector<Point2> out;
    out.reserve(positions_.size());
    for (const auto& p : positions_) out.push_back(motion.apply(p));
    return ReceiverTrack(std::move(out));
  }

 private:
  std::vector<Point2> positions_;
};

/// Polarization state of an emitter: auxiliary polarization angle gamma in
/// [0, pi/2] and phase difference eta in (-pi, pi], radians.
struct Polarization {
  double gamma = 0.0;
  double eta = 0.0;
};

struct Target {
  Point2 position = Point2::Zero();
  Polarization polarization;
};

/// Static emitters. Positions are pairwise distinct.
class TargetSet {
 public:
  explicit TargetSet(std::vector<Target> targets) : targets_(std::move(targets)) {
    if (targets_.empty()) throw InvalidInput("target set must contain at least one target");
    for (std::size_t i = 0; i < targets_.size(); ++i) {
      const auto& t = targets_[i];
      const std::string tag = "target " + std::to_string(i);
      if (!t.position.allFinite()) throw InvalidInput(tag + ": non-finite position");
      if (!(t.polarization.gamma >= 0.0 && t.polarization.gamma <= kPi / 2)) {
        throw InvalidInput(tag + ": gamma must lie in [0, pi/2]");
      }
      if (!(t.polarization.eta > -kPi && t.polarization.eta <= kPi)) {
        throw InvalidInput(tag + ": eta must lie in (-pi, pi]");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (targets_[j].position == t.position) {
          throw InvalidInput(tag + " coincides with target " + std::to_string(j));
        }
      }
    }
  }

  std::size_t size() const { return targets_.size(); }
  const Target& operator[](std::size_t i) const { return targets_[i]; }
  const std::vector<Target>& targets() const { return targets_; }

  TargetSet transformed(const RigidMotion& motion) const {
    auto out = targets_;
    for (auto& t : out) t.position = motion.apply(t.position);
    return TargetSet(std::move(out));
  }

 private:
  std::vector<Target> targets_;
};

struct LinearPreset {
  Point2 start = Point2::Zero();
  Point2 end = Point2::Zero();
  std::size_t samples = 0;
};

/// Arc of a circle, angles in radians counterclockwise from +x.
struct CircularPreset {
  Point2 center = Point2::Zero();
  double radius = 0.0;
  double arc_start = 0.0;
  double arc_stop = 0.0;
  std::size_t samples = 0;
};

using TrajectoryPreset = std::variant<LinearPreset, CircularPreset>;

/// Evenly spaced samples along a straight segment or a circular arc, both
/// endpoints included.
inline ReceiverTrack generate_track(const TrajectoryPreset& preset) {
  return std::visit(
      [](const auto& p) -> ReceiverTrack {
        using P = std::decay_t<decltype(p)>;
        if (p.samples < 2) throw InvalidPreset("trajectory needs at least 2 samples");
        std::vector<Point2> out;
        out.reserve(p.samples);
        const double last = static_cast<double>(p.samples - 1);
        if constexpr (std::is_same_v<P, LinearPreset>) {
          if (!p.start.allFinite() || !p.end.allFinite()) {
            throw InvalidPreset("linear trajectory endpoints must be finite");
          }
          if (p.start == p.end) throw InvalidPreset("linear trajectory has zero length");
          for (std::size_t i = 0; i < p.samples; ++i) {
            const double t = static_cast<double>(i) / last;
            out.emplace_back(std::lerp(p.start.x(), p.end.x(), t),
                             std::lerp(p.start.y(), p.end.y(), t));
          }
        } else {
          if (!p.center.allFinite() || !std::isfinite(p.radius) ||
              !std::isfinite(p.arc_start) || !std::isfinite(p.arc_stop)) {
            throw InvalidPreset("circular trajectory parameters must be finite");
          }
          if (!(p.radius > 0.0)) throw InvalidPreset("circular trajectory radius must be positive");
          if (p.arc_start == p.arc_stop) throw InvalidPreset("circular trajectory has zero arc");
          for (std::size_t i = 0; i < p.samples; ++i) {
            const double a = std::lerp(p.arc_start, p.arc_stop, static_cast<double>(i) / last);
            out.emplace_back(p.center.x() + p.radius * std::cos(a),
                             p.center.y() + p.radius * std::sin(a));
          }
        }
        return ReceiverTrack(std::move(out));
      },
      preset);
}

/// Relative singular-value threshold below which a point cloud counts as
/// colinear.
inline constexpr double kColinearTolerance = 1e-9;

/// True when all points lie on one line (or coincide). Uses the singular
/// values of the centered cloud.
inline bool points_colinear(const std::vector<Point2>& points) {
  Eigen::MatrixX2d centered(static_cast<Eigen::Index>(points.size()), 2);
  Point2 mean = Point2::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered.row(static_cast<Eigen::Index>(i)) = (points[i] - mean).transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixX2d> svd(centered);
  const auto& s = svd.singularValues();
  if (s.size() < 2 || s(0) == 0.0) return true;
  return s(1) < kColinearTolerance * s(0);
}

struct ObservabilityReport {
  /// More than one distinct receiver position.
  bool distinct_positions = false;
  /// Per target: receiver positions and the target are not colinear.
  std::vector<bool> target_not_colinear;

  bool assumption1() const { return distinct_positions; }
  bool assumption2() const {
    for (bool ok : target_not_colinear) {
      if (!ok) return false;
    }
    return true;
  }
  bool ok() const { return assumption1() && assumption2(); }

  /// Human-readable summary of every failed check; empty when all pass.
  std::string describe() const {
    std::string msg;
    if (!distinct_positions) {
      msg += "assumption 1 violated: fewer than two distinct receiver positions";
    }
    for (std::size_t i = 0; i < target_not_colinear.size(); ++i) {
      if (target_not_colinear[i]) continue;
      if (!msg.empty()) msg += "; ";
      msg += "assumption 2 violated: receiver positions are colinear with target " +
             std::to_string(i);
    }
    return msg;
  }
};

/// Checks that a track can localize the targets: at least two distinct
/// receiver positions, and no target on the line through a colinear track.
inline ObservabilityReport check_observability(const ReceiverTrack& track,
                                               const TargetSet& targets) {
  ObservabilityReport report;
  const auto& pos = track.positions();
  for (std::size_t i = 1; i < pos.size() && !report.distinct_positions; ++i) {
    report.distinct_positions = pos[i] != pos[0];
  }
  std::vector<Point2> cloud = pos;
  cloud.emplace_back();
  for (const auto& t : targets.targets()) {
    cloud.back() = t.position;
    report.target_not_colinear.push_back(!points_colinear(cloud));
  }
  return report;
}

}  // namespace botl
