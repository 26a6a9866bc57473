#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "botl/errors.hpp"
#include "botl/geometry.hpp"
#include "botl/scenario.hpp"

namespace botl {

struct BearingSample {
  Point2 receiver = Point2::Zero();
  double theta = 0.0;  // radians; need not be wrapped
};

/// Labeled bearings for one target: at least two samples taken from at
/// least two distinct receiver positions.
class BearingStream {
 public:
  explicit BearingStream(std::vector<BearingSample> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) {
      throw InvalidInput("bearing stream needs at least 2 samples, got " +
                         std::to_string(samples_.size()));
    }
    bool distinct = false;
    for (const auto& s : samples_) {
      if (!s.receiver.allFinite() || !std::isfinite(s.theta)) {
        throw InvalidInput("bearing stream contains a non-finite value");
      }
      distinct = distinct || s.receiver != samples_.front().receiver;
    }
    if (!distinct) {
      throw NonIdentifiable(
          "assumption 1 violated: bearing stream has a single receiver position");
    }
  }

  std::size_t size() const { return samples_.size(); }
  const BearingSample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<BearingSample>& samples() const { return samples_; }

 private:
  std::vector<BearingSample> samples_;
};

struct PositionEstimate {
  Point2 position = Point2::Zero();
  /// Sum of squared wrapped bearing residuals at `position`, radians^2.
  double final_cost = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Cost after every accepted step, starting with the initial cost. Only
  /// filled when SolverSettings::record_history is set.
  std::vector<double> cost_history;
};

/// Levenberg-Marquardt controls.
struct SolverSettings {
  std::size_t max_iterations = 100;
  double cost_tolerance = 1e-15;  // relative decrease
  double step_tolerance = 1e-8;   // meters
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
  double min_damping = 1e-12;
  double max_damping = 1e12;
  bool record_history = false;

  void validate() const {
    if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
    if (!(cost_tolerance > 0) || !(step_tolerance > 0) || !(initial_damping > 0) ||
        !(damping_factor > 1)) {
      throw InvalidInput("solver tolerances and damping must be positive");
    }
  }
};

/// Bearing least-squares objective: sum of squared wrapped residuals.
/// Returns +inf if `position` sits on a receiver.
inline double bearing_cost(const BearingStream& stream, const Point2& position) {
  double cost = 0.0;
  for (const auto& s : stream.samples()) {
    if (s.receiver == position) return std::numeric_limits<double>::infinity();
    const double r = wrap_angle(s.theta - bearing_unchecked(s.receiver, position));
    cost += r * r;
  }
  return cost;
}

/// Wrapped residuals theta_j - bearing(receiver_j, position).
inline Eigen::VectorXd bearing_residuals(const BearingStream& stream, const Point2& position) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(stream.size()));
  for (std::size_t j = 0; j < stream.size(); ++j) {
    const auto& s = stream[j];
    r(static_cast<Eigen::Index>(j)) =
        wrap_angle(s.theta - bearing_unchecked(s.receiver, position));
  }
  return r;
}

/// Analytic Jacobian of bearing_residuals with respect to position.
inline Eigen::MatrixX2d residual_jacobian(const BearingStream& stream, const Point2& position) {
  Eigen::MatrixX2d jac(static_cast<Eigen::Index>(stream.size()), 2);
  for (std::size_t j = 0; j < stream.size(); ++j) {
    const Point2 d = position - stream[j].receiver;
    const double rho2 = d.squaredNorm();
    // d/dx atan2(dy, dx) = -dy / rho^2, d/dy = dx / rho^2; residual negates.
    jac(static_cast<Eigen::Index>(j), 0) = d.y() / rho2;
    jac(static_cast<Eigen::Index>(j), 1) = -d.x() / rho2;
  }
  return jac;
}

namespace detail {

inline std::vector<Point2> receivers_of(const BearingStream& stream) {
  std::vector<Point2> out;
  out.reserve(stream.size());
  for (const auto& s : stream.samples()) out.push_back(s.receiver);
  return out;
}

/// Unit direction of the best-fit line through the points.
inline Point2 principal_direction(const std::vector<Point2>& points) {
  Point2 mean = Point2::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (const auto& p : points) scatter += (p - mean) * (p - mean).transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
  return eig.eigenvectors().col(1);
}

/// Receivers on one line and every bearing along that line: the target can
/// sit anywhere on it.
inline bool stream_colinear(const BearingStream& stream) {
  const auto receivers = receivers_of(stream);
  if (!points_colinear(receivers)) return false;
  const Point2 dir = principal_direction(receivers);
  for (const auto& s : stream.samples()) {
    const double cross = dir.x() * std::sin(s.theta) - dir.y() * std::cos(s.theta);
    if (std::abs(cross) > kColinearTolerance) return false;
  }
  return true;
}

inline bool normal_matrix_singular(const Eigen::Matrix2d& n) {
  const double tr = n.trace();
  return !(tr > 0.0) || n.determinant() <= 1e-12 * tr * tr;
}

/// Exact change in bearing_cost when moving from `from` by `step`, given the
/// residuals at `from`. Each bearing increment is taken from the cross and
/// dot products of the old and new lines of sight, so the result stays
/// accurate when the change is far below the rounding error of the cost
/// itself. Returns +inf if the move lands on a receiver.
inline double cost_change(const BearingStream& stream, const Point2& from, const Point2& step,
                          const Eigen::VectorXd& residuals) {
  double change = 0.0;
  for (std::size_t j = 0; j < stream.size(); ++j) {
    const Point2 a = from - stream[j].receiver;
    const Point2 b = a + step;
    if (b.x() == 0.0 && b.y() == 0.0) return std::numeric_limits<double>::infinity();
    const double turn = std::atan2(a.x() * step.y() - a.y() * step.x(), a.dot(b));
    const double r_old = residuals(static_cast<Eigen::Index>(j));
    const double shifted = r_old - turn;
    const double r_new = wrap_angle(shifted);
    const double diff = shifted == r_new ? -turn : r_new - r_old;
    change += diff * (r_new + r_old);
  }
  return change;
}

inline constexpr const char* kColinearMessage =
    "non-identifiable geometry: assumption 2 violated (receivers colinear with the target)";

}  // namespace detail

/// Orthogonal-vector estimate: each bearing gives the line
/// <n_j, X> = <n_j, receiver_j> with n_j = (-sin theta_j, cos theta_j);
/// the lines are intersected in ordinary least squares.
inline PositionEstimate ov_localize(const BearingStream& stream) {
  const auto m = static_cast<Eigen::Index>(stream.size());
  Eigen::MatrixX2d a(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& s = stream[static_cast<std::size_t>(j)];
    const Point2 normal(-std::sin(s.theta), std::cos(s.theta));
    a.row(j) = normal.transpose();
    b(j) = normal.dot(s.receiver);
  }
  if (detail::normal_matrix_singular(a.transpose() * a)) {
    throw NonIdentifiable("orthogonal-vector system is singular (parallel lines of bearing)");
  }
  PositionEstimate est;
  est.position = a.colPivHouseholderQr().solve(b);
  est.final_cost = bearing_cost(stream, est.position);
  est.converged = true;
  return est;
}

/// Total least squares on the orthogonal-vector system: the right singular
/// vector of [A | b] for the smallest singular value, scaled so its last
/// component is -1.
inline PositionEstimate tls_localize(const BearingStream& stream) {
  const auto m = static_cast<Eigen::Index>(stream.size());
  // Extended precision: the offset column is many orders larger than the
  // normals, and the position comes from the small last component of the
  // null vector.
  using Wide = Eigen::Matrix<long double, Eigen::Dynamic, 3>;
  Wide aug(m, 3);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& s = stream[static_cast<std::size_t>(j)];
    const long double nx = -std::sin(static_cast<long double>(s.theta));
    const long double ny = std::cos(static_cast<long double>(s.theta));
    aug(j, 0) = nx;
    aug(j, 1) = ny;
    aug(j, 2) = nx * s.receiver.x() + ny * s.receiver.y();
  }
  const Eigen::JacobiSVD<Wide> svd(aug, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const long double largest = sv(0);
  const long double middle = sv(1);
  const long double smallest = sv.size() > 2 ? sv(2) : 0.0L;
  if (!(middle - smallest > 1e-12 * largest)) {
    throw DegenerateTls("total least squares: smallest singular value is not simple");
  }
  const Eigen::Matrix<long double, 3, 1> v = svd.matrixV().col(2);
  if (std::abs(v(2)) <= 1e-12) {
    throw DegenerateTls("total least squares: null direction has zero last component");
  }
  PositionEstimate est;
  est.position = Point2(static_cast<double>(-v(0) / v(2)), static_cast<double>(-v(1) / v(2)));
  est.final_cost = bearing_cost(stream, est.position);
  est.converged = true;
  return est;
}

/// Nonlinear least-squares position fit (Levenberg-Marquardt with Marquardt
/// diagonal scaling). Finds a local minimum only; the default start is the
/// orthogonal-vector estimate.
inline PositionEstimate nls_localize(const BearingStream& stream,
                                     const SolverSettings& settings = {},
                                     std::optional<Point2> init = std::nullopt) {
  settings.validate();
  if (detail::stream_colinear(stream)) throw NonIdentifiable(detail::kColinearMessage);

  Point2 x;
  if (init) {
    x = *init;
  } else {
    try {
      x = ov_localize(stream).position;
    } catch (const NonIdentifiable&) {
      const auto receivers = detail::receivers_of(stream);
      Point2 centroid = Point2::Zero();
      for (const auto& p : receivers) centroid += p;
      centroid /= static_cast<double>(receivers.size());
      const Point2 dir = detail::principal_direction(receivers);
      x = centroid + Point2(-dir.y(), dir.x());
    }
  }

  PositionEstimate est;
  double cost = bearing_cost(stream, x);
  if (!std::isfinite(cost)) {
    throw DegenerateGeometry("initial position coincides with a receiver");
  }
  if (settings.record_history) est.cost_history.push_back(cost);

  Eigen::VectorXd res = bearing_residuals(stream, x);
  Eigen::MatrixX2d jac = residual_jacobian(stream, x);
  Eigen::Matrix2d normal = jac.transpose() * jac;
  Eigen::Vector2d grad = jac.transpose() * res;
  double lambda = settings.initial_damping;

  while (est.iterations < settings.max_iterations) {
    ++est.iterations;
    Eigen::Matrix2d damped = normal;
    const double floor = 1e-15 * normal.trace();
    damped(0, 0) += lambda * std::max(normal(0, 0), floor);
    damped(1, 1) += lambda * std::max(normal(1, 1), floor);
    const Eigen::Vector2d step = damped.ldlt().solve(-grad);
    if (!step.allFinite()) break;

    const double change = detail::cost_change(stream, x, step, res);
    const bool tiny_step = step.norm() < settings.step_tolerance;
    if (change < 0.0) {
      const double relative_decrease = -change / cost;
      x += step;
      cost += change;
      if (settings.record_history) est.cost_history.push_back(cost);
      lambda = std::max(lambda / settings.damping_factor, settings.min_damping);
      res = bearing_residuals(stream, x);
      jac = residual_jacobian(stream, x);
      normal = jac.transpose() * jac;
      grad = jac.transpose() * res;
      if (tiny_step || relative_decrease < settings.cost_tolerance) {
        est.converged = true;
        break;
      }
    } else if (tiny_step) {
      est.converged = true;
      break;
    } else {
      lambda = std::min(lambda * settings.damping_factor, settings.max_damping);
    }
  }

  if (detail::normal_matrix_singular(residual_jacobian(stream, x).transpose() *
                                     residual_jacobian(stream, x))) {
    throw NonIdentifiable(detail::kColinearMessage);
  }
  est.position = x;
  est.final_cost = bearing_cost(stream, x);
  return est;
}

/// Reading of the angular lower bound's determinant term.
enum class CrlbForm {
  /// (sum cos^2)(sum sin^2) - (sum cos sin)^2, a Gram determinant (>= 0).
  kSquaredSum,
  /// (sum cos^2)(sum sin^2) - sum (cos sin)^2, kept for comparison.
  kAsPrinted,
};

/// Angular bound sigma * sqrt(T) / sqrt(det), with det built from the true
/// bearings of `target` from each receiver. Returns +inf when the geometry
/// has no bearing diversity.
inline double crlb_paper(std::span<const Point2> receivers, const Point2& target, double sigma,
                         CrlbForm form = CrlbForm::kSquaredSum) {
  if (receivers.size() < 2) throw InvalidInput("bound needs at least 2 receiver positions");
  if (!(sigma >= 0.0)) throw InvalidInput("sigma must be non-negative");
  std::vector<double> theta;
  theta.reserve(receivers.size());
  for (const auto& r : receivers) {
    if (r == target) throw DegenerateGeometry("receiver coincides with target");
    theta.push_back(bearing_unchecked(r, target));
  }
  double det = 0.0;
  if (form == CrlbForm::kSquaredSum) {
    // Lagrange identity: the Gram determinant is a sum of squared sines of
    // pairwise bearing differences, exactly zero for identical bearings.
    for (std::size_t i = 0; i < theta.size(); ++i) {
      for (std::size_t j = i + 1; j < theta.size(); ++j) {
        const double s = std::sin(theta[j] - theta[i]);
        det += s * s;
      }
    }
  } else {
    double cc = 0.0, ss = 0.0, cs2 = 0.0;
    for (double t : theta) {
      const double c = std::cos(t), s = std::sin(t);
      cc += c * c;
      ss += s * s;
      cs2 += (c * s) * (c * s);
    }
    det = cc * ss - cs2;
  }
  if (det <= 1e-15) return std::numeric_limits<double>::infinity();
  return sigma * std::sqrt(static_cast<double>(theta.size())) / std::sqrt(det);
}

/// Position bound in meters: sqrt(trace(F^-1)) with bearing Fisher
/// information F = sigma^-2 * sum_j u_j u_j^T / r_j^2, u_j normal to the
/// line of sight.
inline double crlb_position(std::span<const Point2> receivers, const Point2& target,
                            double sigma) {
  if (receivers.size() < 2) throw InvalidInput("bound needs at least 2 receiver positions");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  std::vector<double> theta, weight;
  theta.reserve(receivers.size());
  weight.reserve(receivers.size());
  double weight_sum = 0.0;
  for (const auto& r : receivers) {
    if (r == target) throw DegenerateGeometry("receiver coincides with target");
    theta.push_back(bearing_unchecked(r, target));
    weight.push_back(1.0 / (target - r).squaredNorm());
    weight_sum += weight.back();
  }
  // det(sum w u u^T) = sum_{i<j} w_i w_j sin^2(theta_i - theta_j).
  double det = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    for (std::size_t j = i + 1; j < theta.size(); ++j) {
      const double s = std::sin(theta[j] - theta[i]);
      det += weight[i] * weight[j] * s * s;
    }
  }
  if (!(det > 1e-12 * weight_sum * weight_sum)) {
    throw NonIdentifiable("Fisher information is singular: " +
                          std::string(detail::kColinearMessage));
  }
  return sigma * std::sqrt(weight_sum / det);
}

}  // namespace botl
