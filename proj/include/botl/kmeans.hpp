#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "botl/errors.hpp"
#include "botl/rng.hpp"

namespace botl {

template <int Dim>
using Feature = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
struct KMeansResult {
  std::vector<std::size_t> labels;
  std::vector<Feature<Dim>> centroids;
  double inertia = 0.0;
};

struct KMeansSettings {
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
};

namespace detail {

template <int Dim>
std::size_t nearest_centroid(const Feature<Dim>& p, const std::vector<Feature<Dim>>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = (p - centroids[c]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

template <int Dim>
std::vector<Feature<Dim>> kmeanspp_seed(std::span<const Feature<Dim>> points, std::size_t k,
                                        RandomStream& rng) {
  const std::size_t n = points.size();
  std::vector<Feature<Dim>> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = (points[i] - centroids[0]).squaredNorm();
  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      // Rounding can leave `target` past the last increment.
      while (d2[pick] == 0.0 && pick > 0) --pick;
    } else {
      pick = rng.below(n);
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points[i] - centroids.back()).squaredNorm());
    }
  }
  return centroids;
}

template <int Dim>
KMeansResult<Dim> lloyd(std::span<const Feature<Dim>> points, std::vector<Feature<Dim>> centroids,
                        std::size_t max_iterations) {
  const std::size_t n = points.size();
  const std::size_t k = centroids.size();
  KMeansResult<Dim> out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = nearest_centroid(points[i], centroids);

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    std::vector<Feature<Dim>> sums(k, Feature<Dim>::Zero(points[0].size()));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[out.labels[i]] += points[i];
      ++counts[out.labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) centroids[c] = sums[c] / static_cast<double>(counts[c]);
    }
    // Empty clusters restart at the point farthest from its own centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[out.labels[i]] <= 1) continue;
        const double d = (points[i] - centroids[out.labels[i]]).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d < 0.0) continue;
      --counts[out.labels[far]];
      out.labels[far] = c;
      counts[c] = 1;
      centroids[c] = points[far];
    }

    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t l = nearest_centroid(points[i], centroids);
      changed = changed || l != out.labels[i];
      out.labels[i] = l;
    }
    if (!changed) break;
  }
  out.centroids = std::move(centroids);
  out.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.inertia += (points[i] - out.centroids[out.labels[i]]).squaredNorm();
  }
  return out;
}

}  // namespace detail

/// Lloyd's algorithm from k-means++ seeds, best of several restarts. Each
/// restart draws from its own substream of `seed`, so the result depends
/// only on (points, k, seed).
template <int Dim>
KMeansResult<Dim> kmeans(std::span<const Feature<Dim>> points, std::size_t k, std::uint64_t seed,
                         const KMeansSettings& settings = {}) {
  if (k < 1) throw InvalidInput("k-means needs k >= 1");
  if (points.size() < k) {
    throw InvalidInput("k-means needs at least k points (k = " + std::to_string(k) + ", got " +
                       std::to_string(points.size()) + ")");
  }
  KMeansResult<Dim> best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(settings.restarts, 1); ++r) {
    RandomStream rng(seed, {StreamPurpose::kKMeans, static_cast<std::uint32_t>(r), 0});
    auto seeds = detail::kmeanspp_seed<Dim>(points, k, rng);
    auto result = detail::lloyd<Dim>(points, std::move(seeds), settings.max_iterations);
    if (result.inertia < best.inertia) best = std::move(result);
  }
  return best;
}

}  // namespace botl
