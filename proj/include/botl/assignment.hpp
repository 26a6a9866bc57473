#pragma once

// Square linear assignment (Hungarian / Kuhn-Munkres, O(n^3) with
// potentials), with deterministic tie-breaking.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "botl/errors.hpp"

namespace botl {

/// Row-to-column cost table; rows are predictions (or clusters), columns
/// are measurement slots (or targets).
using CostMatrix = Eigen::MatrixXd;

struct Assignment {
  std::vector<std::size_t> col_of_row;
  double total_cost = 0.0;
};

namespace detail {

/// Minimum-cost perfect matching of an n x n matrix.
inline double hungarian(const CostMatrix& cost, std::vector<std::size_t>* col_of_row) {
  const auto n = static_cast<std::size_t>(cost.rows());
  if (n == 0) {
    if (col_of_row) col_of_row->clear();
    return 0.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; index 0 is the virtual root column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1),
                                static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> result(n);
  for (std::size_t j = 1; j <= n; ++j) result[row_of_col[j] - 1] = j - 1;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(result[i]));
  }
  if (col_of_row) *col_of_row = std::move(result);
  return total;
}

}  // namespace detail

/// Minimum-cost permutation. Among optimal permutations the
/// lexicographically smallest col_of_row is returned, so equal-cost inputs
/// always give the same answer.
inline Assignment assign(const CostMatrix& cost) {
  if (cost.rows() != cost.cols()) throw InvalidInput("assignment needs a square cost matrix");
  if (!cost.allFinite()) throw InvalidInput("assignment cost matrix has non-finite entries");
  const auto n = static_cast<std::size_t>(cost.rows());

  Assignment out;
  const double optimum = detail::hungarian(cost, &out.col_of_row);
  out.total_cost = optimum;
  if (n <= 1) return out;

  const double tol = 1e-12 * (1.0 + cost.cwiseAbs().sum());
  std::vector<std::size_t> free_cols(n);
  for (std::size_t j = 0; j < n; ++j) free_cols[j] = j;
  double fixed = 0.0;
  std::vector<std::size_t> chosen(n);
  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t rest = n - row - 1;
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      const std::size_t col = free_cols[k];
      CostMatrix sub(static_cast<Eigen::Index>(rest), static_cast<Eigen::Index>(rest));
      for (std::size_t r = 0; r < rest; ++r) {
        std::size_t c_out = 0;
        for (std::size_t c = 0; c < free_cols.size(); ++c) {
          if (c == k) continue;
          sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c_out++)) =
              cost(static_cast<Eigen::Index>(row + 1 + r), static_cast<Eigen::Index>(free_cols[c]));
        }
      }
      const double here = cost(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      const bool last_choice = k + 1 == free_cols.size();
      if (last_choice || fixed + here + detail::hungarian(sub, nullptr) <= optimum + tol) {
        chosen[row] = col;
        fixed += here;
        free_cols.erase(free_cols.begin() + static_cast<std::ptrdiff_t>(k));
        break;
      }
    }
  }
  out.col_of_row = std::move(chosen);
  out.total_cost = fixed;
  return out;
}

}  // namespace botl
