// Copyright 2026 The objseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "objseq/matching.h"

#include <algorithm>
#include <limits>

namespace objseq {

Matching MaxWeightMatching(const Eigen::MatrixXd& weights) {
  const std::size_t rows = static_cast<std::size_t>(weights.rows());
  const std::size_t cols = static_cast<std::size_t>(weights.cols());
  Matching m;
  m.row_to_col.assign(rows, -1);
  const std::size_t n = std::max(rows, cols);
  if (n == 0) return m;

  // Minimize cost = -weight; padded cells cost 0. Potentials u (rows) and
  // v (cols) are 1-based, column 0 is the virtual start.
  auto cost = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? -weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
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
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j] - 1;
    if (i < rows && j - 1 < cols) m.row_to_col[i] = static_cast<int>(j - 1);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const int j = m.row_to_col[i];
    if (j >= 0) m.total += weights(static_cast<Eigen::Index>(i), j);
  }
  return m;
}

}  // namespace objseq
