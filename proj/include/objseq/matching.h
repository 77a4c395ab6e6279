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

#ifndef OBJSEQ_MATCHING_H_
#define OBJSEQ_MATCHING_H_

#include <Eigen/Core>
#include <vector>

namespace objseq {

struct Matching {
  std::vector<int> row_to_col;  // -1 where the row is unmatched
  double total = 0.0;           // sum of matched weights, accumulated in row order
};

// Maximum-total-weight one-to-one assignment on a rectangular weight matrix
// (Hungarian method on the zero-padded square problem). Every row is
// matched when rows <= cols, and vice versa.
Matching MaxWeightMatching(const Eigen::MatrixXd& weights);

}  // namespace objseq

#endif  // OBJSEQ_MATCHING_H_
