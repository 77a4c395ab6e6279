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

#ifndef OBJSEQ_METRICS_H_
#define OBJSEQ_METRICS_H_

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "objseq/scene.h"

namespace objseq {

inline const std::vector<double> kDefaultIouThresholds = {0.25, 0.5};

// Intersection over union of two axis-aligned boxes. Zero-volume unions
// (including identical degenerate boxes) score 0. Throws on min > max.
double AabbIou(const Aabb& a, const Aabb& b);

// Accuracy at each threshold: share of records whose predicted box reaches
// IoU >= threshold with the ground truth. A missing (unparseable) prediction
// is a miss. Key sets must match.
std::map<double, double> GroundingAccuracy(const std::map<std::string, std::optional<Aabb>>& preds,
                                           const std::map<std::string, Aabb>& gts,
                                           const std::vector<double>& thresholds = kDefaultIouThresholds);

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  // 2TP / (2TP + FP + FN), 0 when undefined.
  double F1() const;
};

// One record: optimal assignment on the pred x gt IoU matrix, then matched
// pairs with IoU >= threshold are true positives. An empty prediction for an
// empty ground truth counts as one true positive.
MatchCounts CountMatches(const Eigen::MatrixXd& iou, double threshold);
Eigen::MatrixXd IouMatrix(const std::vector<Aabb>& preds, const std::vector<Aabb>& gts);

struct BoxSetPair {
  std::vector<Aabb> pred;
  std::vector<Aabb> gt;
};

// F1 over TP/FP/FN accumulated across records.
double MultiObjectF1(const std::vector<BoxSetPair>& records, double threshold);

// Stack of equally sized binary frames.
struct MaskVolume {
  int height = 0;
  int width = 0;
  std::vector<std::vector<std::uint8_t>> frames;  // row-major, nonzero = foreground

  void Validate() const;
  long Count() const;
};

// Summed per-frame intersection over summed per-frame union; 0 when both
// volumes are empty.
double StIou(const MaskVolume& pred, const MaskVolume& gt);

}  // namespace objseq

#endif  // OBJSEQ_METRICS_H_
