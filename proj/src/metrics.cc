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

#include "objseq/metrics.h"

#include "objseq/error.h"
#include "objseq/matching.h"

namespace objseq {

double AabbIou(const Aabb& a, const Aabb& b) {
  if (!a.IsValid() || !b.IsValid()) throw ArgumentError("AabbIou: box with min > max");
  const Eigen::Vector3d lo = a.min.cwiseMax(b.min);
  const Eigen::Vector3d hi = a.max.cwiseMin(b.max);
  const Eigen::Vector3d extent = (hi - lo).cwiseMax(0.0);
  const double inter = extent.x() * extent.y() * extent.z();
  const double uni = a.Volume() + b.Volume() - inter;
  if (!(uni > 0.0)) return 0.0;
  return inter / uni;
}

std::map<double, double> GroundingAccuracy(const std::map<std::string, std::optional<Aabb>>& preds,
                                           const std::map<std::string, Aabb>& gts,
                                           const std::vector<double>& thresholds) {
  if (preds.size() != gts.size()) throw ArgumentError("GroundingAccuracy: prediction/ground-truth key sets differ");
  std::map<double, long> hits;
  for (double t : thresholds) hits[t] = 0;
  for (const auto& [id, gt] : gts) {
    const auto it = preds.find(id);
    if (it == preds.end()) throw ArgumentError("GroundingAccuracy: no prediction for " + id);
    if (!it->second) continue;
    const double iou = AabbIou(*it->second, gt);
    for (double t : thresholds) {
      if (iou >= t) ++hits[t];
    }
  }
  std::map<double, double> acc;
  for (double t : thresholds) {
    acc[t] = gts.empty() ? 0.0 : static_cast<double>(hits[t]) / static_cast<double>(gts.size());
  }
  return acc;
}

double MatchCounts::F1() const {
  const long denom = 2 * tp + fp + fn;
  if (tp == 0 || denom == 0) return 0.0;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

Eigen::MatrixXd IouMatrix(const std::vector<Aabb>& preds, const std::vector<Aabb>& gts) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(preds.size()), static_cast<Eigen::Index>(gts.size()));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = AabbIou(preds[i], gts[j]);
    }
  }
  return m;
}

MatchCounts CountMatches(const Eigen::MatrixXd& iou, double threshold) {
  MatchCounts c;
  if (iou.rows() == 0 && iou.cols() == 0) {
    c.tp = 1;
    return c;
  }
  const Matching m = MaxWeightMatching(iou);
  for (Eigen::Index i = 0; i < iou.rows(); ++i) {
    const int j = m.row_to_col[static_cast<std::size_t>(i)];
    if (j >= 0 && iou(i, j) >= threshold) ++c.tp;
  }
  c.fp = static_cast<long>(iou.rows()) - c.tp;
  c.fn = static_cast<long>(iou.cols()) - c.tp;
  return c;
}

double MultiObjectF1(const std::vector<BoxSetPair>& records, double threshold) {
  MatchCounts total;
  for (const BoxSetPair& r : records) total += CountMatches(IouMatrix(r.pred, r.gt), threshold);
  return total.F1();
}

void MaskVolume::Validate() const {
  if (frames.empty()) throw ArgumentError("mask volume has no frames");
  if (height <= 0 || width <= 0) throw ArgumentError("mask volume has non-positive dims");
  const std::size_t area = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  for (const auto& f : frames) {
    if (f.size() != area) throw ArgumentError("mask frame size differs from height*width");
  }
}

long MaskVolume::Count() const {
  long n = 0;
  for (const auto& f : frames) {
    for (std::uint8_t px : f) n += px != 0;
  }
  return n;
}

double StIou(const MaskVolume& pred, const MaskVolume& gt) {
  pred.Validate();
  gt.Validate();
  if (pred.frames.size() != gt.frames.size()) throw ArgumentError("StIou: frame count mismatch");
  if (pred.height != gt.height || pred.width != gt.width) throw ArgumentError("StIou: frame dims mismatch");
  long inter = 0;
  long uni = 0;
  for (std::size_t k = 0; k < pred.frames.size(); ++k) {
    const auto& p = pred.frames[k];
    const auto& g = gt.frames[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const bool a = p[i] != 0;
      const bool b = g[i] != 0;
      inter += a && b;
      uni += a || b;
    }
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace objseq
