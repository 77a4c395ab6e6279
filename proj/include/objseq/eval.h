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

// Benchmark scoring over JSONL predictions and ground truth.
//
// Predictions: {"record_id", "text"} or, for stiou, {"record_id", "masks_path"}.
// Ground truth by benchmark:
//   scanrefer, multi3dref  {"record_id", "scene_id", "target_ids", "permutation"}
//                          (permutation may sit under "meta"; "gt_boxes" as
//                          [[x0,y0,z0,x1,y1,z1], ...] overrides target_ids)
//   scan2cap               {"record_id", "refs", "iou"} or scanrefer-style
//                          fields plus "gt_boxes" to compute the IoU
//   scanqa, sqa3d          {"record_id", "answers"} (or meta.answers)
//   stiou                  {"record_id", "masks_path"}
// TaskRecord JSONL written by build-tasks is valid ground truth.

#ifndef OBJSEQ_EVAL_H_
#define OBJSEQ_EVAL_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "objseq/identifiers.h"
#include "objseq/metrics.h"
#include "objseq/text_metrics.h"

namespace objseq {

enum class Benchmark { kScanRefer, kMulti3dRef, kScan2Cap, kScanQa, kSqa3d, kStIou };

Benchmark ParseBenchmark(const std::string& name);
std::string ToString(Benchmark b);

struct EvalOptions {
  std::vector<double> thresholds = kDefaultIouThresholds;
  double cider_scale = 10.0;
  int id_width = kDefaultIdWidth;
  std::filesystem::path scene_dir;  // bundles as <scene_dir>/<scene_id>
  std::filesystem::path pred_base;  // resolves relative masks_path in predictions
  std::filesystem::path gt_base;    // and in ground truth
};

struct EvalReport {
  std::string benchmark;
  std::map<std::string, double> aggregates;
  std::vector<nlohmann::json> rows;  // one per record, ascending record_id
  nlohmann::json config;

  nlohmann::json ToJson() const;
  std::string ToCsv() const;
};

EvalReport Evaluate(Benchmark benchmark, const std::vector<nlohmann::json>& preds,
                    const std::vector<nlohmann::json>& gts, const EvalOptions& options);

// Recomputes the aggregates of `report` from its rows.
std::map<std::string, double> RecomputeAggregates(const EvalReport& report);

// Threshold label used in metric names: 0.25 -> "0.25", 0.5 -> "0.5".
std::string ThresholdLabel(double t);

}  // namespace objseq

#endif  // OBJSEQ_EVAL_H_
