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

#include "objseq/eval.h"

#include <cmath>
#include <memory>
#include <sstream>

#include "objseq/error.h"
#include "objseq/gcot.h"
#include "objseq/mask_volume.h"
#include "objseq/scene_io.h"

namespace objseq {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Keyed = std::map<std::string, const json*>;

Keyed KeyById(const std::vector<json>& rows, const char* what) {
  Keyed out;
  for (const json& r : rows) {
    if (!r.contains("record_id") || !r.at("record_id").is_string()) {
      throw ValidationError(what, "row without string record_id");
    }
    const std::string id = r.at("record_id").get<std::string>();
    if (!out.emplace(id, &r).second) throw ValidationError(what, "duplicate record_id " + id);
  }
  return out;
}

// Pairs of (pred, gt) in ascending record_id; key sets must agree.
std::vector<std::pair<const json*, const json*>> Join(const std::vector<json>& preds, const std::vector<json>& gts) {
  const Keyed p = KeyById(preds, "predictions");
  const Keyed g = KeyById(gts, "ground truth");
  std::vector<std::pair<const json*, const json*>> out;
  for (const auto& [id, gt] : g) {
    const auto it = p.find(id);
    if (it == p.end()) throw ValidationError("predictions", "no prediction for record " + id);
    out.emplace_back(it->second, gt);
  }
  for (const auto& [id, pred] : p) {
    if (!g.count(id)) throw ValidationError("ground truth", "no ground truth for record " + id);
  }
  return out;
}

std::string Text(const json& pred) {
  if (!pred.contains("text") || !pred.at("text").is_string()) {
    throw ValidationError("predictions", "record " + pred.at("record_id").get<std::string>() + " lacks text");
  }
  return pred.at("text").get<std::string>();
}

std::vector<std::string> Answers(const json& gt) {
  if (gt.contains("answers")) return gt.at("answers").get<std::vector<std::string>>();
  if (gt.contains("refs")) return gt.at("refs").get<std::vector<std::string>>();
  if (gt.contains("meta") && gt.at("meta").contains("answers")) {
    return gt.at("meta").at("answers").get<std::vector<std::string>>();
  }
  if (gt.contains("assistant_text")) return {gt.at("assistant_text").get<std::string>()};
  throw ValidationError("ground truth", "record " + gt.at("record_id").get<std::string>() + " has no answers");
}

Aabb BoxFromJson(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 6) throw ValidationError("ground truth", "box needs 6 numbers");
  Aabb b;
  b.min = Eigen::Vector3d(v[0], v[1], v[2]);
  b.max = Eigen::Vector3d(v[3], v[4], v[5]);
  if (!b.IsValid()) throw ValidationError("ground truth", "box with min > max");
  return b;
}

// Resolves sequence positions to boxes through a record's scene and permutation.
class SceneResolver {
 public:
  explicit SceneResolver(fs::path dir) : dir_(std::move(dir)) {}

  struct Context {
    const Scene* scene = nullptr;
    std::vector<int> permutation;
  };

  Context For(const json& gt) {
    Context c;
    if (!gt.contains("scene_id")) throw ValidationError("ground truth", "record lacks scene_id");
    const std::string scene_id = gt.at("scene_id").get<std::string>();
    auto it = cache_.find(scene_id);
    if (it == cache_.end()) {
      if (dir_.empty()) throw ArgumentError("--scene-dir is required to resolve object identifiers");
      it = cache_.emplace(scene_id, std::make_unique<Scene>(LoadScene(dir_ / scene_id))).first;
    }
    c.scene = it->second.get();
    if (gt.contains("permutation")) {
      c.permutation = gt.at("permutation").get<std::vector<int>>();
    } else if (gt.contains("meta") && gt.at("meta").contains("permutation")) {
      c.permutation = gt.at("meta").at("permutation").get<std::vector<int>>();
    } else {
      for (int i = 0; i < static_cast<int>(c.scene->num_objects()); ++i) c.permutation.push_back(i);
    }
    if (c.permutation.size() != c.scene->num_objects()) {
      throw ValidationError("ground truth", "permutation size differs from object count of " + scene_id);
    }
    IdAssignment{c.permutation, std::nullopt}.Validate();
    return c;
  }

  static std::optional<Aabb> Box(const Context& c, int position) {
    if (position < 1 || position > static_cast<int>(c.permutation.size())) return std::nullopt;
    return ObjectAabb(*c.scene, c.permutation[static_cast<std::size_t>(position - 1)]);
  }

 private:
  fs::path dir_;
  std::map<std::string, std::unique_ptr<Scene>> cache_;
};

std::vector<Aabb> GtBoxes(const json& gt, SceneResolver& resolver) {
  std::vector<Aabb> out;
  if (gt.contains("gt_boxes")) {
    for (const json& b : gt.at("gt_boxes")) out.push_back(BoxFromJson(b));
    return out;
  }
  const auto ctx = resolver.For(gt);
  for (int t : gt.at("target_ids").get<std::vector<int>>()) {
    const auto box = SceneResolver::Box(ctx, t);
    if (!box) throw ValidationError("ground truth", "target position " + std::to_string(t) + " out of range");
    out.push_back(*box);
  }
  return out;
}

double Mean(const std::vector<json>& rows, const std::string& key) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const json& r : rows) sum += r.at(key).get<double>();
  return sum / static_cast<double>(rows.size());
}

double ZeroFilledMean(const std::vector<json>& rows, const std::string& key, double threshold) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const json& r : rows) {
    if (r.at("iou").get<double>() >= threshold) sum += r.at(key).get<double>();
  }
  return sum / static_cast<double>(rows.size());
}

std::string Csv(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }
  return v.dump();
}

}  // namespace

Benchmark ParseBenchmark(const std::string& name) {
  if (name == "scanrefer") return Benchmark::kScanRefer;
  if (name == "multi3dref") return Benchmark::kMulti3dRef;
  if (name == "scan2cap") return Benchmark::kScan2Cap;
  if (name == "scanqa") return Benchmark::kScanQa;
  if (name == "sqa3d") return Benchmark::kSqa3d;
  if (name == "stiou") return Benchmark::kStIou;
  throw ArgumentError("unknown benchmark '" + name + "'");
}

std::string ToString(Benchmark b) {
  switch (b) {
    case Benchmark::kScanRefer:
      return "scanrefer";
    case Benchmark::kMulti3dRef:
      return "multi3dref";
    case Benchmark::kScan2Cap:
      return "scan2cap";
    case Benchmark::kScanQa:
      return "scanqa";
    case Benchmark::kSqa3d:
      return "sqa3d";
    case Benchmark::kStIou:
      return "stiou";
  }
  return "unknown";
}

std::string ThresholdLabel(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

std::map<std::string, double> RecomputeAggregates(const EvalReport& report) {
  const Benchmark b = ParseBenchmark(report.benchmark);
  const auto thresholds = report.config.at("thresholds").get<std::vector<double>>();
  std::map<std::string, double> agg;
  const auto& rows = report.rows;
  switch (b) {
    case Benchmark::kScanRefer:
      for (double t : thresholds) agg["acc@" + ThresholdLabel(t)] = Mean(rows, "hit@" + ThresholdLabel(t));
      break;
    case Benchmark::kMulti3dRef:
      for (double t : thresholds) {
        MatchCounts total;
        for (const json& r : rows) {
          total += MatchCounts{r.at("tp@" + ThresholdLabel(t)).get<long>(), r.at("fp@" + ThresholdLabel(t)).get<long>(),
                               r.at("fn@" + ThresholdLabel(t)).get<long>()};
        }
        agg["f1@" + ThresholdLabel(t)] = total.F1();
      }
      break;
    case Benchmark::kScan2Cap:
      agg["cider"] = Mean(rows, "cider");
      agg["bleu4"] = Mean(rows, "bleu4");
      for (double t : thresholds) {
        agg["cider@" + ThresholdLabel(t)] = ZeroFilledMean(rows, "cider", t);
        agg["bleu4@" + ThresholdLabel(t)] = ZeroFilledMean(rows, "bleu4", t);
      }
      break;
    case Benchmark::kScanQa:
      agg["cider"] = Mean(rows, "cider");
      agg["bleu4"] = Mean(rows, "bleu4");
      agg["em"] = Mean(rows, "em");
      agg["em_r"] = Mean(rows, "em_r");
      break;
    case Benchmark::kSqa3d:
      agg["em"] = Mean(rows, "em");
      agg["em_r"] = Mean(rows, "em_r");
      break;
    case Benchmark::kStIou:
      agg["st_iou"] = Mean(rows, "st_iou");
      for (double t : thresholds) agg["acc@" + ThresholdLabel(t)] = Mean(rows, "hit@" + ThresholdLabel(t));
      break;
  }
  return agg;
}

EvalReport Evaluate(Benchmark benchmark, const std::vector<json>& preds, const std::vector<json>& gts,
                    const EvalOptions& options) {
  EvalReport report;
  report.benchmark = ToString(benchmark);
  report.config = {{"thresholds", options.thresholds},
                   {"cider_scale", options.cider_scale},
                   {"id_width", options.id_width},
                   {"normalization", "lowercase, punctuation to space, leading article dropped"},
                   {"bleu_smoothing", "add-one on zero counts for n >= 2"}};
  const auto pairs = Join(preds, gts);
  SceneResolver resolver(options.scene_dir);

  switch (benchmark) {
    case Benchmark::kScanRefer: {
      std::map<std::string, std::optional<Aabb>> pred_boxes;
      std::map<std::string, Aabb> gt_boxes;
      for (const auto& [pred, gt] : pairs) {
        const std::string id = gt->at("record_id").get<std::string>();
        const std::vector<Aabb> gtb = GtBoxes(*gt, resolver);
        if (gtb.size() != 1) throw ValidationError("ground truth", "record " + id + " needs exactly one target");
        const auto positions = ParseCotResponse(Text(*pred), options.id_width).final_positions;
        std::optional<Aabb> box;
        if (!positions.empty()) box = SceneResolver::Box(resolver.For(*gt), positions.front());
        const double iou = box ? AabbIou(*box, gtb.front()) : 0.0;
        json row = {{"record_id", id}, {"parseable", box.has_value()}, {"iou", iou}};
        for (double t : options.thresholds) row["hit@" + ThresholdLabel(t)] = (box && iou >= t) ? 1 : 0;
        report.rows.push_back(std::move(row));
        pred_boxes[id] = box;
        gt_boxes[id] = gtb.front();
      }
      for (const auto& [t, acc] : GroundingAccuracy(pred_boxes, gt_boxes, options.thresholds)) {
        report.aggregates["acc@" + ThresholdLabel(t)] = acc;
      }
      break;
    }
    case Benchmark::kMulti3dRef: {
      std::map<double, MatchCounts> totals;
      for (const auto& [pred, gt] : pairs) {
        const std::string id = gt->at("record_id").get<std::string>();
        const std::vector<Aabb> gtb = GtBoxes(*gt, resolver);
        std::vector<int> positions;
        for (int p : ParseCotResponse(Text(*pred), options.id_width).final_positions) {
          if (std::find(positions.begin(), positions.end(), p) == positions.end()) positions.push_back(p);
        }
        Eigen::MatrixXd iou = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(positions.size()),
                                                    static_cast<Eigen::Index>(gtb.size()));
        if (!positions.empty()) {
          const auto ctx = resolver.For(*gt);
          for (std::size_t i = 0; i < positions.size(); ++i) {
            const auto box = SceneResolver::Box(ctx, positions[i]);
            if (!box) continue;  // out-of-range identifier: a false positive
            for (std::size_t j = 0; j < gtb.size(); ++j) {
              iou(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = AabbIou(*box, gtb[j]);
            }
          }
        }
        json row = {{"record_id", id}, {"n_pred", positions.size()}, {"n_gt", gtb.size()}};
        for (double t : options.thresholds) {
          const MatchCounts c = CountMatches(iou, t);
          totals[t] += c;
          row["tp@" + ThresholdLabel(t)] = c.tp;
          row["fp@" + ThresholdLabel(t)] = c.fp;
          row["fn@" + ThresholdLabel(t)] = c.fn;
        }
        report.rows.push_back(std::move(row));
      }
      for (double t : options.thresholds) report.aggregates["f1@" + ThresholdLabel(t)] = totals[t].F1();
      break;
    }
    case Benchmark::kScan2Cap:
    case Benchmark::kScanQa: {
      std::vector<CaptionSample> corpus;
      std::vector<double> ious;
      for (const auto& [pred, gt] : pairs) {
        CaptionSample s;
        const auto parsed = ParseCotResponse(Text(*pred), options.id_width);
        s.pred = parsed.answer.value_or(Text(*pred));
        s.refs = Answers(*gt);
        if (s.refs.empty()) throw ValidationError("ground truth", "empty reference list");
        corpus.push_back(std::move(s));
        if (benchmark == Benchmark::kScan2Cap) {
          if (gt->contains("iou")) {
            ious.push_back(gt->at("iou").get<double>());
          } else {
            const std::vector<Aabb> gtb = GtBoxes(json{{"gt_boxes", gt->at("gt_boxes")}}, resolver);
            const auto ctx = resolver.For(*gt);
            const auto box = SceneResolver::Box(ctx, gt->at("target_ids").at(0).get<int>());
            ious.push_back(box && !gtb.empty() ? AabbIou(*box, gtb.front()) : 0.0);
          }
        }
      }
      const CiderResult cider = CiderD(corpus, {4, 6.0, options.cider_scale});
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        json row = {{"record_id", pairs[i].second->at("record_id")},
                    {"cider", cider.per_sample[i]},
                    {"bleu4", Bleu4(corpus[i].pred, corpus[i].refs)}};
        if (benchmark == Benchmark::kScan2Cap) {
          if (ious[i] < 0.0 || ious[i] > 1.0) throw ValidationError("ground truth", "iou outside [0,1]");
          row["iou"] = ious[i];
        } else {
          row["em"] = ExactMatch(corpus[i].pred, corpus[i].refs, false);
          row["em_r"] = ExactMatch(corpus[i].pred, corpus[i].refs, true);
        }
        report.rows.push_back(std::move(row));
      }
      if (benchmark == Benchmark::kScan2Cap) {
        for (double t : options.thresholds) {
          report.aggregates["cider@" + ThresholdLabel(t)] =
              CaptionAtIou(corpus, ious, t, CaptionMetric::kCider, {4, 6.0, options.cider_scale});
          report.aggregates["bleu4@" + ThresholdLabel(t)] = CaptionAtIou(corpus, ious, t, CaptionMetric::kBleu4);
        }
      } else {
        report.aggregates["em"] = Mean(report.rows, "em");
        report.aggregates["em_r"] = Mean(report.rows, "em_r");
      }
      report.aggregates["cider"] = cider.mean;
      report.aggregates["bleu4"] = Mean(report.rows, "bleu4");
      break;
    }
    case Benchmark::kSqa3d: {
      for (const auto& [pred, gt] : pairs) {
        const auto parsed = ParseCotResponse(Text(*pred), options.id_width);
        const std::string answer = parsed.answer.value_or(Text(*pred));
        const auto refs = Answers(*gt);
        report.rows.push_back({{"record_id", gt->at("record_id")},
                               {"em", ExactMatch(answer, refs, false)},
                               {"em_r", ExactMatch(answer, refs, true)}});
      }
      report.aggregates["em"] = Mean(report.rows, "em");
      report.aggregates["em_r"] = Mean(report.rows, "em_r");
      break;
    }
    case Benchmark::kStIou: {
      auto resolve = [](const fs::path& base, const json& row) {
        fs::path p = row.at("masks_path").get<std::string>();
        return p.is_relative() ? base / p : p;
      };
      std::vector<double> values;
      for (const auto& [pred, gt] : pairs) {
        const double v = StIou(ReadMaskVolume(resolve(options.pred_base, *pred)),
                               ReadMaskVolume(resolve(options.gt_base, *gt)));
        json row = {{"record_id", gt->at("record_id")}, {"st_iou", v}};
        for (double t : options.thresholds) row["hit@" + ThresholdLabel(t)] = v >= t ? 1 : 0;
        report.rows.push_back(std::move(row));
      }
      report.aggregates = RecomputeAggregates(report);
      break;
    }
  }
  return report;
}

json EvalReport::ToJson() const {
  return {{"benchmark", benchmark}, {"aggregates", aggregates}, {"config", config}, {"samples", rows}};
}

std::string EvalReport::ToCsv() const {
  std::vector<std::string> columns = {"record_id"};
  for (const json& r : rows) {
    for (const auto& [k, v] : r.items()) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
  }
  std::sort(columns.begin() + 1, columns.end());
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const json& r : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      if (r.contains(columns[c])) os << Csv(r.at(columns[c]));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace objseq
