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

#include "objseq/cli.h"

#include <algorithm>
#include <thread>

#include "CLI11.hpp"
#include "objseq/aggregation.h"
#include "objseq/binary_io.h"
#include "objseq/dataset.h"
#include "objseq/error.h"
#include "objseq/eval.h"
#include "objseq/gcot.h"
#include "objseq/json_io.h"
#include "objseq/random.h"
#include "objseq/scene_io.h"
#include "objseq/synth.h"
#include "objseq/tasking.h"

namespace objseq::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  int verbosity = 0;
  int jobs = 1;
};

struct SequenceOptions {
  std::string bundle;
  std::string out;
  std::string order = "fixed";
  std::uint64_t seed = 0;
  double epsilon = 0.05;
  bool require_depth = false;
  std::string mask_size = "patches";
  int min_hits = 1;
  int patch_size = kDefaultPatchSize;
  int id_width = kDefaultIdWidth;
  std::size_t feature_dim = 0;
  std::string features_3d;
  std::string proj_3d;
  std::string proj_2d;
};

struct TaskOptions {
  std::string scene_dir;
  std::string manifest;
  std::string out;
  std::uint64_t seed = 0;
  std::string order = "random";
  std::string templates;
  int id_width = kDefaultIdWidth;
};

struct CotOptions {
  std::string kind;
  std::string annotations;
  std::string scene_dir;
  std::string out;
  std::uint64_t seed = 0;
  std::string order = "random";
  int k = kDefaultSpaceNeighbors;
  int id_width = kDefaultIdWidth;
};

struct AssembleOptions {
  std::string manifest;
  std::string out;
  std::uint64_t seed = 0;
};

struct EvalCliOptions {
  std::string benchmark;
  std::string pred;
  std::string gt;
  std::string out;
  std::string scene_dir;
  std::vector<double> thresholds = kDefaultIouThresholds;
  double cider_scale = 10.0;
  int id_width = kDefaultIdWidth;
};

struct SynthCliOptions {
  std::string spec;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct TokenCostOptions {
  long n = 0;
  std::string scheme = "single_token";
  int feature_tokens = 2;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results must be
// written to per-index slots so output never depends on scheduling.
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json VectorJson(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

FeatureTable RowsToTable(const std::vector<Eigen::VectorXd>& rows) {
  const std::size_t dim = rows.empty() ? 0 : static_cast<std::size_t>(rows.front().size());
  FeatureTable t(rows.size(), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t d = 0; d < dim; ++d) t.at(r, d) = static_cast<float>(rows[r][static_cast<Eigen::Index>(d)]);
  }
  return t;
}

IdAssignment SceneAssignment(const Scene& scene, const std::string& order, std::uint64_t seed) {
  return AssignIds(static_cast<int>(scene.num_objects()), ParseOrderPolicy(order), DeriveSeed(seed, scene.scene_id));
}

class SceneCache {
 public:
  explicit SceneCache(fs::path dir) : dir_(std::move(dir)) {}
  const Scene& Get(const std::string& scene_id) {
    auto it = scenes_.find(scene_id);
    if (it == scenes_.end()) it = scenes_.emplace(scene_id, LoadScene(dir_ / scene_id)).first;
    return it->second;
  }

 private:
  fs::path dir_;
  std::map<std::string, Scene> scenes_;
};

std::vector<int> ToPositions(const IdAssignment& a, const std::vector<int>& proposals) {
  std::vector<int> out;
  for (int p : proposals) out.push_back(a.PositionOf(p));
  return out;
}

std::string DefaultRecordId(const std::string& scene_id, const std::string& kind, std::size_t line) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", line);
  return scene_id + "/" + kind + "/" + buf;
}

void Log(const CommonOptions& common, std::ostream& err, const std::string& msg) {
  if (common.verbosity > 0) err << msg << '\n';
}

// --- subcommands -----------------------------------------------------------

int CmdValidate(const std::vector<std::string>& bundles, const std::string& tasks, const std::string& scene_dir,
                int patch_size, std::ostream& out) {
  int failures = 0;
  for (const std::string& b : bundles) {
    try {
      const Scene s = LoadScene(b, patch_size);
      out << "ok " << s.scene_id << ": " << s.points.size() << " points, " << s.num_objects() << " proposals, "
          << s.views.size() << " views\n";
    } catch (const ValidationError& e) {
      out << "invalid " << b << ": " << e.what() << '\n';
      ++failures;
    }
  }
  if (!tasks.empty()) {
    SceneCache cache(scene_dir);
    std::size_t checked = 0;
    for (const json& row : ReadJsonl(tasks)) {
      const TaskRecord r = TaskRecord::FromJson(row);
      const int width = r.meta.value("id_width", kDefaultIdWidth);
      int n = static_cast<int>(r.meta.value("permutation", std::vector<int>{}).size());
      if (!scene_dir.empty()) n = static_cast<int>(cache.Get(r.scene_id).num_objects());
      for (const std::string& issue : ValidateTaskRecord(r, n, width)) {
        out << "invalid " << issue << '\n';
        ++failures;
      }
      ++checked;
    }
    out << "checked " << checked << " task records\n";
  }
  return failures == 0 ? kExitOk : kExitValidation;
}

int CmdBuildSequence(const SequenceOptions& o, const CommonOptions& common, std::ostream& out) {
  const Scene scene = LoadScene(o.bundle, o.patch_size);
  if (scene.num_objects() == 0) throw ValidationError("scene.json:proposals", "sequence needs at least one proposal");
  AggregationConfig config;
  config.occlusion = {o.epsilon, o.require_depth};
  config.patch_size = o.patch_size;
  config.min_hits = o.min_hits;
  config.mask_size = ParseMaskSizeMode(o.mask_size);
  config.feature_dim = o.feature_dim;

  std::optional<FeatureTable> f3d;
  if (!o.features_3d.empty()) {
    f3d = ReadFeatureTable(o.features_3d);
    if (f3d->rows() != scene.num_objects()) {
      throw ValidationError(fs::path(o.features_3d).filename().string() + ":rows", "expected one row per proposal");
    }
  }
  Projectors projectors;
  if (!o.proj_3d.empty()) projectors.point = AffineProjector::Load("f_p", o.proj_3d);
  if (!o.proj_2d.empty()) projectors.image = AffineProjector::Load("f_v", o.proj_2d);

  const IdAssignment assignment = AssignIds(static_cast<int>(scene.num_objects()), ParseOrderPolicy(o.order), o.seed);
  const SystemPrompt prompt = RenderSystemPrompt(assignment, o.id_width);

  std::vector<ObjectRecord> records(scene.num_objects());
  ParallelFor(scene.num_objects(), common.jobs, [&](std::size_t i) {
    std::optional<Eigen::VectorXd> z3;
    if (f3d) {
      z3 = Eigen::VectorXd(static_cast<Eigen::Index>(f3d->dim()));
      for (std::size_t d = 0; d < f3d->dim(); ++d) (*z3)[static_cast<Eigen::Index>(d)] = f3d->at(i, d);
    }
    records[i] = BuildObjectRecord(scene, static_cast<int>(i), config, z3, projectors);
  });

  json objects = json::array();
  std::vector<Eigen::VectorXd> f2d_rows, e2d_rows, e3d_rows;
  for (int pos = 1; pos <= assignment.size(); ++pos) {
    const int idx = assignment.ProposalAt(pos);
    const ObjectRecord& r = records[static_cast<std::size_t>(idx)];
    const Aabb box = ObjectAabb(scene, idx);
    objects.push_back({{"position", pos},
                       {"token", MakeIdToken(pos, o.id_width)},
                       {"proposal", idx},
                       {"visible_anywhere", r.visible_anywhere},
                       {"views_used", r.views_used},
                       {"views_without_features", r.views_without_features},
                       {"centroid", VectorJson(ObjectCentroid(scene, idx))},
                       {"aabb", {box.min.x(), box.min.y(), box.min.z(), box.max.x(), box.max.y(), box.max.z()}}});
    f2d_rows.push_back(*r.feature_2d);
    if (r.embed_2d) e2d_rows.push_back(*r.embed_2d);
    if (r.embed_3d) e3d_rows.push_back(*r.embed_3d);
  }
  json config_echo = {{"subcommand", "build-sequence"},
                      {"bundle", o.bundle},
                      {"order", o.order},
                      {"seed", o.seed},
                      {"epsilon", o.epsilon},
                      {"require_depth", o.require_depth},
                      {"mask_size", o.mask_size},
                      {"min_hits", o.min_hits},
                      {"patch_size", o.patch_size},
                      {"id_width", o.id_width},
                      {"feature_dim", o.feature_dim},
                      {"features_3d", o.features_3d},
                      {"proj_3d", o.proj_3d},
                      {"proj_2d", o.proj_2d}};
  const fs::path dir = o.out;
  fs::create_directories(dir);
  WriteJsonFile(dir / "sequence.json", {{"config", config_echo},
                                        {"scene_id", scene.scene_id},
                                        {"permutation", assignment.permutation},
                                        {"system_prompt", prompt.text},
                                        {"bindings", prompt.bindings},
                                        {"objects", objects}});
  WriteFeatureTable(dir / "features_2d.bin", RowsToTable(f2d_rows));
  if (!e2d_rows.empty()) WriteFeatureTable(dir / "embed_2d.bin", RowsToTable(e2d_rows));
  if (!e3d_rows.empty()) WriteFeatureTable(dir / "embed_3d.bin", RowsToTable(e3d_rows));
  out << "wrote " << assignment.size() << " objects for " << scene.scene_id << '\n';
  return kExitOk;
}

std::optional<std::string> OptString(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

int CmdBuildTasks(const TaskOptions& o, std::ostream& out) {
  const TaskTemplates templates = o.templates.empty() ? TaskTemplates::Defaults() : TaskTemplates::Load(o.templates);
  SceneCache cache(o.scene_dir);
  std::vector<json> rows;
  std::map<std::string, long> per_kind;
  const auto annotations = ReadJsonl(o.manifest);
  for (std::size_t line = 0; line < annotations.size(); ++line) {
    const json& a = annotations[line];
    const std::string where = fs::path(o.manifest).filename().string() + ":" + std::to_string(line + 1);
    try {
      const Scene& scene = cache.Get(a.at("scene_id").get<std::string>());
      const TaskKind kind = ParseTaskKind(a.at("task_kind").get<std::string>());
      const IdAssignment assignment = SceneAssignment(scene, o.order, o.seed);
      TaskFields f;
      f.record_id = a.value("record_id", DefaultRecordId(scene.scene_id, ToString(kind), line + 1));
      f.description = OptString(a, "description");
      f.question = OptString(a, "question");
      f.situation = OptString(a, "situation");
      f.caption = OptString(a, "caption");
      f.category = OptString(a, "category");
      f.answers = a.value("answers", std::vector<std::string>{});
      f.targets = ToPositions(assignment, a.value("targets", std::vector<int>{}));
      const TaskRecord r = MakeTaskRecord(kind, scene, assignment, f, templates, o.id_width);
      rows.push_back(r.ToJson());
      ++per_kind[ToString(kind)];
    } catch (const json::exception& e) {
      throw ValidationError(where, e.what());
    } catch (const ArgumentError& e) {
      throw ValidationError(where, e.what());
    }
  }
  WriteJsonl(o.out, rows);
  WriteJsonFile(o.out + ".run.json", {{"config",
                                       {{"subcommand", "build-tasks"},
                                        {"scene_dir", o.scene_dir},
                                        {"manifest", o.manifest},
                                        {"seed", o.seed},
                                        {"order", o.order},
                                        {"templates", templates.ToJson()},
                                        {"id_width", o.id_width}}},
                                      {"records", rows.size()},
                                      {"per_kind", per_kind}});
  out << "wrote " << rows.size() << " task records\n";
  return kExitOk;
}

int CmdGenCot(const CotOptions& o, std::ostream& out) {
  const CotKind kind = ParseCotKind(o.kind);
  SceneCache cache(o.scene_dir);
  std::vector<json> rows;
  json skipped = json::array();
  const auto annotations = ReadJsonl(o.annotations);
  for (std::size_t line = 0; line < annotations.size(); ++line) {
    const json& a = annotations[line];
    try {
      const Scene& scene = cache.Get(a.at("scene_id").get<std::string>());
      const IdAssignment assignment = SceneAssignment(scene, o.order, o.seed);
      CotAnnotation ann;
      ann.kind = kind;
      ann.record_id = a.value("record_id", DefaultRecordId(scene.scene_id, "cot_" + o.kind, line + 1));
      switch (kind) {
        case CotKind::kQa:
          ann.text = a.at("question").get<std::string>();
          ann.related = ToPositions(assignment, a.at("related").get<std::vector<int>>());
          ann.answer = a.contains("answer") ? a.at("answer").get<std::string>()
                                            : a.at("answers").at(0).get<std::string>();
          rows.push_back(GenQaCot(ann, scene, assignment, o.id_width).ToJson());
          break;
        case CotKind::kCategory:
          ann.text = a.at("description").get<std::string>();
          ann.category = a.at("category").get<std::string>();
          ann.same_category = ToPositions(assignment, a.at("same_category").get<std::vector<int>>());
          ann.target = assignment.PositionOf(a.at("target").get<int>());
          rows.push_back(GenCategoryCot(ann, scene, assignment, o.id_width).ToJson());
          break;
        case CotKind::kSpace:
          ann.text = a.at("description").get<std::string>();
          ann.target = assignment.PositionOf(a.at("target").get<int>());
          rows.push_back(GenSpaceCot(ann, scene, assignment, o.k, o.id_width).ToJson());
          break;
      }
    } catch (const json::exception& e) {
      skipped.push_back({{"line", line + 1}, {"reason", e.what()}});
    } catch (const ArgumentError& e) {
      skipped.push_back({{"line", line + 1}, {"reason", e.what()}});
    }
  }
  WriteJsonl(o.out, rows);
  WriteJsonFile(o.out + ".run.json", {{"config",
                                       {{"subcommand", "gen-cot"},
                                        {"kind", o.kind},
                                        {"annotations", o.annotations},
                                        {"scene_dir", o.scene_dir},
                                        {"seed", o.seed},
                                        {"order", o.order},
                                        {"k", o.k},
                                        {"id_width", o.id_width}}},
                                      {"records", rows.size()},
                                      {"skipped", skipped}});
  out << "wrote " << rows.size() << " CoT records, skipped " << skipped.size() << '\n';
  return kExitOk;
}

int CmdAssemble(const AssembleOptions& o, std::ostream& out) {
  const DatasetManifest manifest = DatasetManifest::Load(o.manifest);
  const AssembledDataset data = AssembleDataset(manifest, o.seed);
  WriteJsonl(o.out, data.records);
  json stats = data.StatsJson();
  stats["config"] = {{"subcommand", "assemble"}, {"manifest", manifest.ToJson()}, {"seed", o.seed}};
  WriteJsonFile(o.out + ".stats.json", stats);
  out << "emitted " << data.records.size() << " records from " << manifest.entries.size() << " sources\n";
  for (const SourceStats& s : data.stats) {
    if (s.mismatch) {
      out << "count mismatch: " << s.name << " expected " << s.expected << ", found " << s.actual << '\n';
    }
  }
  return data.HasMismatch() ? kExitValidation : kExitOk;
}

int CmdEval(const EvalCliOptions& o, std::ostream& out) {
  EvalOptions opts;
  opts.thresholds = o.thresholds;
  opts.cider_scale = o.cider_scale;
  opts.id_width = o.id_width;
  opts.scene_dir = o.scene_dir;
  opts.pred_base = fs::path(o.pred).parent_path();
  opts.gt_base = fs::path(o.gt).parent_path();
  EvalReport report = Evaluate(ParseBenchmark(o.benchmark), ReadJsonl(o.pred), ReadJsonl(o.gt), opts);
  report.config["pred"] = o.pred;
  report.config["gt"] = o.gt;
  const fs::path dir = o.out;
  fs::create_directories(dir);
  WriteJsonFile(dir / "report.json", report.ToJson());
  WriteTextFile(dir / "samples.csv", report.ToCsv());
  for (const auto& [name, value] : report.aggregates) out << name << " = " << value << '\n';
  return kExitOk;
}

int CmdSynth(const SynthCliOptions& o, std::ostream& out) {
  synth::SynthSpec spec;
  if (!o.spec.empty()) spec = synth::SynthSpec::FromJson(ReadJsonFile(o.spec));
  if (o.seed) spec.seed = *o.seed;
  const synth::SynthScene s = synth::GenScene(spec);
  synth::WriteSynthScene(o.out, s);
  out << "wrote " << s.scene.scene_id << ": " << s.scene.num_objects() << " objects, " << s.scene.views.size()
      << " views\n";
  return kExitOk;
}

int CmdTokenCost(const TokenCostOptions& o, std::ostream& out) {
  IdScheme scheme;
  scheme.kind = ParseIdKind(o.scheme);
  scheme.tokens_per_object_feature = o.feature_tokens;
  out << TokenCost(o.n, scheme) << '\n';
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"objseq: 3D scenes to object-identifier sequences, instruction data, and evaluation"};
  app.set_config("--config", "", "Optional TOML/INI file supplying flag defaults");
  app.require_subcommand(1);
  CommonOptions common;
  app.add_flag("-v,--verbose", common.verbosity, "Log progress to stderr");
  app.add_option("--jobs", common.jobs, "Worker threads; output is identical for any value")->check(CLI::PositiveNumber);

  const std::vector<std::string> orders = {"fixed", "random"};

  std::vector<std::string> bundles;
  std::string tasks_file, tasks_scene_dir;
  int validate_patch = kDefaultPatchSize;
  auto* validate = app.add_subcommand("validate", "Validate scene bundles and/or a task record JSONL");
  validate->add_option("--bundle", bundles, "Scene bundle directory (repeatable)");
  validate->add_option("--tasks", tasks_file, "TaskRecord JSONL to check");
  validate->add_option("--scene-dir", tasks_scene_dir, "Directory of bundles named by scene_id");
  validate->add_option("--patch-size", validate_patch, "Patch size of the feature grid")->check(CLI::PositiveNumber);

  SequenceOptions seq;
  auto* build_seq = app.add_subcommand("build-sequence", "Build the object sequence and fused features of a scene");
  build_seq->add_option("--bundle", seq.bundle, "Scene bundle directory")->required();
  build_seq->add_option("--out", seq.out, "Output directory")->required();
  build_seq->add_option("--order", seq.order, "Identifier order")->check(CLI::IsMember(orders));
  build_seq->add_option("--seed", seq.seed, "Seed for random order");
  build_seq->add_option("--epsilon", seq.epsilon, "Depth visibility tolerance (m)")->check(CLI::PositiveNumber);
  build_seq->add_flag("--require-depth", seq.require_depth, "Fail on views without depth maps");
  build_seq->add_option("--mask-size", seq.mask_size, "Mask size used to weight views")
      ->check(CLI::IsMember({"patches", "points"}));
  build_seq->add_option("--min-hits", seq.min_hits, "Visible points needed to cover a patch")->check(CLI::PositiveNumber);
  build_seq->add_option("--patch-size", seq.patch_size, "Patch size in pixels")->check(CLI::PositiveNumber);
  build_seq->add_option("--id-width", seq.id_width, "Identifier digit count")->check(CLI::Range(1, 9));
  build_seq->add_option("--feature-dim", seq.feature_dim, "2D feature dim for objects seen in no view");
  build_seq->add_option("--features-3d", seq.features_3d, "Per-proposal 3D feature table");
  build_seq->add_option("--proj-3d", seq.proj_3d, "3D-to-language projector table");
  build_seq->add_option("--proj-2d", seq.proj_2d, "2D-to-language projector table");

  TaskOptions task;
  auto* build_tasks = app.add_subcommand("build-tasks", "Build task records from annotations");
  build_tasks->add_option("--scene-dir", task.scene_dir, "Directory of bundles named by scene_id")->required();
  build_tasks->add_option("--manifest", task.manifest, "Annotation JSONL")->required();
  build_tasks->add_option("--seed", task.seed, "Seed for identifier order")->required();
  build_tasks->add_option("--out", task.out, "Output TaskRecord JSONL")->required();
  build_tasks->add_option("--order", task.order, "Identifier order")->check(CLI::IsMember(orders));
  build_tasks->add_option("--templates", task.templates, "Template JSON overriding the defaults");
  build_tasks->add_option("--id-width", task.id_width, "Identifier digit count")->check(CLI::Range(1, 9));

  CotOptions cot;
  auto* gen_cot = app.add_subcommand("gen-cot", "Generate grounded chain-of-thought records");
  gen_cot->add_option("--kind", cot.kind, "Template family")->required()->check(CLI::IsMember({"qa", "category", "space"}));
  gen_cot->add_option("--annotations", cot.annotations, "Annotation JSONL")->required();
  gen_cot->add_option("--scene-dir", cot.scene_dir, "Directory of bundles named by scene_id")->required();
  gen_cot->add_option("--seed", cot.seed, "Seed for identifier order")->required();
  gen_cot->add_option("--out", cot.out, "Output TaskRecord JSONL")->required();
  gen_cot->add_option("--order", cot.order, "Identifier order")->check(CLI::IsMember(orders));
  gen_cot->add_option("--k", cot.k, "Neighbors listed by space-level CoT")->check(CLI::PositiveNumber);
  gen_cot->add_option("--id-width", cot.id_width, "Identifier digit count")->check(CLI::Range(1, 9));

  AssembleOptions asm_opts;
  auto* assemble = app.add_subcommand("assemble", "Interleave record sources into one training stream");
  assemble->add_option("--manifest", asm_opts.manifest, "Dataset manifest JSON")->required();
  assemble->add_option("--seed", asm_opts.seed, "Interleave seed")->required();
  assemble->add_option("--out", asm_opts.out, "Output JSONL")->required();

  EvalCliOptions ev;
  auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->add_option("--benchmark", ev.benchmark, "Benchmark protocol")
      ->required()
      ->check(CLI::IsMember({"scanrefer", "multi3dref", "scan2cap", "scanqa", "sqa3d", "stiou"}));
  eval->add_option("--pred", ev.pred, "Predictions JSONL")->required();
  eval->add_option("--gt", ev.gt, "Ground-truth JSONL")->required();
  eval->add_option("--out", ev.out, "Output directory for report.json and samples.csv")->required();
  eval->add_option("--scene-dir", ev.scene_dir, "Directory of bundles named by scene_id");
  eval->add_option("--thresholds", ev.thresholds, "IoU thresholds")->delimiter(',');
  eval->add_option("--cider-scale", ev.cider_scale, "CIDEr scale factor (10 or 1)");
  eval->add_option("--id-width", ev.id_width, "Identifier digit count")->check(CLI::Range(1, 9));

  SynthCliOptions syn;
  std::uint64_t synth_seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene bundle with ground truth");
  synth_cmd->add_option("--spec", syn.spec, "Synth spec JSON (defaults if omitted)");
  synth_cmd->add_option("--out", syn.out, "Output bundle directory")->required();
  auto* seed_opt = synth_cmd->add_option("--seed", synth_seed, "Override the spec seed");

  TokenCostOptions tc;
  auto* token_cost = app.add_subcommand("token-cost", "Tokens needed to represent N objects");
  token_cost->add_option("--n", tc.n, "Object count")->required()->check(CLI::NonNegativeNumber);
  token_cost->add_option("--scheme", tc.scheme, "Identifier scheme")
      ->check(CLI::IsMember({"none", "plain_text", "single_token"}));
  token_cost->add_option("--feature-tokens", tc.feature_tokens, "Feature tokens per object")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_store = {"objseq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) {
      if (bundles.empty() && tasks_file.empty()) {
        err << "validate: pass --bundle and/or --tasks\n";
        return kExitUsage;
      }
      return CmdValidate(bundles, tasks_file, tasks_scene_dir, validate_patch, out);
    }
    if (*build_seq) return CmdBuildSequence(seq, common, out);
    if (*build_tasks) return CmdBuildTasks(task, out);
    if (*gen_cot) return CmdGenCot(cot, out);
    if (*assemble) return CmdAssemble(asm_opts, out);
    if (*eval) return CmdEval(ev, out);
    if (*synth_cmd) {
      if (seed_opt->count() > 0) syn.seed = synth_seed;
      return CmdSynth(syn, out);
    }
    if (*token_cost) return CmdTokenCost(tc, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ArgumentError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  }
  Log(common, err, "no subcommand");
  return kExitUsage;
}

}  // namespace objseq::cli
