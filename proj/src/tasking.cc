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

#include "objseq/tasking.h"

#include <array>
#include <utility>

#include "objseq/error.h"
#include "objseq/json_io.h"

namespace objseq {
using nlohmann::json;

namespace {

constexpr std::array<std::pair<TaskKind, const char*>, 10> kKindNames = {{
    {TaskKind::kGroundingSingle, "grounding_single"},
    {TaskKind::kGroundingMulti, "grounding_multi"},
    {TaskKind::kDenseCaption, "dense_caption"},
    {TaskKind::kQa, "qa"},
    {TaskKind::kSituatedQa, "situated_qa"},
    {TaskKind::kObjAlign, "obj_align"},
    {TaskKind::kObjCaption, "obj_caption"},
    {TaskKind::kSceneCaption, "scene_caption"},
    {TaskKind::kCotQa, "cot_qa"},
    {TaskKind::kCotGrounding, "cot_grounding"},
}};

bool IsCotKind(TaskKind kind) { return kind == TaskKind::kCotQa || kind == TaskKind::kCotGrounding; }

// Kinds whose record names exactly one target object.
bool NeedsSingleTarget(TaskKind kind) {
  return kind == TaskKind::kGroundingSingle || kind == TaskKind::kDenseCaption ||
         kind == TaskKind::kObjAlign || kind == TaskKind::kObjCaption;
}

}  // namespace

std::string ToString(TaskKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

TaskKind ParseTaskKind(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  throw ArgumentError("unknown task kind '" + name + "'");
}

json TaskRecord::ToJson() const {
  return {{"record_id", record_id},
          {"scene_id", scene_id},
          {"task_kind", ToString(task_kind)},
          {"system_prompt", system_prompt},
          {"user_text", user_text},
          {"assistant_text", assistant_text},
          {"target_ids", target_ids},
          {"meta", meta}};
}

TaskRecord TaskRecord::FromJson(const json& j) {
  TaskRecord r;
  try {
    r.record_id = j.at("record_id").get<std::string>();
    r.scene_id = j.at("scene_id").get<std::string>();
    r.task_kind = ParseTaskKind(j.at("task_kind").get<std::string>());
    r.system_prompt = j.at("system_prompt").get<std::string>();
    r.user_text = j.at("user_text").get<std::string>();
    r.assistant_text = j.at("assistant_text").get<std::string>();
    r.target_ids = j.at("target_ids").get<std::vector<int>>();
    r.meta = j.value("meta", json::object());
  } catch (const json::exception& e) {
    throw ValidationError("task record " + j.value("record_id", std::string("?")), e.what());
  }
  return r;
}

SystemPrompt RenderSystemPrompt(const IdAssignment& assignment, int width) {
  assignment.Validate();
  const int n = assignment.size();
  if (n < 1) throw ArgumentError("system prompt needs at least one object");
  if (n > MaxPosition(width)) {
    throw ArgumentError(std::to_string(n) + " objects exceed the ID range at width " + std::to_string(width));
  }
  SystemPrompt out;
  out.text = std::string(kSystemPreamble) + " The conversation centers around an indoor scene: [";
  for (int pos = 1; pos <= n; ++pos) {
    if (pos > 1) out.text += ' ';
    out.text += MakeIdToken(pos, width);
    out.text += ' ';
    out.text += kObjectPlaceholder;
    out.bindings.push_back(assignment.ProposalAt(pos));
  }
  out.text += "]. ";
  return out;
}

std::string JoinIdTokens(const std::vector<int>& positions, int width) {
  std::string out;
  const std::size_t n = positions.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      if (n == 2) {
        out += " and ";
      } else {
        out += (i + 1 == n) ? ", and " : ", ";
      }
    }
    out += MakeIdToken(positions[i], width);
  }
  return out;
}

TaskTemplates TaskTemplates::Defaults() {
  TaskTemplates t;
  t.by_kind[TaskKind::kGroundingSingle] = {
      "According to the given description, \"{description}\", please provide the ID of the object "
      "that closely matches this description.",
      "{target}"};
  t.by_kind[TaskKind::kGroundingMulti] = {
      "Are there any objects fitting the description of \"{description}\"? If so, kindly provide "
      "the IDs for those objects.",
      "{targets}"};
  t.by_kind[TaskKind::kDenseCaption] = {
      "Describe the object {target} in the scene, covering its appearance and its spatial relation "
      "to nearby objects.",
      "{caption}"};
  t.by_kind[TaskKind::kQa] = {"{question} Answer the question using a single word or phrase.", "{answer}"};
  t.by_kind[TaskKind::kSituatedQa] = {
      "{situation} {question} Answer the question using a single word or phrase.", "{answer}"};
  t.by_kind[TaskKind::kObjAlign] = {"What is the category of {target}?", "{category}"};
  t.by_kind[TaskKind::kObjCaption] = {"Describe {target} in detail.", "{caption}"};
  t.by_kind[TaskKind::kSceneCaption] = {"Describe this scene in detail.", "{caption}"};
  t.no_match = "No objects match the description.";
  return t;
}

TaskTemplates TaskTemplates::Load(const std::filesystem::path& path) {
  TaskTemplates t = Defaults();
  const json j = ReadJsonFile(path);
  const std::string file = path.filename().string();
  if (!j.is_object()) throw ValidationError(file, "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "no_match") {
      t.no_match = value.get<std::string>();
      continue;
    }
    TaskKind kind;
    try {
      kind = ParseTaskKind(key);
    } catch (const ArgumentError& e) {
      throw ValidationError(file + ":" + key, e.what());
    }
    if (IsCotKind(kind)) throw ValidationError(file + ":" + key, "CoT phrasing is fixed");
    Pair& p = t.by_kind[kind];
    if (value.contains("user")) p.user = value.at("user").get<std::string>();
    if (value.contains("assistant")) p.assistant = value.at("assistant").get<std::string>();
  }
  return t;
}

json TaskTemplates::ToJson() const {
  json j = json::object();
  for (const auto& [kind, p] : by_kind) j[ToString(kind)] = {{"user", p.user}, {"assistant", p.assistant}};
  j["no_match"] = no_match;
  return j;
}

std::string FillTemplate(const std::string& tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out += tmpl[i++];
      continue;
    }
    const std::size_t close = tmpl.find('}', i);
    if (close == std::string::npos) throw ArgumentError("unterminated placeholder in template: " + tmpl);
    const std::string name = tmpl.substr(i + 1, close - i - 1);
    const auto it = values.find(name);
    if (it == values.end()) throw ArgumentError("missing field '" + name + "'");
    out += it->second;
    i = close + 1;
  }
  return out;
}

TaskRecord MakeTaskRecord(TaskKind kind, const Scene& scene, const IdAssignment& assignment,
                          const TaskFields& fields, const TaskTemplates& templates, int width) {
  if (IsCotKind(kind)) throw ArgumentError(ToString(kind) + " records are produced by the CoT generators");
  const int n = assignment.size();
  if (static_cast<std::size_t>(n) != scene.num_objects()) {
    throw ArgumentError("assignment covers " + std::to_string(n) + " objects, scene has " +
                        std::to_string(scene.num_objects()));
  }
  for (int t : fields.targets) {
    if (t < 1 || t > n) {
      throw ArgumentError("target position " + std::to_string(t) + " outside [1, " + std::to_string(n) + "]");
    }
  }
  if (NeedsSingleTarget(kind) && fields.targets.size() != 1) {
    throw ArgumentError(ToString(kind) + " needs exactly one target, got " + std::to_string(fields.targets.size()));
  }
  if ((kind == TaskKind::kQa || kind == TaskKind::kSituatedQa) && fields.answers.empty()) {
    throw ArgumentError("missing field 'answers'");
  }

  std::map<std::string, std::string> values;
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) values[key] = *v;
  };
  put("description", fields.description);
  put("question", fields.question);
  put("situation", fields.situation);
  put("caption", fields.caption);
  put("category", fields.category);
  if (!fields.answers.empty()) values["answer"] = fields.answers.front();
  if (fields.targets.size() == 1) values["target"] = MakeIdToken(fields.targets.front(), width);
  values["targets"] = JoinIdTokens(fields.targets, width);

  const auto it = templates.by_kind.find(kind);
  if (it == templates.by_kind.end()) throw ArgumentError("no template for " + ToString(kind));

  TaskRecord r;
  r.record_id = fields.record_id;
  r.scene_id = scene.scene_id;
  r.task_kind = kind;
  r.system_prompt = RenderSystemPrompt(assignment, width).text;
  r.user_text = FillTemplate(it->second.user, values);
  if (kind == TaskKind::kGroundingMulti && fields.targets.empty()) {
    r.assistant_text = templates.no_match;
  } else {
    r.assistant_text = FillTemplate(it->second.assistant, values);
  }
  r.target_ids = fields.targets;
  r.meta = fields.meta.is_object() ? fields.meta : json::object();
  r.meta["id_width"] = width;
  r.meta["permutation"] = assignment.permutation;
  if (!fields.answers.empty()) r.meta["answers"] = fields.answers;
  return r;
}

std::vector<std::string> ValidateTaskRecord(const TaskRecord& record, int num_objects, int width) {
  std::vector<std::string> issues;
  const std::string who = "record " + record.record_id + ": ";
  if (record.record_id.empty()) issues.push_back("record with empty record_id");
  if (record.scene_id.empty()) issues.push_back(who + "empty scene_id");
  for (const auto* text : {&record.user_text, &record.assistant_text}) {
    const IdParse parse = ParseIdTokens(*text, width);
    for (const std::string& d : parse.diagnostics) issues.push_back(who + d);
    for (const IdMatch& m : parse.matches) {
      if (m.position > num_objects) {
        issues.push_back(who + "identifier " + MakeIdToken(m.position, width) + " exceeds object count " +
                         std::to_string(num_objects));
      }
    }
  }
  for (int t : record.target_ids) {
    if (t < 1 || t > num_objects) issues.push_back(who + "target position " + std::to_string(t) + " out of range");
  }
  const IdParse sys = ParseIdTokens(record.system_prompt, width);
  const std::vector<int> positions = sys.positions();
  bool sequential = static_cast<int>(positions.size()) == num_objects;
  for (std::size_t i = 0; sequential && i < positions.size(); ++i) sequential = positions[i] == static_cast<int>(i) + 1;
  if (!sequential) issues.push_back(who + "system prompt does not list positions 1.." + std::to_string(num_objects));
  return issues;
}

std::vector<int> PackedSequence::tokens() const {
  std::vector<int> all = prefix_tokens;
  all.insert(all.end(), response_tokens.begin(), response_tokens.end());
  return all;
}

PackedSequence PackSequence(std::vector<int> prefix_tokens, std::vector<int> response_tokens) {
  if (response_tokens.empty()) throw ArgumentError("PackSequence: response must be non-empty");
  PackedSequence s;
  s.loss_mask.assign(prefix_tokens.size(), false);
  s.loss_mask.resize(prefix_tokens.size() + response_tokens.size(), true);
  s.prefix_tokens = std::move(prefix_tokens);
  s.response_tokens = std::move(response_tokens);
  return s;
}

}  // namespace objseq
