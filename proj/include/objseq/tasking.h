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

#ifndef OBJSEQ_TASKING_H_
#define OBJSEQ_TASKING_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "objseq/identifiers.h"
#include "objseq/scene.h"

namespace objseq {

enum class TaskKind {
  kGroundingSingle,
  kGroundingMulti,
  kDenseCaption,
  kQa,
  kSituatedQa,
  kObjAlign,
  kObjCaption,
  kSceneCaption,
  kCotQa,
  kCotGrounding,
};

std::string ToString(TaskKind kind);
TaskKind ParseTaskKind(const std::string& name);

// One single-turn user/assistant training or evaluation sample.
struct TaskRecord {
  std::string record_id;
  std::string scene_id;
  TaskKind task_kind = TaskKind::kQa;
  std::string system_prompt;
  std::string user_text;
  std::string assistant_text;
  std::vector<int> target_ids;  // 1-based sequence positions
  nlohmann::json meta = nlohmann::json::object();

  nlohmann::json ToJson() const;
  static TaskRecord FromJson(const nlohmann::json& j);

  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

inline constexpr char kSystemPreamble[] =
    "A chat between a curious user and an artificial intelligence assistant. "
    "The assistant gives helpful, detailed, and polite answers to the user's questions.";
inline constexpr char kObjectPlaceholder[] = "<object>";

struct SystemPrompt {
  std::string text;
  // bindings[k] is the proposal whose features fill the k-th "<object>".
  std::vector<int> bindings;
};

// Scene-as-sequence system message: the preamble, then every object as
// "<OBJkkk> <object>" in position order inside "[...]. ".
SystemPrompt RenderSystemPrompt(const IdAssignment& assignment, int width = kDefaultIdWidth);

// Renders positions as ID tokens: "A", "A and B", "A, B, and C".
std::string JoinIdTokens(const std::vector<int>& positions, int width = kDefaultIdWidth);

// Per-kind user/assistant phrasing with {placeholder} slots. Placeholders:
// {description} {question} {situation} {caption} {answer} {category}
// {target} (one ID token) and {targets} (joined ID tokens).
struct TaskTemplates {
  struct Pair {
    std::string user;
    std::string assistant;
  };
  std::map<TaskKind, Pair> by_kind;
  std::string no_match;  // assistant text for zero-target multi-object grounding

  static TaskTemplates Defaults();
  // Entries in the file override the defaults kind by kind.
  static TaskTemplates Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
};

// Annotation content for one record. Object references are sequence positions.
struct TaskFields {
  std::string record_id;
  std::optional<std::string> description;
  std::optional<std::string> question;
  std::optional<std::string> situation;
  std::optional<std::string> caption;
  std::optional<std::string> category;
  std::vector<std::string> answers;
  std::vector<int> targets;
  nlohmann::json meta = nlohmann::json::object();
};

// Builds a record for the non-CoT kinds; CoT kinds come from the gcot
// generators. Throws ArgumentError on a missing field or out-of-range target.
TaskRecord MakeTaskRecord(TaskKind kind, const Scene& scene, const IdAssignment& assignment,
                          const TaskFields& fields, const TaskTemplates& templates = TaskTemplates::Defaults(),
                          int width = kDefaultIdWidth);

// Fills `tmpl` from `values`; unknown placeholders raise ArgumentError.
std::string FillTemplate(const std::string& tmpl, const std::map<std::string, std::string>& values);

// Invariant violations of `record` for a scene with `num_objects` objects.
std::vector<std::string> ValidateTaskRecord(const TaskRecord& record, int num_objects,
                                            int width = kDefaultIdWidth);

// Token stream for the autoregressive loss: the loss covers the response only.
struct PackedSequence {
  std::vector<int> prefix_tokens;
  std::vector<int> response_tokens;
  std::vector<bool> loss_mask;

  std::vector<int> tokens() const;
  std::size_t response_start() const { return prefix_tokens.size(); }
};

PackedSequence PackSequence(std::vector<int> prefix_tokens, std::vector<int> response_tokens);

}  // namespace objseq

#endif  // OBJSEQ_TASKING_H_
