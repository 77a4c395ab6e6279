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

#include "objseq/gcot.h"

#include <algorithm>
#include <cctype>

#include "objseq/error.h"

namespace objseq {
using nlohmann::json;

namespace {

constexpr std::string_view kAnswerMarker = "The answer is:";

void CheckPositions(const std::vector<int>& positions, int n, const char* what) {
  for (int p : positions) {
    if (p < 1 || p > n) {
      throw ArgumentError(std::string(what) + " position " + std::to_string(p) + " outside [1, " +
                          std::to_string(n) + "]");
    }
  }
}

std::string GroundingQuestion(const std::string& description) {
  return "What's the ID of the object that corresponds to the description \"" + description + "\"? " +
         kCotSuffix;
}

TaskRecord BaseRecord(const CotAnnotation& a, const Scene& scene, const IdAssignment& assignment, int width) {
  if (static_cast<std::size_t>(assignment.size()) != scene.num_objects()) {
    throw ArgumentError("assignment does not cover the scene's objects");
  }
  if (a.text.empty()) throw ArgumentError("CoT annotation " + a.record_id + " has empty text");
  TaskRecord r;
  r.record_id = a.record_id;
  r.scene_id = scene.scene_id;
  r.system_prompt = RenderSystemPrompt(assignment, width).text;
  r.meta["id_width"] = width;
  r.meta["permutation"] = assignment.permutation;
  r.meta["cot_template"] = ToString(a.kind);
  return r;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string StripFinalPeriod(std::string s) {
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

CotKind ParseCotKind(const std::string& name) {
  if (name == "qa") return CotKind::kQa;
  if (name == "category") return CotKind::kCategory;
  if (name == "space") return CotKind::kSpace;
  throw ArgumentError("unknown CoT kind '" + name + "' (expected qa|category|space)");
}

std::string ToString(CotKind kind) {
  switch (kind) {
    case CotKind::kQa:
      return "qa";
    case CotKind::kCategory:
      return "category";
    case CotKind::kSpace:
      return "space";
  }
  return "qa";
}

TaskRecord GenQaCot(const CotAnnotation& a, const Scene& scene, const IdAssignment& assignment, int width) {
  TaskRecord r = BaseRecord(a, scene, assignment, width);
  if (a.related.empty()) throw ArgumentError("QA CoT needs at least one related object");
  if (a.answer.empty()) throw ArgumentError("QA CoT needs an answer");
  CheckPositions(a.related, assignment.size(), "related");
  r.task_kind = TaskKind::kCotQa;
  r.user_text = a.text + " " + kCotSuffix;
  r.assistant_text = "[Step 1] The objects related to the question " +
                     std::string(a.related.size() == 1 ? "is " : "are ") + JoinIdTokens(a.related, width) +
                     ".\n[Step 2] The answer is: " + a.answer + ".";
  r.target_ids = a.related;
  r.meta["answers"] = std::vector<std::string>{a.answer};
  return r;
}

TaskRecord GenCategoryCot(const CotAnnotation& a, const Scene& scene, const IdAssignment& assignment,
                          int width) {
  TaskRecord r = BaseRecord(a, scene, assignment, width);
  if (a.category.empty()) throw ArgumentError("category CoT needs a category name");
  CheckPositions(a.same_category, assignment.size(), "category member");
  CheckPositions({a.target}, assignment.size(), "target");
  if (std::find(a.same_category.begin(), a.same_category.end(), a.target) == a.same_category.end()) {
    throw ArgumentError("target " + std::to_string(a.target) + " is not among the category members");
  }
  r.task_kind = TaskKind::kCotGrounding;
  r.user_text = GroundingQuestion(a.text);
  r.assistant_text = "[Step 1] The category name of the target object is \"" + a.category +
                     "\".\n[Step 2] There are " + std::to_string(a.same_category.size()) +
                     " objects in this category: " + JoinIdTokens(a.same_category, width) +
                     ".\n[Step 3] The target object is " + MakeIdToken(a.target, width) + ".";
  r.target_ids = {a.target};
  r.meta["category"] = a.category;
  r.meta["related"] = a.same_category;
  return r;
}

std::vector<int> NearestPositions(const Scene& scene, const IdAssignment& assignment, int target_position,
                                  int k) {
  const int target = assignment.ProposalAt(target_position);
  const Eigen::Vector3d center = ObjectCentroid(scene, target);
  struct Candidate {
    double dist2;
    int proposal;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < static_cast<int>(scene.num_objects()); ++i) {
    if (i == target) continue;
    candidates.push_back({(ObjectCentroid(scene, i) - center).squaredNorm(), i});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.proposal < b.proposal;
  });
  if (static_cast<int>(candidates.size()) > k) candidates.resize(static_cast<std::size_t>(k));
  std::vector<int> out;
  for (const Candidate& c : candidates) out.push_back(assignment.PositionOf(c.proposal));
  return out;
}

TaskRecord GenSpaceCot(const CotAnnotation& a, const Scene& scene, const IdAssignment& assignment, int k,
                       int width) {
  TaskRecord r = BaseRecord(a, scene, assignment, width);
  if (k < 1) throw ArgumentError("space CoT needs k >= 1");
  CheckPositions({a.target}, assignment.size(), "target");
  if (scene.num_objects() < 2) throw ArgumentError("space CoT needs at least one non-target object");
  const std::vector<int> related = NearestPositions(scene, assignment, a.target, k);
  r.task_kind = TaskKind::kCotGrounding;
  r.user_text = GroundingQuestion(a.text);
  r.assistant_text = "[Step 1] The spatially related objects could include: " + JoinIdTokens(related, width) +
                     ".\n[Step 2] The target object is " + MakeIdToken(a.target, width) + ".";
  r.target_ids = {a.target};
  r.meta["related"] = related;
  return r;
}

CotParse ParseCotResponse(std::string_view text, int width) {
  CotParse out;
  struct Marker {
    std::size_t begin;
    std::size_t end;
    int number;
  };
  std::vector<Marker> markers;
  constexpr std::string_view kOpen = "[Step ";
  std::size_t pos = 0;
  while ((pos = text.find(kOpen, pos)) != std::string_view::npos) {
    std::size_t i = pos + kOpen.size();
    const std::size_t digits_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i > digits_begin && i - digits_begin <= 6 && i < text.size() && text[i] == ']') {
      markers.push_back({pos, i + 1, std::stoi(std::string(text.substr(digits_begin, i - digits_begin)))});
      pos = i + 1;
    } else {
      pos += 1;
    }
  }

  for (std::size_t m = 0; m < markers.size(); ++m) {
    const std::size_t end = m + 1 < markers.size() ? markers[m + 1].begin : text.size();
    CotStep step;
    step.number = markers[m].number;
    step.text = Trim(text.substr(markers[m].end, end - markers[m].end));
    const IdParse ids = ParseIdTokens(step.text, width);
    step.cited = ids.positions();
    for (const std::string& d : ids.diagnostics) out.diagnostics.push_back("step " + std::to_string(step.number) + ": " + d);
    if (step.number != static_cast<int>(m) + 1) {
      out.diagnostics.push_back("step marker " + std::to_string(step.number) + " found where " +
                                std::to_string(m + 1) + " was expected");
    }
    out.steps.push_back(std::move(step));
  }

  if (out.steps.empty()) {
    const std::string whole = Trim(text);
    const std::size_t at = whole.find(kAnswerMarker);
    out.answer = at == std::string::npos ? whole : StripFinalPeriod(Trim(std::string_view(whole).substr(at + kAnswerMarker.size())));
    const IdParse ids = ParseIdTokens(whole, width);
    out.final_positions = ids.positions();
    for (const std::string& d : ids.diagnostics) out.diagnostics.push_back(d);
    return out;
  }
  if (!Trim(text.substr(0, markers.front().begin)).empty()) {
    out.diagnostics.push_back("text before the first step marker ignored");
  }
  for (auto it = out.steps.rbegin(); it != out.steps.rend(); ++it) {
    const std::size_t at = it->text.find(kAnswerMarker);
    if (at != std::string::npos) {
      out.answer = StripFinalPeriod(Trim(std::string_view(it->text).substr(at + kAnswerMarker.size())));
      break;
    }
  }
  out.final_positions = out.steps.back().cited;
  return out;
}

std::optional<std::string> QuotedText(std::string_view text) {
  const std::size_t first = text.find('"');
  const std::size_t last = text.rfind('"');
  if (first == std::string_view::npos || last == first) return std::nullopt;
  return std::string(text.substr(first + 1, last - first - 1));
}

}  // namespace objseq
