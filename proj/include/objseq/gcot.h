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

// Grounded chain-of-thought: multi-step rationales whose steps cite object
// identifiers, generated from existing annotations with fixed templates.

#ifndef OBJSEQ_GCOT_H_
#define OBJSEQ_GCOT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "objseq/identifiers.h"
#include "objseq/scene.h"
#include "objseq/tasking.h"

namespace objseq {

inline constexpr char kCotSuffix[] = "Please think through the answer step by step.";
inline constexpr int kDefaultSpaceNeighbors = 5;

enum class CotKind { kQa, kCategory, kSpace };

CotKind ParseCotKind(const std::string& name);
std::string ToString(CotKind kind);

// Object references are 1-based sequence positions.
struct CotAnnotation {
  CotKind kind = CotKind::kQa;
  std::string record_id;
  std::string text;                 // question (qa) or description (category, space)
  std::vector<int> related;         // qa
  std::string answer;               // qa
  std::string category;             // category
  std::vector<int> same_category;   // category, includes target
  int target = 0;                   // category, space
};

// Two steps: related objects, then "The answer is: <answer>."
TaskRecord GenQaCot(const CotAnnotation& a, const Scene& scene, const IdAssignment& assignment,
                    int width = kDefaultIdWidth);

// Three steps: category name, all objects of that category, the target.
TaskRecord GenCategoryCot(const CotAnnotation& a, const Scene& scene, const IdAssignment& assignment,
                          int width = kDefaultIdWidth);

// Two steps: the k objects nearest the target by centroid distance, then the target.
TaskRecord GenSpaceCot(const CotAnnotation& a, const Scene& scene, const IdAssignment& assignment,
                       int k = kDefaultSpaceNeighbors, int width = kDefaultIdWidth);

// Positions of the (up to) k non-target objects closest to the target's
// centroid, nearest first; equal distances go to the smaller proposal index.
std::vector<int> NearestPositions(const Scene& scene, const IdAssignment& assignment, int target_position,
                                  int k = kDefaultSpaceNeighbors);

struct CotStep {
  int number = 0;
  std::string text;
  std::vector<int> cited;
};

struct CotParse {
  std::vector<CotStep> steps;
  std::optional<std::string> answer;  // text after "The answer is:", or the whole reply without steps
  std::vector<int> final_positions;   // last step's identifiers (all identifiers without steps)
  std::vector<std::string> diagnostics;
};

// Lenient: never throws, reports oddities in diagnostics.
CotParse ParseCotResponse(std::string_view text, int width = kDefaultIdWidth);

// Text between the first and last double quote, if any.
std::optional<std::string> QuotedText(std::string_view text);

}  // namespace objseq

#endif  // OBJSEQ_GCOT_H_
