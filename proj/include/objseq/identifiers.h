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

#ifndef OBJSEQ_IDENTIFIERS_H_
#define OBJSEQ_IDENTIFIERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace objseq {

inline constexpr int kDefaultIdWidth = 3;

// "<OBJ013>" for position 13 at width 3. Positions are 1-based and must fit
// in `width` digits; otherwise ArgumentError.
std::string MakeIdToken(int position, int width = kDefaultIdWidth);

// Largest position representable at `width`.
int MaxPosition(int width);

// Sequence position (1-based) <-> proposal index mapping for one scene.
struct IdAssignment {
  std::vector<int> permutation;  // permutation[position - 1] = proposal index
  std::optional<std::uint64_t> seed;

  int size() const { return static_cast<int>(permutation.size()); }
  int ProposalAt(int position) const;
  int PositionOf(int proposal_index) const;
  // Throws ArgumentError unless permutation is a bijection over 0..n-1.
  void Validate() const;
};

enum class OrderPolicy { kFixed, kRandom };

OrderPolicy ParseOrderPolicy(const std::string& name);

// kFixed gives the identity; kRandom a Fisher-Yates shuffle driven by `seed`.
IdAssignment AssignIds(int n, OrderPolicy policy, std::uint64_t seed = 0);

struct IdMatch {
  int position = 0;
  std::size_t begin = 0;  // byte offset of '<'
  std::size_t end = 0;    // one past '>'

  friend bool operator==(const IdMatch&, const IdMatch&) = default;
};

struct IdParse {
  std::vector<IdMatch> matches;
  std::vector<std::string> diagnostics;  // near-misses such as "<OBJ13>"

  std::vector<int> positions() const;
};

// Every "<OBJ" + exactly `width` digits + ">" token in textual order,
// duplicates kept. Position 0 and wrong-width tokens are reported, not matched.
IdParse ParseIdTokens(std::string_view text, int width = kDefaultIdWidth);

enum class IdKind { kNone, kPlainText, kSingleToken };

IdKind ParseIdKind(const std::string& name);

struct IdScheme {
  IdKind kind = IdKind::kSingleToken;
  int width = kDefaultIdWidth;
  int tokens_per_object_feature = 2;  // one 3D + one 2D token
};

// Plain-text identifiers such as "Obj001" cost this many LLM tokens.
inline constexpr long kPlainTextIdTokens = 4;

// Tokens spent representing `n` objects (identifiers plus feature tokens).
long TokenCost(long n, const IdScheme& scheme);

}  // namespace objseq

#endif  // OBJSEQ_IDENTIFIERS_H_
