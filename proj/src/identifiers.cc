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

#include "objseq/identifiers.h"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "objseq/error.h"
#include "objseq/random.h"

namespace objseq {

int MaxPosition(int width) {
  if (width < 1 || width > 9) throw ArgumentError("ID width must be in [1, 9]");
  int m = 1;
  for (int i = 0; i < width; ++i) m *= 10;
  return m - 1;
}

std::string MakeIdToken(int position, int width) {
  const int max = MaxPosition(width);
  if (position < 1 || position > max) {
    throw ArgumentError("ID position " + std::to_string(position) + " outside [1, " +
                        std::to_string(max) + "]");
  }
  std::string digits = std::to_string(position);
  digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return "<OBJ" + digits + ">";
}

int IdAssignment::ProposalAt(int position) const {
  if (position < 1 || position > size()) {
    throw ArgumentError("position " + std::to_string(position) + " outside [1, " + std::to_string(size()) + "]");
  }
  return permutation[static_cast<std::size_t>(position - 1)];
}

int IdAssignment::PositionOf(int proposal_index) const {
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    if (permutation[i] == proposal_index) return static_cast<int>(i) + 1;
  }
  throw ArgumentError("proposal " + std::to_string(proposal_index) + " not in assignment");
}

void IdAssignment::Validate() const {
  std::vector<bool> seen(permutation.size(), false);
  for (int p : permutation) {
    if (p < 0 || static_cast<std::size_t>(p) >= permutation.size() || seen[static_cast<std::size_t>(p)]) {
      throw ArgumentError("assignment is not a permutation of 0..n-1");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
}

OrderPolicy ParseOrderPolicy(const std::string& name) {
  if (name == "fixed") return OrderPolicy::kFixed;
  if (name == "random") return OrderPolicy::kRandom;
  throw ArgumentError("unknown order policy '" + name + "' (expected fixed|random)");
}

IdAssignment AssignIds(int n, OrderPolicy policy, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("AssignIds: need at least one object");
  IdAssignment a;
  a.permutation.resize(static_cast<std::size_t>(n));
  std::iota(a.permutation.begin(), a.permutation.end(), 0);
  if (policy == OrderPolicy::kRandom) {
    a.seed = seed;
    Rng rng(seed);
    for (std::size_t i = a.permutation.size() - 1; i > 0; --i) {
      std::swap(a.permutation[i], a.permutation[rng.Below(i + 1)]);
    }
  }
  return a;
}

std::vector<int> IdParse::positions() const {
  std::vector<int> out;
  out.reserve(matches.size());
  for (const IdMatch& m : matches) out.push_back(m.position);
  return out;
}

IdParse ParseIdTokens(std::string_view text, int width) {
  MaxPosition(width);
  IdParse out;
  constexpr std::string_view kOpen = "<OBJ";
  std::size_t pos = 0;
  while ((pos = text.find(kOpen, pos)) != std::string_view::npos) {
    std::size_t i = pos + kOpen.size();
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t ndigits = i - (pos + kOpen.size());
    const bool closed = i < text.size() && text[i] == '>';
    if (closed && ndigits == static_cast<std::size_t>(width)) {
      const int value = std::stoi(std::string(text.substr(pos + kOpen.size(), ndigits)));
      if (value >= 1) {
        out.matches.push_back({value, pos, i + 1});
        pos = i + 1;
        continue;
      }
    }
    if (closed && ndigits > 0) {
      out.diagnostics.push_back("ignored malformed identifier '" + std::string(text.substr(pos, i + 1 - pos)) +
                                "' at byte " + std::to_string(pos));
    }
    pos += 1;
  }
  return out;
}

IdKind ParseIdKind(const std::string& name) {
  if (name == "none") return IdKind::kNone;
  if (name == "plain_text") return IdKind::kPlainText;
  if (name == "single_token") return IdKind::kSingleToken;
  throw ArgumentError("unknown ID scheme '" + name + "' (expected none|plain_text|single_token)");
}

long TokenCost(long n, const IdScheme& scheme) {
  if (n < 0) throw ArgumentError("TokenCost: negative object count");
  if (scheme.tokens_per_object_feature < 1) throw ArgumentError("TokenCost: need >= 1 feature token");
  const long features = scheme.tokens_per_object_feature;
  switch (scheme.kind) {
    case IdKind::kNone:
      return features * n;
    case IdKind::kPlainText:
      return (kPlainTextIdTokens + features) * n;
    case IdKind::kSingleToken:
      return (1 + features) * n;
  }
  return 0;
}

}  // namespace objseq
