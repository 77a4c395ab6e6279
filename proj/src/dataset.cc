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

#include "objseq/dataset.h"

#include <cmath>

#include "objseq/error.h"
#include "objseq/json_io.h"
#include "objseq/random.h"

namespace objseq {
namespace fs = std::filesystem;
using nlohmann::json;

long DatasetManifest::ExpectedTotal() const {
  long total = 0;
  for (const ManifestEntry& e : entries) total += e.expected_count;
  return total;
}

void DatasetManifest::Validate() const {
  if (entries.empty()) throw ValidationError("manifest:entries", "no sources");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "manifest:entries[" + std::to_string(i) + "]";
    if (entries[i].name.empty()) throw ValidationError(where + ".name", "must be non-empty");
    if (entries[i].expected_count < 0) throw ValidationError(where + ".expected_count", "must be >= 0");
    if (!(entries[i].weight > 0.0) || !std::isfinite(entries[i].weight)) {
      throw ValidationError(where + ".weight", "must be positive");
    }
  }
  if (!(tolerance >= 0.0)) throw ValidationError("manifest:tolerance", "must be >= 0");
}

DatasetManifest DatasetManifest::Load(const fs::path& path) {
  const json j = ReadJsonFile(path);
  DatasetManifest m;
  m.tolerance = j.value("tolerance", 0.0);
  try {
    for (const json& e : j.at("entries")) {
      ManifestEntry entry;
      entry.name = e.at("name").get<std::string>();
      entry.path = e.at("path").get<std::string>();
      if (entry.path.is_relative()) entry.path = path.parent_path() / entry.path;
      entry.expected_count = e.value("expected_count", 0L);
      const double fallback = entry.expected_count > 0 ? static_cast<double>(entry.expected_count) : 1.0;
      entry.weight = e.value("weight", fallback);
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ValidationError(path.filename().string(), e.what());
  }
  m.Validate();
  return m;
}

json DatasetManifest::ToJson() const {
  json entries_json = json::array();
  for (const ManifestEntry& e : entries) {
    entries_json.push_back({{"name", e.name},
                            {"path", e.path.string()},
                            {"expected_count", e.expected_count},
                            {"weight", e.weight}});
  }
  return {{"entries", entries_json}, {"tolerance", tolerance}};
}

bool AssembledDataset::HasMismatch() const {
  for (const SourceStats& s : stats) {
    if (s.mismatch) return true;
  }
  return false;
}

json AssembledDataset::StatsJson() const {
  json per = json::array();
  long expected = 0;
  long actual = 0;
  for (const SourceStats& s : stats) {
    per.push_back({{"name", s.name}, {"expected", s.expected}, {"actual", s.actual}, {"mismatch", s.mismatch}});
    expected += s.expected;
    actual += s.actual;
  }
  return {{"sources", per}, {"expected_total", expected}, {"actual_total", actual},
          {"emitted", records.size()}, {"mismatch", HasMismatch()}};
}

std::vector<std::size_t> InterleaveSchedule(const std::vector<std::size_t>& sizes,
                                            const std::vector<double>& weights, std::uint64_t seed) {
  if (sizes.size() != weights.size()) throw ArgumentError("InterleaveSchedule: size/weight count mismatch");
  std::vector<std::size_t> remaining = sizes;
  std::size_t left = 0;
  for (std::size_t s : sizes) left += s;
  std::vector<std::size_t> schedule;
  schedule.reserve(left);
  Rng rng(seed);
  while (left > 0) {
    double total = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] > 0) total += weights[i];
    }
    const double target = rng.Unit() * total;
    double acc = 0.0;
    std::size_t pick = remaining.size();
    std::size_t last_active = 0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] == 0) continue;
      last_active = i;
      acc += weights[i];
      if (target < acc) {
        pick = i;
        break;
      }
    }
    if (pick == remaining.size()) pick = last_active;  // target rounded up to the total
    --remaining[pick];
    --left;
    schedule.push_back(pick);
  }
  return schedule;
}

AssembledDataset AssembleDataset(const DatasetManifest& manifest, std::uint64_t seed) {
  manifest.Validate();
  std::vector<std::vector<json>> pools;
  AssembledDataset out;
  for (const ManifestEntry& e : manifest.entries) {
    std::vector<json> rows = ReadJsonl(e.path);
    Rng rng(DeriveSeed(seed, e.name));
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.Below(i)]);
    SourceStats st;
    st.name = e.name;
    st.expected = e.expected_count;
    st.actual = static_cast<long>(rows.size());
    st.mismatch = std::abs(static_cast<double>(st.actual - st.expected)) >
                  manifest.tolerance * static_cast<double>(st.expected);
    out.stats.push_back(st);
    pools.push_back(std::move(rows));
  }
  std::vector<std::size_t> sizes;
  std::vector<double> weights;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    sizes.push_back(pools[i].size());
    weights.push_back(manifest.entries[i].weight);
  }
  std::vector<std::size_t> cursor(pools.size(), 0);
  for (std::size_t src : InterleaveSchedule(sizes, weights, seed)) {
    out.records.push_back(std::move(pools[src][cursor[src]++]));
    out.sources.push_back(manifest.entries[src].name);
  }
  return out;
}

}  // namespace objseq
