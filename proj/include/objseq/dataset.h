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

#ifndef OBJSEQ_DATASET_H_
#define OBJSEQ_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace objseq {

struct ManifestEntry {
  std::string name;
  std::filesystem::path path;  // TaskRecord JSONL
  long expected_count = 0;
  double weight = 1.0;
};

// Mixture of record sources. Sampling weights default to the expected
// counts, so an unweighted mixture draws every record with equal probability.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  double tolerance = 0.0;  // allowed relative deviation from expected_count

  long ExpectedTotal() const;
  void Validate() const;

  // Relative paths resolve against the manifest's directory.
  static DatasetManifest Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
};

struct SourceStats {
  std::string name;
  long expected = 0;
  long actual = 0;
  bool mismatch = false;
};

struct AssembledDataset {
  std::vector<nlohmann::json> records;
  std::vector<std::string> sources;  // source name per emitted record
  std::vector<SourceStats> stats;

  bool HasMismatch() const;
  nlohmann::json StatsJson() const;
};

// Each source is shuffled with its own seeded stream; then, until all are
// exhausted, a source is drawn with probability proportional to its weight
// among the non-exhausted ones and its next record is emitted.
AssembledDataset AssembleDataset(const DatasetManifest& manifest, std::uint64_t seed);

// The schedule alone: source index per emitted record, given source sizes.
std::vector<std::size_t> InterleaveSchedule(const std::vector<std::size_t>& sizes,
                                            const std::vector<double>& weights, std::uint64_t seed);

}  // namespace objseq

#endif  // OBJSEQ_DATASET_H_
