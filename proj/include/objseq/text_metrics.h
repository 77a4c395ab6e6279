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

#ifndef OBJSEQ_TEXT_METRICS_H_
#define OBJSEQ_TEXT_METRICS_H_

#include <string>
#include <string_view>
#include <vector>

namespace objseq {

// Lowercase, ASCII punctuation to spaces, whitespace-split.
std::vector<std::string> CaptionTokens(std::string_view text);

// CaptionTokens with a leading article ("a", "an", "the") removed, rejoined
// by single spaces.
std::string NormalizeAnswer(std::string_view text);

// 1 iff the normalized prediction equals a normalized reference. The refined
// variant also accepts a reference appearing as a contiguous token run inside
// the prediction, or the prediction inside a reference.
int ExactMatch(std::string_view pred, const std::vector<std::string>& refs, bool refined);

// Sentence BLEU-4 against several references: clipped n-gram precisions for
// n = 1..4 with uniform weights, brevity penalty against the closest
// reference length (shorter wins ties). A zero count at n >= 2 is smoothed
// to 1 / (candidates + 1); zero unigram matches give 0.
double Bleu4(std::string_view pred, const std::vector<std::string>& refs);

struct CaptionSample {
  std::string pred;
  std::vector<std::string> refs;
};

struct CiderOptions {
  int max_n = 4;
  double sigma = 6.0;
  double scale = 10.0;
};

struct CiderResult {
  std::vector<double> per_sample;
  double mean = 0.0;
};

// CIDEr-D with document frequencies taken over the corpus references.
// A single-sample corpus has zero idf everywhere and therefore scores 0.
CiderResult CiderD(const std::vector<CaptionSample>& corpus, const CiderOptions& options = {});

enum class CaptionMetric { kCider, kBleu4 };

// Caption score per sample, zeroed when its localization IoU is below the
// threshold, averaged over samples.
double CaptionAtIou(const std::vector<CaptionSample>& samples, const std::vector<double>& ious,
                    double threshold, CaptionMetric metric, const CiderOptions& options = {});

}  // namespace objseq

#endif  // OBJSEQ_TEXT_METRICS_H_
