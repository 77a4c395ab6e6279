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

#include "objseq/text_metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "objseq/error.h"

namespace objseq {
namespace {

using NgramCounts = std::map<std::string, int>;

// Keys are tokens joined by ' '.
std::vector<NgramCounts> CountNgrams(const std::vector<std::string>& tokens, int max_n) {
  std::vector<NgramCounts> out(static_cast<std::size_t>(max_n));
  for (int n = 1; n <= max_n; ++n) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (int k = 1; k < n; ++k) key += ' ' + tokens[i + static_cast<std::size_t>(k)];
      ++out[static_cast<std::size_t>(n - 1)][key];
    }
  }
  return out;
}

bool ContainsRun(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::vector<std::string> SplitSpaces(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t j = s.find(' ', i);
    const std::size_t end = j == std::string::npos ? s.size() : j;
    if (end > i) out.push_back(s.substr(i, end - i));
    i = end + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> CaptionTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || std::ispunct(c)) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(c));
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::string NormalizeAnswer(std::string_view text) {
  std::vector<std::string> tokens = CaptionTokens(text);
  if (!tokens.empty() && (tokens[0] == "a" || tokens[0] == "an" || tokens[0] == "the")) {
    tokens.erase(tokens.begin());
  }
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

int ExactMatch(std::string_view pred, const std::vector<std::string>& refs, bool refined) {
  if (refs.empty()) throw ArgumentError("ExactMatch: no references");
  const std::string p = NormalizeAnswer(pred);
  for (const std::string& ref : refs) {
    if (p == NormalizeAnswer(ref)) return 1;
  }
  if (!refined) return 0;
  const std::vector<std::string> ptoks = SplitSpaces(p);
  for (const std::string& ref : refs) {
    const std::vector<std::string> rtoks = SplitSpaces(NormalizeAnswer(ref));
    if (ContainsRun(ptoks, rtoks) || ContainsRun(rtoks, ptoks)) return 1;
  }
  return 0;
}

double Bleu4(std::string_view pred, const std::vector<std::string>& refs) {
  if (refs.empty()) throw ArgumentError("Bleu4: no references");
  constexpr int kMaxN = 4;
  const std::vector<std::string> cand = CaptionTokens(pred);
  if (cand.empty()) return 0.0;
  const std::vector<NgramCounts> cand_counts = CountNgrams(cand, kMaxN);
  std::vector<NgramCounts> max_ref(kMaxN);
  std::size_t closest = 0;
  bool have_closest = false;
  for (const std::string& r : refs) {
    const std::vector<std::string> rt = CaptionTokens(r);
    const auto diff = [&](std::size_t len) { return len > cand.size() ? len - cand.size() : cand.size() - len; };
    if (!have_closest || diff(rt.size()) < diff(closest) || (diff(rt.size()) == diff(closest) && rt.size() < closest)) {
      closest = rt.size();
      have_closest = true;
    }
    const std::vector<NgramCounts> rc = CountNgrams(rt, kMaxN);
    for (std::size_t n = 0; n < kMaxN; ++n) {
      for (const auto& [g, c] : rc[n]) max_ref[n][g] = std::max(max_ref[n][g], c);
    }
  }
  double log_sum = 0.0;
  for (std::size_t n = 0; n < kMaxN; ++n) {
    long matched = 0;
    long total = 0;
    for (const auto& [g, c] : cand_counts[n]) {
      total += c;
      const auto it = max_ref[n].find(g);
      if (it != max_ref[n].end()) matched += std::min(c, it->second);
    }
    double precision;
    if (matched > 0) {
      precision = static_cast<double>(matched) / static_cast<double>(total);
    } else if (n == 0) {
      return 0.0;
    } else {
      precision = 1.0 / static_cast<double>(total + 1);
    }
    log_sum += std::log(precision) / kMaxN;
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(closest);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum);
}

CiderResult CiderD(const std::vector<CaptionSample>& corpus, const CiderOptions& options) {
  if (corpus.empty()) throw ArgumentError("CiderD: empty corpus");
  const int max_n = options.max_n;
  const auto nn = static_cast<std::size_t>(max_n);

  std::vector<std::vector<NgramCounts>> hyp_counts;
  std::vector<std::vector<std::vector<NgramCounts>>> ref_counts;
  std::map<std::string, double> doc_freq;
  for (const CaptionSample& s : corpus) {
    if (s.refs.empty()) throw ArgumentError("CiderD: sample without references");
    hyp_counts.push_back(CountNgrams(CaptionTokens(s.pred), max_n));
    std::vector<std::vector<NgramCounts>> refs;
    std::set<std::string> seen;
    for (const std::string& r : s.refs) {
      refs.push_back(CountNgrams(CaptionTokens(r), max_n));
      for (const NgramCounts& level : refs.back()) {
        for (const auto& [g, c] : level) seen.insert(g);
      }
    }
    for (const std::string& g : seen) doc_freq[g] += 1.0;
    ref_counts.push_back(std::move(refs));
  }
  const double log_docs = std::log(static_cast<double>(corpus.size()));

  struct Vec {
    std::vector<std::map<std::string, double>> weights;
    std::vector<double> norms;
    double length = 0.0;  // bigram count
  };
  auto to_vec = [&](const std::vector<NgramCounts>& counts) {
    Vec v;
    v.weights.resize(nn);
    v.norms.assign(nn, 0.0);
    for (std::size_t n = 0; n < nn; ++n) {
      for (const auto& [g, tf] : counts[n]) {
        const auto it = doc_freq.find(g);
        const double df = std::log(std::max(1.0, it == doc_freq.end() ? 0.0 : it->second));
        const double w = static_cast<double>(tf) * (log_docs - df);
        v.weights[n][g] = w;
        v.norms[n] += w * w;
        if (n == 1) v.length += tf;
      }
      v.norms[n] = std::sqrt(v.norms[n]);
    }
    return v;
  };

  CiderResult result;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Vec hyp = to_vec(hyp_counts[i]);
    std::vector<double> per_n(nn, 0.0);
    for (const auto& ref_c : ref_counts[i]) {
      const Vec ref = to_vec(ref_c);
      const double delta = hyp.length - ref.length;
      for (std::size_t n = 0; n < nn; ++n) {
        double val = 0.0;
        for (const auto& [g, wh] : hyp.weights[n]) {
          const auto it = ref.weights[n].find(g);
          if (it != ref.weights[n].end()) val += std::min(wh, it->second) * it->second;
        }
        if (hyp.norms[n] != 0.0 && ref.norms[n] != 0.0) val /= hyp.norms[n] * ref.norms[n];
        val *= std::exp(-(delta * delta) / (2.0 * options.sigma * options.sigma));
        per_n[n] += val;
      }
    }
    double mean_n = 0.0;
    for (double v : per_n) mean_n += v;
    mean_n /= static_cast<double>(nn);
    result.per_sample.push_back(mean_n / static_cast<double>(ref_counts[i].size()) * options.scale);
  }
  double sum = 0.0;
  for (double s : result.per_sample) sum += s;
  result.mean = sum / static_cast<double>(result.per_sample.size());
  return result;
}

double CaptionAtIou(const std::vector<CaptionSample>& samples, const std::vector<double>& ious,
                    double threshold, CaptionMetric metric, const CiderOptions& options) {
  if (samples.size() != ious.size()) throw ArgumentError("CaptionAtIou: sample/iou count mismatch");
  if (samples.empty()) return 0.0;
  std::vector<double> scores;
  if (metric == CaptionMetric::kCider) {
    scores = CiderD(samples, options).per_sample;
  } else {
    for (const CaptionSample& s : samples) scores.push_back(Bleu4(s.pred, s.refs));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (ious[i] < 0.0 || ious[i] > 1.0) throw ArgumentError("CaptionAtIou: IoU outside [0,1]");
    if (ious[i] >= threshold) sum += scores[i];
  }
  return sum / static_cast<double>(samples.size());
}

}  // namespace objseq
