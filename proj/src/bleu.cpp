// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/bleu.hpp"

#include <cmath>

namespace seqcl {

namespace {

double brevity_penalty(std::int64_t hyp_len, std::int64_t ref_len) {
  if (hyp_len == 0) return 0.0;
  if (hyp_len >= ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) /
                            static_cast<double>(hyp_len));
}

double geometric_score(const BleuScore& score) {
  double log_sum = 0.0;
  for (double p : score.precisions) {
    if (p <= 0.0) return 0.0;
    log_sum += std::log(p);
  }
  return 100.0 * score.brevity_penalty *
         std::exp(log_sum / static_cast<double>(kBleuMaxOrder));
}

}  // namespace

BleuScore sentence_bleu_from_stats(const NgramStats& stats) {
  if (stats.ref_len == 0) {
    throw std::invalid_argument("sentence_bleu: empty reference");
  }
  BleuScore score;
  score.precisions[0] =
      stats.candidates[0] > 0
          ? static_cast<double>(stats.matches[0]) /
                static_cast<double>(stats.candidates[0])
          : 0.0;
  for (int n = 2; n <= kBleuMaxOrder; ++n) {
    score.precisions[n - 1] =
        static_cast<double>(stats.matches[n - 1] + 1) /
        static_cast<double>(stats.candidates[n - 1] + 1);
  }
  score.brevity_penalty = brevity_penalty(stats.hyp_len, stats.ref_len);
  score.value = geometric_score(score);
  return score;
}

BleuScore corpus_bleu_from_stats(const NgramStats& stats) {
  if (stats.ref_len == 0) {
    throw std::invalid_argument("corpus_bleu: no reference tokens");
  }
  BleuScore score;
  for (int n = 1; n <= kBleuMaxOrder; ++n) {
    score.precisions[n - 1] =
        stats.candidates[n - 1] > 0
            ? static_cast<double>(stats.matches[n - 1]) /
                  static_cast<double>(stats.candidates[n - 1])
            : 0.0;
  }
  score.brevity_penalty = brevity_penalty(stats.hyp_len, stats.ref_len);
  score.value = geometric_score(score);
  return score;
}

}  // namespace seqcl
