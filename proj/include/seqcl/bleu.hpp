// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqcl {

inline constexpr int kBleuMaxOrder = 4;

// Clipped n-gram statistics for one hypothesis/reference pair.
// candidates[n-1] = max(0, hyp_len - n + 1); matches are clipped to the
// reference n-gram counts.
struct NgramStats {
  std::array<std::int64_t, kBleuMaxOrder> matches{};
  std::array<std::int64_t, kBleuMaxOrder> candidates{};
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;

  NgramStats& operator+=(const NgramStats& other) {
    for (int n = 0; n < kBleuMaxOrder; ++n) {
      matches[n] += other.matches[n];
      candidates[n] += other.candidates[n];
    }
    hyp_len += other.hyp_len;
    ref_len += other.ref_len;
    return *this;
  }
};

// BLEU on the 0-100 scale. brevity_penalty is 1 when the hypothesis is at
// least as long as the reference, exp(1 - ref/hyp) otherwise, and 0 for an
// empty hypothesis (which forces value = 0).
struct BleuScore {
  double value = 0.0;
  double brevity_penalty = 0.0;
  std::array<double, kBleuMaxOrder> precisions{};
};

template <typename Tok>
NgramStats ngram_stats(std::span<const Tok> hyp, std::span<const Tok> ref,
                       int max_n = kBleuMaxOrder) {
  NgramStats stats;
  stats.hyp_len = static_cast<std::int64_t>(hyp.size());
  stats.ref_len = static_cast<std::int64_t>(ref.size());
  for (int n = 1; n <= max_n; ++n) {
    const auto nu = static_cast<std::size_t>(n);
    if (hyp.size() >= nu) {
      stats.candidates[n - 1] =
          static_cast<std::int64_t>(hyp.size() - nu + 1);
    }
    if (stats.candidates[n - 1] == 0) continue;
    std::map<std::vector<Tok>, std::int64_t> ref_counts;
    if (ref.size() >= nu) {
      for (std::size_t i = 0; i + nu <= ref.size(); ++i) {
        std::vector<Tok> gram(ref.begin() + i, ref.begin() + i + nu);
        ++ref_counts[std::move(gram)];
      }
    }
    std::map<std::vector<Tok>, std::int64_t> hyp_counts;
    for (std::size_t i = 0; i + nu <= hyp.size(); ++i) {
      std::vector<Tok> gram(hyp.begin() + i, hyp.begin() + i + nu);
      ++hyp_counts[std::move(gram)];
    }
    std::int64_t matched = 0;
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    stats.matches[n - 1] = matched;
  }
  return stats;
}

template <typename Tok>
NgramStats ngram_stats(const std::vector<Tok>& hyp, const std::vector<Tok>& ref,
                       int max_n = kBleuMaxOrder) {
  return ngram_stats(std::span<const Tok>(hyp), std::span<const Tok>(ref),
                     max_n);
}

// Sentence BLEU with add-one smoothing on the numerator and denominator for
// n >= 2 (p_n = 1 when there are no candidate n-grams of that order).
// p_1 is unsmoothed. Throws std::invalid_argument for an empty reference.
BleuScore sentence_bleu_from_stats(const NgramStats& stats);

// Corpus BLEU: pooled statistics, unsmoothed precisions, corpus-level
// brevity penalty. Zero if any pooled match count is zero. Throws
// std::invalid_argument if stats aggregate zero pairs (ref_len == 0).
BleuScore corpus_bleu_from_stats(const NgramStats& stats);

template <typename Tok>
BleuScore sentence_bleu(std::span<const Tok> hyp, std::span<const Tok> ref) {
  if (ref.empty()) {
    throw std::invalid_argument("sentence_bleu: empty reference");
  }
  return sentence_bleu_from_stats(ngram_stats(hyp, ref));
}

template <typename Tok>
BleuScore sentence_bleu(const std::vector<Tok>& hyp,
                        const std::vector<Tok>& ref) {
  return sentence_bleu<Tok>(std::span<const Tok>(hyp),
                            std::span<const Tok>(ref));
}

template <typename Tok>
BleuScore corpus_bleu(
    const std::vector<std::pair<std::vector<Tok>, std::vector<Tok>>>& pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("corpus_bleu: empty pair list");
  }
  NgramStats pooled;
  for (const auto& [hyp, ref] : pairs) {
    if (ref.empty()) {
      throw std::invalid_argument("corpus_bleu: empty reference");
    }
    pooled += ngram_stats(hyp, ref);
  }
  return corpus_bleu_from_stats(pooled);
}

}  // namespace seqcl
