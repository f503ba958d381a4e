// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force sentence/corpus BLEU written directly from the scoring rules,
// independent of the library implementation. n-gram matches come from
// nested-loop enumeration with explicit clipping; no shared code with
// src/bleu.cpp beyond the token type.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seqcl_test {

template <typename Tok>
bool same_gram(const std::vector<Tok>& a, std::size_t i,
               const std::vector<Tok>& b, std::size_t j, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (a[i + k] != b[j + k]) return false;
  }
  return true;
}

// Clipped matches of order n via full pairwise comparison.
template <typename Tok>
long oracle_matches(const std::vector<Tok>& hyp, const std::vector<Tok>& ref,
                    std::size_t n) {
  long matched = 0;
  if (hyp.size() < n || ref.size() < n) return 0;
  std::vector<bool> hyp_done(hyp.size(), false);
  for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
    if (hyp_done[i]) continue;
    // Count this distinct n-gram in hyp and in ref.
    long hyp_count = 0;
    for (std::size_t j = i; j + n <= hyp.size(); ++j) {
      if (same_gram(hyp, i, hyp, j, n)) {
        ++hyp_count;
        hyp_done[j] = true;
      }
    }
    long ref_count = 0;
    for (std::size_t j = 0; j + n <= ref.size(); ++j) {
      if (same_gram(hyp, i, ref, j, n)) ++ref_count;
    }
    matched += std::min(hyp_count, ref_count);
  }
  return matched;
}

inline long oracle_candidates(std::size_t hyp_len, std::size_t n) {
  return hyp_len >= n ? static_cast<long>(hyp_len - n + 1) : 0;
}

// Sentence BLEU, 0-100: p1 unsmoothed; add-one smoothing for n >= 2; brevity
// penalty exp(1 - ref/hyp) for short hypotheses; empty hypothesis scores 0.
template <typename Tok>
double oracle_sentence_bleu(const std::vector<Tok>& hyp,
                            const std::vector<Tok>& ref) {
  if (ref.empty()) throw std::invalid_argument("oracle: empty reference");
  if (hyp.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const long m = oracle_matches(hyp, ref, n);
    const long c = oracle_candidates(hyp.size(), n);
    double p;
    if (n == 1) {
      p = c > 0 ? static_cast<double>(m) / static_cast<double>(c) : 0.0;
    } else {
      p = static_cast<double>(m + 1) / static_cast<double>(c + 1);
    }
    if (p <= 0.0) return 0.0;
    log_sum += std::log(p);
  }
  const double bp =
      hyp.size() >= ref.size()
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref.size()) /
                               static_cast<double>(hyp.size()));
  return 100.0 * bp * std::exp(log_sum / 4.0);
}

// Corpus BLEU: pooled counts, unsmoothed precisions, pooled brevity penalty.
template <typename Tok>
double oracle_corpus_bleu(
    const std::vector<std::pair<std::vector<Tok>, std::vector<Tok>>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("oracle: no pairs");
  long hyp_len = 0, ref_len = 0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    long m = 0, c = 0;
    for (const auto& [hyp, ref] : pairs) {
      m += oracle_matches(hyp, ref, n);
      c += oracle_candidates(hyp.size(), n);
    }
    if (m == 0) return 0.0;
    log_sum += std::log(static_cast<double>(m) / static_cast<double>(c));
  }
  for (const auto& [hyp, ref] : pairs) {
    hyp_len += static_cast<long>(hyp.size());
    ref_len += static_cast<long>(ref.size());
  }
  if (hyp_len == 0) return 0.0;
  const double bp = hyp_len >= ref_len
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(ref_len) /
                                             static_cast<double>(hyp_len));
  return 100.0 * bp * std::exp(log_sum / 4.0);
}

}  // namespace seqcl_test
