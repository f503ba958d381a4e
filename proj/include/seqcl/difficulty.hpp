// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "seqcl/corpus.hpp"
#include "seqcl/lm.hpp"

namespace seqcl {

// Per-example difficulty d(z): higher = harder. Under the recovery
// criterion the scores are negated sentence BLEU, so they lie in [-100, 0]
// and are not CDF-normalized.
struct DifficultyScoreTable {
  std::string criterion;
  bool cdf_applied = false;
  std::map<int, double> scores;
  // Free-form audit fields serialized as '#key=value' comment lines.
  std::map<std::string, std::string> metadata;
};

// Greedy decoder standing in for f(.; phi): source tokens -> hypothesis.
using Predictor = std::function<TokenSeq(const TokenSeq&)>;

// d(z) = -sentence_bleu(predictor(x), y). A predictor failure aborts with
// the offending example id in the message.
DifficultyScoreTable recovery_difficulty(const ParallelCorpus& corpus,
                                         const Predictor& predictor);

// rank(raw_i)/N with ranks counting entries <= raw_i; ties share the
// highest rank among equals. Output lies in (0, 1] and preserves order.
std::map<int, double> empirical_cdf(const std::map<int, double>& raw);

enum class SentenceFeature { kLength, kWordRarity };

// Handcrafted source-side features mapped through the empirical CDF.
// Rarity is the negative sum of log relative unigram frequencies.
DifficultyScoreTable feature_difficulty(const ParallelCorpus& corpus,
                                        SentenceFeature feature);

enum class CorpusSide { kSource, kTarget };

// Per-word cross-entropy: -(1/I) log P(w_1..w_I) with the closing EOS
// event included in the probability but excluded from the word count I.
// Raw scores; no CDF.
DifficultyScoreTable lm_difficulty(const ParallelCorpus& corpus,
                                   const LanguageModel& lm, CorpusSide side);

// Fixed-dimension word vectors; tokens absent from the table fall back to
// the "<unk>" entry, which must be present.
struct EmbeddingTable {
  std::map<std::string, std::vector<double>> vectors;
};

// Sum of Euclidean norms over source tokens, then empirical CDF. Throws
// ConfigError on dimension mismatches or a missing "<unk>" entry.
DifficultyScoreTable embedding_norm_difficulty(const ParallelCorpus& corpus,
                                               const EmbeddingTable& table);

// Relative loss change (cur - prev)/prev per example, where the losses are
// sequence-sum negative log-likelihoods. Throws std::invalid_argument
// naming the id on a non-positive previous loss or a mismatched id set.
DifficultyScoreTable loss_decline_difficulty(
    const std::map<int, double>& prev_losses,
    const std::map<int, double>& cur_losses);

// Score table file: UTF-8 TSV. First line '#criterion=<name>\tcdf=<bool>',
// optional further '#key=value' comment lines from metadata, then
// 'id<TAB>score' rows with six decimal places.
void write_score_table(const DifficultyScoreTable& table,
                       const std::filesystem::path& path);
DifficultyScoreTable read_score_table(const std::filesystem::path& path);

}  // namespace seqcl
