// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace seqcl {

using TokenSeq = std::vector<std::string>;
using IdSeq = std::vector<std::int32_t>;

// One aligned sentence pair. Ids are dense 0..N-1 within a corpus.
struct Example {
  int id = 0;
  TokenSeq src_tokens;
  TokenSeq tgt_tokens;
};

struct CorpusMetadata {
  std::string src_label;
  std::string tgt_label;
  std::string origin;  // file paths or a synthetic task description
  // Ids whose targets had corruption applied (noisy-cipher only), sorted.
  std::vector<int> corrupted_ids;
  // Pairs dropped because one side was blank (load_parallel only).
  std::size_t skipped_blank_pairs = 0;
};

// Immutable once built; safe to share across threads.
struct ParallelCorpus {
  std::vector<Example> examples;
  CorpusMetadata metadata;

  std::size_t size() const { return examples.size(); }
  const Example& at(int id) const { return examples.at(static_cast<std::size_t>(id)); }
  std::vector<int> all_ids() const;
};

enum class TokenizeMode { kWhitespace, kCharacter };

// Whitespace mode splits on runs of Unicode whitespace; character mode
// yields one token per non-whitespace code point. Empty input gives an
// empty sequence.
TokenSeq tokenize(const std::string& text, TokenizeMode mode);

// Reads two line-aligned UTF-8 files. Pairs where either line is blank are
// skipped (count recorded in metadata). Throws AlignmentError on a line
// count mismatch and IoError on unreadable files.
ParallelCorpus load_parallel(const std::filesystem::path& src_path,
                             const std::filesystem::path& tgt_path,
                             TokenizeMode mode = TokenizeMode::kWhitespace);

enum class VocabSide { kSource, kTarget, kJoint };

// Token <-> id bijection with reserved ids 0..3.
class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kBos = 1;
  static constexpr std::int32_t kEos = 2;
  static constexpr std::int32_t kUnk = 3;

  Vocabulary();

  // Tokens with corpus frequency >= min_freq, ordered by descending
  // frequency then lexicographically, receive ids starting at 4.
  static Vocabulary build(const ParallelCorpus& corpus, VocabSide side,
                          std::int64_t min_freq);

  std::int32_t token_to_id(const std::string& token) const;
  const std::string& id_to_token(std::int32_t id) const;
  bool contains(const std::string& token) const;
  std::int32_t size() const { return static_cast<std::int32_t>(tokens_.size()); }

  IdSeq encode(const TokenSeq& tokens) const;
  TokenSeq decode(const IdSeq& ids) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

using Batch = std::vector<int>;  // example ids

// Shuffles ids deterministically by seed, then packs greedily so that each
// batch's total (src + tgt) token count stays within max_tokens. An example
// larger than max_tokens forms a singleton batch. Every id appears exactly
// once.
std::vector<Batch> make_batches(const std::vector<int>& example_ids,
                                const ParallelCorpus& corpus,
                                std::int64_t max_tokens, std::uint64_t seed);

enum class SyntheticTask { kSubstitutionCipher, kReversalCipher, kNoisyCipher };

struct SyntheticTaskSpec {
  SyntheticTask task = SyntheticTask::kSubstitutionCipher;
  int vocab_size = 50;
  int min_len = 3;
  int max_len = 12;
  // Noisy-cipher only: fraction of examples that receive corruption, and
  // the per-token probability of replacing a target token.
  double corrupt_fraction = 0.2;
  double rho = 0.5;
};

// Deterministic in seed. The token-wise bijection applied to the source is
// itself derived from the seed. Noisy-cipher records the chosen example ids
// in metadata.corrupted_ids. Throws ConfigError for an invalid spec.
ParallelCorpus generate_synthetic(const SyntheticTaskSpec& task, int n,
                                  std::uint64_t seed);

}  // namespace seqcl
