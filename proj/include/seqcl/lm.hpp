// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seqcl/corpus.hpp"

namespace seqcl {

// Scoring interface for sentence-probability models. Contexts are the
// preceding tokens of the sentence; implementations decide how much of the
// context they condition on. kEosToken closes every sentence.
class LanguageModel {
 public:
  static const std::string kBosToken;
  static const std::string kEosToken;
  static const std::string kUnkToken;

  virtual ~LanguageModel() = default;

  // Natural log of P(token | context).
  virtual double log_prob(const TokenSeq& context,
                          const std::string& token) const = 0;

  // Sum of log_prob over the sentence tokens plus the closing EOS event.
  double sentence_log_prob(const TokenSeq& sentence) const;
};

// Count-based n-gram model with add-one (Laplace) smoothing over the
// training vocabulary plus UNK and EOS. Sentences are padded with BOS
// context and terminated with EOS. An unseen context backs off to the
// uniform 1/V Laplace floor.
class NgramLM : public LanguageModel {
 public:
  // order must lie in 1..3; throws ConfigError otherwise.
  static NgramLM train(const std::vector<TokenSeq>& sentences, int order);

  double log_prob(const TokenSeq& context,
                  const std::string& token) const override;

  int order() const { return order_; }
  // Event types: training tokens + UNK + EOS.
  std::int64_t vocab_size() const {
    return static_cast<std::int64_t>(vocab_.size());
  }
  const std::set<std::string>& vocab() const { return vocab_; }

 private:
  int order_ = 1;
  std::set<std::string> vocab_;
  // context (order-1 normalized tokens) -> token -> count
  std::map<std::vector<std::string>, std::map<std::string, std::int64_t>>
      counts_;
  std::map<std::vector<std::string>, std::int64_t> context_totals_;

  std::string normalize(const std::string& token) const;
};

}  // namespace seqcl
