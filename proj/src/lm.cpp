// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/lm.hpp"

#include <cmath>

#include "seqcl/errors.hpp"

namespace seqcl {

const std::string LanguageModel::kBosToken = "<bos>";
const std::string LanguageModel::kEosToken = "<eos>";
const std::string LanguageModel::kUnkToken = "<unk>";

double LanguageModel::sentence_log_prob(const TokenSeq& sentence) const {
  double total = 0.0;
  TokenSeq context;
  for (const auto& token : sentence) {
    total += log_prob(context, token);
    context.push_back(token);
  }
  total += log_prob(context, kEosToken);
  return total;
}

NgramLM NgramLM::train(const std::vector<TokenSeq>& sentences, int order) {
  if (order < 1 || order > 3) {
    throw ConfigError("NgramLM: order must lie in 1..3, got " +
                      std::to_string(order));
  }
  if (sentences.empty()) {
    throw std::invalid_argument("NgramLM: no training sentences");
  }
  NgramLM lm;
  lm.order_ = order;
  lm.vocab_.insert(kUnkToken);
  lm.vocab_.insert(kEosToken);
  for (const auto& sentence : sentences) {
    for (const auto& token : sentence) lm.vocab_.insert(token);
  }
  const auto ctx_len = static_cast<std::size_t>(order - 1);
  for (const auto& sentence : sentences) {
    std::vector<std::string> padded(ctx_len, kBosToken);
    padded.insert(padded.end(), sentence.begin(), sentence.end());
    padded.push_back(kEosToken);
    for (std::size_t i = ctx_len; i < padded.size(); ++i) {
      std::vector<std::string> ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - ctx_len),
                                   padded.begin() + static_cast<std::ptrdiff_t>(i));
      ++lm.counts_[ctx][padded[i]];
      ++lm.context_totals_[ctx];
    }
  }
  return lm;
}

std::string NgramLM::normalize(const std::string& token) const {
  if (token == kBosToken || token == kEosToken) return token;
  return vocab_.count(token) ? token : kUnkToken;
}

double NgramLM::log_prob(const TokenSeq& context,
                         const std::string& token) const {
  const auto ctx_len = static_cast<std::size_t>(order_ - 1);
  std::vector<std::string> ctx(ctx_len, kBosToken);
  for (std::size_t i = 0; i < std::min(ctx_len, context.size()); ++i) {
    ctx[ctx_len - 1 - i] = normalize(context[context.size() - 1 - i]);
  }
  const std::string event = normalize(token);
  std::int64_t count = 0;
  std::int64_t total = 0;
  if (auto it = counts_.find(ctx); it != counts_.end()) {
    if (auto jt = it->second.find(event); jt != it->second.end()) {
      count = jt->second;
    }
    total = context_totals_.at(ctx);
  }
  const auto v = static_cast<double>(vocab_.size());
  return std::log(static_cast<double>(count + 1) /
                  (static_cast<double>(total) + v));
}

}  // namespace seqcl
