// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqcl/corpus.hpp"
#include "seqcl/rng.hpp"
#include "seqcl/tensor.hpp"

namespace seqcl {

// One-layer recurrent encoder-decoder with single-head dot-product
// attention. Small enough to train on one CPU core in minutes while still
// exposing the full loss / gradient / decode surface the curriculum
// harness drives.
struct ModelConfig {
  std::int32_t src_vocab_size = 0;
  std::int32_t tgt_vocab_size = 0;
  std::int32_t embed_dim = 32;
  std::int32_t hidden_dim = 64;
  double dropout = 0.0;
  double label_smoothing = 0.1;
  std::int32_t max_decode_len = 32;

  void validate() const;  // throws ConfigError
  std::string canonical_string() const;
  std::uint64_t hash() const;
};

// All trainable weights. for_each visits tensors in the fixed order used
// by the checkpoint format: src_embed, tgt_embed, enc_wx, enc_wh, enc_b,
// dec_wx, dec_wh, dec_b, comb_w, comb_b, out_w, out_b.
struct ModelParameters {
  Tensor src_embed;  // (src_vocab, embed)
  Tensor tgt_embed;  // (tgt_vocab, embed)
  Tensor enc_wx;     // (hidden, embed)
  Tensor enc_wh;     // (hidden, hidden)
  Tensor enc_b;      // (hidden, 1)
  Tensor dec_wx;     // (hidden, embed)
  Tensor dec_wh;     // (hidden, hidden)
  Tensor dec_b;      // (hidden, 1)
  Tensor comb_w;     // (hidden, 2*hidden)
  Tensor comb_b;     // (hidden, 1)
  Tensor out_w;      // (tgt_vocab, hidden)
  Tensor out_b;      // (tgt_vocab, 1)

  template <typename F>
  void for_each(F&& fn) {
    fn("src_embed", src_embed);
    fn("tgt_embed", tgt_embed);
    fn("enc_wx", enc_wx);
    fn("enc_wh", enc_wh);
    fn("enc_b", enc_b);
    fn("dec_wx", dec_wx);
    fn("dec_wh", dec_wh);
    fn("dec_b", dec_b);
    fn("comb_w", comb_w);
    fn("comb_b", comb_b);
    fn("out_w", out_w);
    fn("out_b", out_b);
  }
  template <typename F>
  void for_each(F&& fn) const {
    const_cast<ModelParameters*>(this)->for_each(
        [&](const char* name, Tensor& t) { fn(name, std::as_const(t)); });
  }

  static ModelParameters zeros_like(const ModelConfig& cfg);
  bool same_shape(const ModelParameters& other) const;
};

// Deterministic in seed; weights uniform in +-1/sqrt(fanin); the PAD
// embedding rows are zeroed.
ModelParameters init_model(const ModelConfig& cfg, std::uint64_t seed);

// Teacher-forced forward pass with dropout off. tgt_prefix must begin with
// BOS. Returns one logit row per prefix position. Throws
// std::invalid_argument on out-of-range ids.
std::vector<std::vector<double>> forward(const ModelConfig& cfg,
                                         const ModelParameters& params,
                                         const IdSeq& src,
                                         const IdSeq& tgt_prefix);

struct LossResult {
  // Token-mean label-smoothed cross-entropy (the training objective).
  double mean = 0.0;
  // Sequence-sum plain negative log-likelihood per example, i.e.
  // -log P(y|x), used by the loss-decline criterion.
  std::vector<double> per_example_nll;
};

// Label-smoothed cross-entropy over pre-computed logit rows: the true
// class gets 1-eps, the remaining eps spreads over the V-1 other classes.
// PAD targets are masked out. `rows` holds per-example logit sequences
// aligned with `targets`.
LossResult loss_from_logits(
    const std::vector<std::vector<std::vector<double>>>& rows,
    const std::vector<IdSeq>& targets, double label_smoothing);

struct SeqPair {
  IdSeq src;
  IdSeq tgt;  // raw target ids; BOS/EOS handled internally
};

// Exact reverse-mode gradient of the token-mean smoothed loss over the
// batch, accumulated into `grads` (pre-zeroed by the caller). When
// cfg.dropout > 0 and `dropout_rng` is non-null, inverted dropout masks on
// the embeddings and the pre-output hidden are drawn from it. Returns the
// loss of the same batch.
LossResult grad(const ModelConfig& cfg, const ModelParameters& params,
                const std::vector<SeqPair>& batch, ModelParameters& grads,
                Rng* dropout_rng = nullptr);

// Loss only (no gradient, dropout off).
LossResult batch_loss(const ModelConfig& cfg, const ModelParameters& params,
                      const std::vector<SeqPair>& batch);

// -log P(y|x): sequence-sum NLL of the reference including the closing
// EOS, dropout off, no smoothing.
double sequence_nll(const ModelConfig& cfg, const ModelParameters& params,
                    const IdSeq& src, const IdSeq& tgt);

// Greedy argmax decode from BOS until EOS or max_len; ties break toward
// the lowest token id; dropout off. The returned ids exclude BOS/EOS.
IdSeq greedy_decode(const ModelConfig& cfg, const ModelParameters& params,
                    const IdSeq& src, std::int32_t max_len);

}  // namespace seqcl
