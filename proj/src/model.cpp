// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seqcl/errors.hpp"

namespace seqcl {

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void check_ids(const IdSeq& ids, std::int32_t vocab, const char* what) {
  for (auto id : ids) {
    if (id < 0 || id >= vocab) {
      throw std::invalid_argument(std::string("model: ") + what +
                                  " id out of range: " + std::to_string(id));
    }
  }
}

double tanh_clip(double x) { return std::tanh(x); }

// log-softmax of a logit row; returns logsumexp.
double log_sum_exp(const std::vector<double>& logits) {
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - m);
  return m + std::log(sum);
}

// Per-example forward cache used by both the plain forward pass and the
// backward sweep.
struct Activations {
  std::vector<std::vector<double>> src_emb;   // S x E (after dropout)
  std::vector<std::vector<double>> enc_h;     // S x H
  std::vector<std::vector<double>> dec_emb;   // J x E (after dropout)
  std::vector<std::vector<double>> dec_s;     // J x H
  std::vector<std::vector<double>> alphas;    // J x S
  std::vector<std::vector<double>> contexts;  // J x H
  std::vector<std::vector<double>> combined;  // J x H (after dropout)
  std::vector<std::vector<double>> comb_raw;  // J x H (tanh output, pre-drop)
  std::vector<std::vector<double>> logits;    // J x V
  // Inverted-dropout masks (empty when dropout is off).
  std::vector<std::vector<double>> src_mask, dec_mask, comb_mask;
};

std::vector<double> make_dropout_mask(std::size_t n, double rate, Rng* rng) {
  std::vector<double> mask(n, 1.0);
  if (rng == nullptr || rate <= 0.0) return mask;
  const double keep = 1.0 - rate;
  for (auto& m : mask) m = rng_unit(*rng) < rate ? 0.0 : 1.0 / keep;
  return mask;
}

void apply_mask(std::vector<double>& v, const std::vector<double>& mask) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= mask[i];
}

// Runs the full teacher-forced forward pass for one (src, dec_input) pair.
void forward_example(const ModelConfig& cfg, const ModelParameters& params,
                     const IdSeq& src, const IdSeq& dec_input, Rng* dropout_rng,
                     Activations& act) {
  const auto s_len = src.size();
  const auto j_len = dec_input.size();
  const auto e = static_cast<std::size_t>(cfg.embed_dim);
  const auto h = static_cast<std::size_t>(cfg.hidden_dim);
  const bool use_dropout = dropout_rng != nullptr && cfg.dropout > 0.0;

  act.src_emb.assign(s_len, std::vector<double>(e, 0.0));
  act.enc_h.assign(s_len, std::vector<double>(h, 0.0));
  act.dec_emb.assign(j_len, std::vector<double>(e, 0.0));
  act.dec_s.assign(j_len, std::vector<double>(h, 0.0));
  act.alphas.assign(j_len, std::vector<double>(s_len, 0.0));
  act.contexts.assign(j_len, std::vector<double>(h, 0.0));
  act.combined.assign(j_len, std::vector<double>(h, 0.0));
  act.comb_raw.assign(j_len, std::vector<double>(h, 0.0));
  act.logits.assign(j_len, std::vector<double>(
                               static_cast<std::size_t>(cfg.tgt_vocab_size),
                               0.0));
  act.src_mask.clear();
  act.dec_mask.clear();
  act.comb_mask.clear();

  // Encoder.
  std::vector<double> pre(h);
  for (std::size_t t = 0; t < s_len; ++t) {
    auto& emb = act.src_emb[t];
    const double* row = params.src_embed.row(static_cast<std::size_t>(src[t]));
    std::copy(row, row + e, emb.begin());
    if (use_dropout) {
      act.src_mask.push_back(make_dropout_mask(e, cfg.dropout, dropout_rng));
      apply_mask(emb, act.src_mask.back());
    }
    std::fill(pre.begin(), pre.end(), 0.0);
    matvec_acc(params.enc_wx, emb.data(), pre.data());
    if (t > 0) matvec_acc(params.enc_wh, act.enc_h[t - 1].data(), pre.data());
    for (std::size_t i = 0; i < h; ++i) {
      act.enc_h[t][i] = tanh_clip(pre[i] + params.enc_b.data[i]);
    }
  }

  // Decoder, attending over the encoder states; s_0 is the final encoder
  // state (zero for an empty source).
  std::vector<double> concat(2 * h);
  for (std::size_t j = 0; j < j_len; ++j) {
    auto& emb = act.dec_emb[j];
    const double* row =
        params.tgt_embed.row(static_cast<std::size_t>(dec_input[j]));
    std::copy(row, row + e, emb.begin());
    if (use_dropout) {
      act.dec_mask.push_back(make_dropout_mask(e, cfg.dropout, dropout_rng));
      apply_mask(emb, act.dec_mask.back());
    }
    std::fill(pre.begin(), pre.end(), 0.0);
    matvec_acc(params.dec_wx, emb.data(), pre.data());
    const std::vector<double>* prev =
        j > 0 ? &act.dec_s[j - 1] : (s_len > 0 ? &act.enc_h[s_len - 1] : nullptr);
    if (prev != nullptr) matvec_acc(params.dec_wh, prev->data(), pre.data());
    for (std::size_t i = 0; i < h; ++i) {
      act.dec_s[j][i] = tanh_clip(pre[i] + params.dec_b.data[i]);
    }

    // Dot-product attention.
    auto& alpha = act.alphas[j];
    auto& ctx = act.contexts[j];
    if (s_len > 0) {
      double max_score = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < s_len; ++t) {
        double score = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
          score += act.dec_s[j][i] * act.enc_h[t][i];
        }
        alpha[t] = score;
        max_score = std::max(max_score, score);
      }
      double denom = 0.0;
      for (std::size_t t = 0; t < s_len; ++t) {
        alpha[t] = std::exp(alpha[t] - max_score);
        denom += alpha[t];
      }
      for (std::size_t t = 0; t < s_len; ++t) {
        alpha[t] /= denom;
        for (std::size_t i = 0; i < h; ++i) {
          ctx[i] += alpha[t] * act.enc_h[t][i];
        }
      }
    }

    std::copy(act.dec_s[j].begin(), act.dec_s[j].end(), concat.begin());
    std::copy(ctx.begin(), ctx.end(), concat.begin() + static_cast<std::ptrdiff_t>(h));
    std::fill(pre.begin(), pre.end(), 0.0);
    matvec_acc(params.comb_w, concat.data(), pre.data());
    for (std::size_t i = 0; i < h; ++i) {
      act.comb_raw[j][i] = tanh_clip(pre[i] + params.comb_b.data[i]);
    }
    act.combined[j] = act.comb_raw[j];
    if (use_dropout) {
      act.comb_mask.push_back(make_dropout_mask(h, cfg.dropout, dropout_rng));
      apply_mask(act.combined[j], act.comb_mask.back());
    }

    auto& logits = act.logits[j];
    std::copy(params.out_b.data.begin(), params.out_b.data.end(),
              logits.begin());
    matvec_acc(params.out_w, act.combined[j].data(), logits.data());
  }
}

// Backward sweep for one example. dlogits rows must already carry the loss
// scaling; gradients accumulate into `grads`.
void backward_example(const ModelConfig& cfg, const ModelParameters& params,
                      const IdSeq& src, const IdSeq& dec_input,
                      const Activations& act,
                      const std::vector<std::vector<double>>& dlogits,
                      ModelParameters& grads) {
  const auto s_len = src.size();
  const auto j_len = dec_input.size();
  const auto e = static_cast<std::size_t>(cfg.embed_dim);
  const auto h = static_cast<std::size_t>(cfg.hidden_dim);
  const bool use_dropout = !act.src_mask.empty() || !act.dec_mask.empty() ||
                           !act.comb_mask.empty();

  std::vector<std::vector<double>> d_enc_h(s_len, std::vector<double>(h, 0.0));
  std::vector<double> d_s_next(h, 0.0);  // gradient flowing into dec_s[j]
  std::vector<double> d_o(h), d_u(h), d_ctx(h), d_spre(h), d_emb(e);
  std::vector<double> concat(2 * h), d_concat(2 * h);

  for (std::size_t jj = j_len; jj-- > 0;) {
    const std::size_t j = jj;
    // Output projection.
    std::fill(d_o.begin(), d_o.end(), 0.0);
    outer_acc(grads.out_w, dlogits[j].data(), act.combined[j].data());
    for (std::size_t v = 0; v < dlogits[j].size(); ++v) {
      grads.out_b.data[v] += dlogits[j][v];
    }
    matvec_transpose_acc(params.out_w, dlogits[j].data(), d_o.data());
    if (use_dropout && !act.comb_mask.empty()) {
      for (std::size_t i = 0; i < h; ++i) d_o[i] *= act.comb_mask[j][i];
    }

    // Combine layer (tanh).
    for (std::size_t i = 0; i < h; ++i) {
      const double y = act.comb_raw[j][i];
      d_u[i] = d_o[i] * (1.0 - y * y);
    }
    std::copy(act.dec_s[j].begin(), act.dec_s[j].end(), concat.begin());
    std::copy(act.contexts[j].begin(), act.contexts[j].end(),
              concat.begin() + static_cast<std::ptrdiff_t>(h));
    outer_acc(grads.comb_w, d_u.data(), concat.data());
    for (std::size_t i = 0; i < h; ++i) grads.comb_b.data[i] += d_u[i];
    std::fill(d_concat.begin(), d_concat.end(), 0.0);
    matvec_transpose_acc(params.comb_w, d_u.data(), d_concat.data());

    std::vector<double> d_s(d_s_next);  // recurrence + combine paths
    for (std::size_t i = 0; i < h; ++i) d_s[i] += d_concat[i];
    std::copy(d_concat.begin() + static_cast<std::ptrdiff_t>(h),
              d_concat.end(), d_ctx.begin());

    // Attention backward: context and score paths.
    if (s_len > 0) {
      const auto& alpha = act.alphas[j];
      std::vector<double> d_alpha(s_len, 0.0);
      for (std::size_t t = 0; t < s_len; ++t) {
        const auto& ht = act.enc_h[t];
        double dot = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
          d_enc_h[t][i] += alpha[t] * d_ctx[i];
          dot += d_ctx[i] * ht[i];
        }
        d_alpha[t] = dot;
      }
      double weighted = 0.0;
      for (std::size_t t = 0; t < s_len; ++t) weighted += alpha[t] * d_alpha[t];
      for (std::size_t t = 0; t < s_len; ++t) {
        const double d_score = alpha[t] * (d_alpha[t] - weighted);
        if (d_score == 0.0) continue;
        const auto& ht = act.enc_h[t];
        for (std::size_t i = 0; i < h; ++i) {
          d_s[i] += d_score * ht[i];
          d_enc_h[t][i] += d_score * act.dec_s[j][i];
        }
      }
    }

    // Decoder recurrence (tanh).
    for (std::size_t i = 0; i < h; ++i) {
      const double y = act.dec_s[j][i];
      d_spre[i] = d_s[i] * (1.0 - y * y);
    }
    outer_acc(grads.dec_wx, d_spre.data(), act.dec_emb[j].data());
    for (std::size_t i = 0; i < h; ++i) grads.dec_b.data[i] += d_spre[i];
    std::fill(d_emb.begin(), d_emb.end(), 0.0);
    matvec_transpose_acc(params.dec_wx, d_spre.data(), d_emb.data());
    if (use_dropout && !act.dec_mask.empty()) {
      for (std::size_t i = 0; i < e; ++i) d_emb[i] *= act.dec_mask[j][i];
    }
    {
      double* row = grads.tgt_embed.row(static_cast<std::size_t>(dec_input[j]));
      for (std::size_t i = 0; i < e; ++i) row[i] += d_emb[i];
    }
    std::fill(d_s_next.begin(), d_s_next.end(), 0.0);
    const std::vector<double>* prev =
        j > 0 ? &act.dec_s[j - 1] : (s_len > 0 ? &act.enc_h[s_len - 1] : nullptr);
    if (prev != nullptr) {
      outer_acc(grads.dec_wh, d_spre.data(), prev->data());
      matvec_transpose_acc(params.dec_wh, d_spre.data(), d_s_next.data());
    }
    if (j == 0 && s_len > 0) {
      // d_s_next now holds the gradient into the encoder's final state.
      for (std::size_t i = 0; i < h; ++i) d_enc_h[s_len - 1][i] += d_s_next[i];
      std::fill(d_s_next.begin(), d_s_next.end(), 0.0);
    }
  }

  // Encoder backward.
  std::vector<double> d_hpre(h);
  for (std::size_t tt = s_len; tt-- > 0;) {
    const std::size_t t = tt;
    for (std::size_t i = 0; i < h; ++i) {
      const double y = act.enc_h[t][i];
      d_hpre[i] = d_enc_h[t][i] * (1.0 - y * y);
    }
    outer_acc(grads.enc_wx, d_hpre.data(), act.src_emb[t].data());
    for (std::size_t i = 0; i < h; ++i) grads.enc_b.data[i] += d_hpre[i];
    std::fill(d_emb.begin(), d_emb.end(), 0.0);
    matvec_transpose_acc(params.enc_wx, d_hpre.data(), d_emb.data());
    if (!act.src_mask.empty()) {
      for (std::size_t i = 0; i < e; ++i) d_emb[i] *= act.src_mask[t][i];
    }
    {
      double* row = grads.src_embed.row(static_cast<std::size_t>(src[t]));
      for (std::size_t i = 0; i < e; ++i) row[i] += d_emb[i];
    }
    if (t > 0) {
      outer_acc(grads.enc_wh, d_hpre.data(), act.enc_h[t - 1].data());
      std::vector<double> d_prev(h, 0.0);
      matvec_transpose_acc(params.enc_wh, d_hpre.data(), d_prev.data());
      for (std::size_t i = 0; i < h; ++i) d_enc_h[t - 1][i] += d_prev[i];
    }
  }
}

IdSeq decoder_input_for(const IdSeq& tgt) {
  IdSeq input;
  input.reserve(tgt.size() + 1);
  input.push_back(Vocabulary::kBos);
  input.insert(input.end(), tgt.begin(), tgt.end());
  return input;
}

IdSeq decoder_target_for(const IdSeq& tgt) {
  IdSeq target = tgt;
  target.push_back(Vocabulary::kEos);
  return target;
}

}  // namespace

void ModelConfig::validate() const {
  if (src_vocab_size < 1 || tgt_vocab_size < 1) {
    throw ConfigError("ModelConfig: vocab sizes must be >= 1");
  }
  if (embed_dim < 1 || hidden_dim < 1) {
    throw ConfigError("ModelConfig: dims must be >= 1");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw ConfigError("ModelConfig: dropout must lie in [0, 1)");
  }
  if (label_smoothing < 0.0 || label_smoothing >= 1.0) {
    throw ConfigError("ModelConfig: label_smoothing must lie in [0, 1)");
  }
  if (max_decode_len < 0) {
    throw ConfigError("ModelConfig: max_decode_len must be >= 0");
  }
}

std::string ModelConfig::canonical_string() const {
  std::ostringstream out;
  out << "src=" << src_vocab_size << ";tgt=" << tgt_vocab_size
      << ";embed=" << embed_dim << ";hidden=" << hidden_dim
      << ";dropout=" << dropout << ";ls=" << label_smoothing
      << ";maxdec=" << max_decode_len;
  return out.str();
}

std::uint64_t ModelConfig::hash() const { return fnv1a(canonical_string()); }

ModelParameters ModelParameters::zeros_like(const ModelConfig& cfg) {
  const auto e = static_cast<std::size_t>(cfg.embed_dim);
  const auto h = static_cast<std::size_t>(cfg.hidden_dim);
  ModelParameters p;
  p.src_embed = Tensor(static_cast<std::size_t>(cfg.src_vocab_size), e);
  p.tgt_embed = Tensor(static_cast<std::size_t>(cfg.tgt_vocab_size), e);
  p.enc_wx = Tensor(h, e);
  p.enc_wh = Tensor(h, h);
  p.enc_b = Tensor(h, 1);
  p.dec_wx = Tensor(h, e);
  p.dec_wh = Tensor(h, h);
  p.dec_b = Tensor(h, 1);
  p.comb_w = Tensor(h, 2 * h);
  p.comb_b = Tensor(h, 1);
  p.out_w = Tensor(static_cast<std::size_t>(cfg.tgt_vocab_size), h);
  p.out_b = Tensor(static_cast<std::size_t>(cfg.tgt_vocab_size), 1);
  return p;
}

bool ModelParameters::same_shape(const ModelParameters& other) const {
  return src_embed.same_shape(other.src_embed) &&
         tgt_embed.same_shape(other.tgt_embed) &&
         enc_wx.same_shape(other.enc_wx) && enc_wh.same_shape(other.enc_wh) &&
         enc_b.same_shape(other.enc_b) && dec_wx.same_shape(other.dec_wx) &&
         dec_wh.same_shape(other.dec_wh) && dec_b.same_shape(other.dec_b) &&
         comb_w.same_shape(other.comb_w) && comb_b.same_shape(other.comb_b) &&
         out_w.same_shape(other.out_w) && out_b.same_shape(other.out_b);
}

ModelParameters init_model(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ModelParameters params = ModelParameters::zeros_like(cfg);
  Rng rng(seed);
  params.for_each([&](const char* name, Tensor& t) {
    const std::string n = name;
    if (n == "enc_b" || n == "dec_b" || n == "comb_b" || n == "out_b") {
      return;  // biases start at zero
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(t.cols));
    for (auto& v : t.data) v = rng_uniform(rng, -scale, scale);
  });
  for (std::size_t c = 0; c < params.src_embed.cols; ++c) {
    params.src_embed.at(Vocabulary::kPad, c) = 0.0;
    params.tgt_embed.at(Vocabulary::kPad, c) = 0.0;
  }
  return params;
}

std::vector<std::vector<double>> forward(const ModelConfig& cfg,
                                         const ModelParameters& params,
                                         const IdSeq& src,
                                         const IdSeq& tgt_prefix) {
  check_ids(src, cfg.src_vocab_size, "source");
  check_ids(tgt_prefix, cfg.tgt_vocab_size, "target prefix");
  if (tgt_prefix.empty() || tgt_prefix.front() != Vocabulary::kBos) {
    throw std::invalid_argument("forward: target prefix must begin with BOS");
  }
  Activations act;
  forward_example(cfg, params, src, tgt_prefix, nullptr, act);
  return act.logits;
}

LossResult loss_from_logits(
    const std::vector<std::vector<std::vector<double>>>& rows,
    const std::vector<IdSeq>& targets, double label_smoothing) {
  if (rows.size() != targets.size()) {
    throw std::invalid_argument("loss_from_logits: rows/targets mismatch");
  }
  LossResult result;
  double total_loss = 0.0;
  std::int64_t total_positions = 0;
  for (std::size_t ex = 0; ex < rows.size(); ++ex) {
    if (rows[ex].size() != targets[ex].size()) {
      throw std::invalid_argument(
          "loss_from_logits: logit rows must align with targets");
    }
    double nll = 0.0;
    for (std::size_t j = 0; j < targets[ex].size(); ++j) {
      const auto y = targets[ex][j];
      if (y == Vocabulary::kPad) continue;  // masked
      const auto& logits = rows[ex][j];
      const auto v = static_cast<double>(logits.size());
      const double lse = log_sum_exp(logits);
      double sum_logp = 0.0;
      for (double l : logits) sum_logp += l - lse;
      const double logp_y = logits[static_cast<std::size_t>(y)] - lse;
      const double eps = label_smoothing;
      const double other = v > 1.0 ? eps / (v - 1.0) : 0.0;
      total_loss -= (1.0 - eps) * logp_y + other * (sum_logp - logp_y);
      nll -= logp_y;
      ++total_positions;
    }
    result.per_example_nll.push_back(nll);
  }
  result.mean =
      total_positions > 0 ? total_loss / static_cast<double>(total_positions)
                          : 0.0;
  return result;
}

LossResult grad(const ModelConfig& cfg, const ModelParameters& params,
                const std::vector<SeqPair>& batch, ModelParameters& grads,
                Rng* dropout_rng) {
  if (batch.empty()) {
    throw std::invalid_argument("grad: empty batch");
  }
  std::int64_t total_positions = 0;
  for (const auto& pair : batch) {
    check_ids(pair.src, cfg.src_vocab_size, "source");
    check_ids(pair.tgt, cfg.tgt_vocab_size, "target");
    std::int64_t live = 0;
    for (auto id : pair.tgt) {
      if (id != Vocabulary::kPad) ++live;
    }
    // +1 for EOS unless the whole target is padding.
    if (live > 0 || pair.tgt.empty()) total_positions += live + 1;
  }

  LossResult result;
  result.mean = 0.0;
  Activations act;
  const auto vocab = static_cast<std::size_t>(cfg.tgt_vocab_size);
  const double eps = cfg.label_smoothing;
  const double inv_total =
      total_positions > 0 ? 1.0 / static_cast<double>(total_positions) : 0.0;
  double total_loss = 0.0;

  for (const auto& pair : batch) {
    std::int64_t live = 0;
    for (auto id : pair.tgt) {
      if (id != Vocabulary::kPad) ++live;
    }
    if (live == 0 && !pair.tgt.empty()) {
      // Fully masked example: contributes neither loss nor gradient.
      result.per_example_nll.push_back(0.0);
      continue;
    }
    const IdSeq dec_input = decoder_input_for(pair.tgt);
    const IdSeq dec_target = decoder_target_for(pair.tgt);
    forward_example(cfg, params, pair.src, dec_input, dropout_rng, act);

    std::vector<std::vector<double>> dlogits(
        dec_target.size(), std::vector<double>(vocab, 0.0));
    double nll = 0.0;
    for (std::size_t j = 0; j < dec_target.size(); ++j) {
      const auto y = dec_target[j];
      if (y == Vocabulary::kPad) continue;
      const auto& logits = act.logits[j];
      const double lse = log_sum_exp(logits);
      const double v = static_cast<double>(vocab);
      const double other = v > 1.0 ? eps / (v - 1.0) : 0.0;
      double sum_logp = 0.0;
      for (std::size_t c = 0; c < vocab; ++c) {
        const double logp = logits[c] - lse;
        sum_logp += logp;
        const double q = c == static_cast<std::size_t>(y) ? 1.0 - eps : other;
        dlogits[j][c] = (std::exp(logp) - q) * inv_total;
      }
      const double logp_y = logits[static_cast<std::size_t>(y)] - lse;
      total_loss -= (1.0 - eps) * logp_y + other * (sum_logp - logp_y);
      nll -= logp_y;
    }
    result.per_example_nll.push_back(nll);
    backward_example(cfg, params, pair.src, dec_input, act, dlogits, grads);
  }
  result.mean = total_positions > 0
                    ? total_loss / static_cast<double>(total_positions)
                    : 0.0;
  return result;
}

LossResult batch_loss(const ModelConfig& cfg, const ModelParameters& params,
                      const std::vector<SeqPair>& batch) {
  std::vector<std::vector<std::vector<double>>> rows;
  std::vector<IdSeq> targets;
  Activations act;
  for (const auto& pair : batch) {
    const IdSeq dec_input = decoder_input_for(pair.tgt);
    forward_example(cfg, params, pair.src, dec_input, nullptr, act);
    rows.push_back(act.logits);
    targets.push_back(decoder_target_for(pair.tgt));
  }
  return loss_from_logits(rows, targets, cfg.label_smoothing);
}

double sequence_nll(const ModelConfig& cfg, const ModelParameters& params,
                    const IdSeq& src, const IdSeq& tgt) {
  Activations act;
  forward_example(cfg, params, src, decoder_input_for(tgt), nullptr, act);
  const IdSeq dec_target = decoder_target_for(tgt);
  double nll = 0.0;
  for (std::size_t j = 0; j < dec_target.size(); ++j) {
    const auto& logits = act.logits[j];
    const double lse = log_sum_exp(logits);
    nll -= logits[static_cast<std::size_t>(dec_target[j])] - lse;
  }
  return nll;
}

IdSeq greedy_decode(const ModelConfig& cfg, const ModelParameters& params,
                    const IdSeq& src, std::int32_t max_len) {
  check_ids(src, cfg.src_vocab_size, "source");
  const auto h = static_cast<std::size_t>(cfg.hidden_dim);
  const auto vocab = static_cast<std::size_t>(cfg.tgt_vocab_size);
  const auto s_len = src.size();

  // Encode once; decode incrementally.
  std::vector<std::vector<double>> enc_h(s_len, std::vector<double>(h, 0.0));
  std::vector<double> pre(h);
  for (std::size_t t = 0; t < s_len; ++t) {
    const double* emb = params.src_embed.row(static_cast<std::size_t>(src[t]));
    std::fill(pre.begin(), pre.end(), 0.0);
    matvec_acc(params.enc_wx, emb, pre.data());
    if (t > 0) matvec_acc(params.enc_wh, enc_h[t - 1].data(), pre.data());
    for (std::size_t i = 0; i < h; ++i) {
      enc_h[t][i] = tanh_clip(pre[i] + params.enc_b.data[i]);
    }
  }

  IdSeq output;
  std::vector<double> state =
      s_len > 0 ? enc_h[s_len - 1] : std::vector<double>(h, 0.0);
  std::int32_t prev_token = Vocabulary::kBos;
  std::vector<double> ctx(h), concat(2 * h), combined(h), logits(vocab);
  std::vector<double> scores(s_len);
  for (std::int32_t step = 0; step < max_len; ++step) {
    const double* emb =
        params.tgt_embed.row(static_cast<std::size_t>(prev_token));
    std::fill(pre.begin(), pre.end(), 0.0);
    matvec_acc(params.dec_wx, emb, pre.data());
    matvec_acc(params.dec_wh, state.data(), pre.data());
    for (std::size_t i = 0; i < h; ++i) {
      state[i] = tanh_clip(pre[i] + params.dec_b.data[i]);
    }

    std::fill(ctx.begin(), ctx.end(), 0.0);
    if (s_len > 0) {
      double max_score = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < s_len; ++t) {
        double score = 0.0;
        for (std::size_t i = 0; i < h; ++i) score += state[i] * enc_h[t][i];
        scores[t] = score;
        max_score = std::max(max_score, score);
      }
      double denom = 0.0;
      for (std::size_t t = 0; t < s_len; ++t) {
        scores[t] = std::exp(scores[t] - max_score);
        denom += scores[t];
      }
      for (std::size_t t = 0; t < s_len; ++t) {
        const double alpha = scores[t] / denom;
        for (std::size_t i = 0; i < h; ++i) ctx[i] += alpha * enc_h[t][i];
      }
    }

    std::copy(state.begin(), state.end(), concat.begin());
    std::copy(ctx.begin(), ctx.end(),
              concat.begin() + static_cast<std::ptrdiff_t>(h));
    std::fill(pre.begin(), pre.end(), 0.0);
    matvec_acc(params.comb_w, concat.data(), pre.data());
    for (std::size_t i = 0; i < h; ++i) {
      combined[i] = tanh_clip(pre[i] + params.comb_b.data[i]);
    }
    std::copy(params.out_b.data.begin(), params.out_b.data.end(),
              logits.begin());
    matvec_acc(params.out_w, combined.data(), logits.data());

    std::size_t best = 0;
    for (std::size_t v = 1; v < vocab; ++v) {
      if (logits[v] > logits[best]) best = v;  // ties keep the lowest id
    }
    const auto token = static_cast<std::int32_t>(best);
    if (token == Vocabulary::kEos) break;
    output.push_back(token);
    prev_token = token;
  }
  return output;
}

}  // namespace seqcl
