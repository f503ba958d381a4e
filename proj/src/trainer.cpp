// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "seqcl/errors.hpp"

namespace seqcl {

namespace {
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.98;
constexpr double kAdamEps = 1e-9;
}  // namespace

double lr_at(std::int64_t t, const LrSchedule& schedule) {
  if (t < 1) t = 1;
  const auto td = static_cast<double>(t);
  const auto w = static_cast<double>(schedule.warmup_steps);
  return schedule.peak * std::min(td / w, std::sqrt(w / td));
}

TrainState init_train_state(const ModelConfig& cfg, std::uint64_t seed,
                            const LrSchedule& lr) {
  TrainState state;
  state.cfg = cfg;
  state.params = init_model(cfg, seed);
  state.adam_m = ModelParameters::zeros_like(cfg);
  state.adam_v = ModelParameters::zeros_like(cfg);
  state.lr = lr;
  state.rng.seed(mix_seed(seed, 0xD0));
  state.init_seed = seed;
  return state;
}

void adam_step(TrainState& state, const ModelParameters& grads, double lr) {
  if (!state.params.same_shape(grads)) {
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  }
  const auto t = static_cast<double>(state.step + 1);
  const double bc1 = 1.0 - std::pow(kBeta1, t);
  const double bc2 = 1.0 - std::pow(kBeta2, t);

  Tensor* m_tensors[12];
  Tensor* v_tensors[12];
  const Tensor* g_tensors[12];
  Tensor* p_tensors[12];
  const char* names[12];
  int idx = 0;
  state.adam_m.for_each([&](const char* name, Tensor& tensor) {
    names[idx] = name;
    m_tensors[idx++] = &tensor;
  });
  idx = 0;
  state.adam_v.for_each(
      [&](const char*, Tensor& tensor) { v_tensors[idx++] = &tensor; });
  idx = 0;
  grads.for_each(
      [&](const char*, const Tensor& tensor) { g_tensors[idx++] = &tensor; });
  idx = 0;
  state.params.for_each(
      [&](const char*, Tensor& tensor) { p_tensors[idx++] = &tensor; });

  for (int k = 0; k < 12; ++k) {
    const Tensor& g = *g_tensors[k];
    Tensor& m = *m_tensors[k];
    Tensor& v = *v_tensors[k];
    Tensor& p = *p_tensors[k];
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      const double gi = g.data[i];
      if (!std::isfinite(gi)) {
        throw std::runtime_error(
            std::string("adam_step: non-finite gradient in tensor ") +
            names[k] + " at flat index " + std::to_string(i));
      }
      m.data[i] = kBeta1 * m.data[i] + (1.0 - kBeta1) * gi;
      v.data[i] = kBeta2 * v.data[i] + (1.0 - kBeta2) * gi * gi;
      const double m_hat = m.data[i] / bc1;
      const double v_hat = v.data[i] / bc2;
      p.data[i] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEps);
    }
  }
  ++state.step;
}

EncodedCorpus EncodedCorpus::build(const ParallelCorpus& corpus,
                                   const Vocabulary& src_vocab,
                                   const Vocabulary& tgt_vocab) {
  EncodedCorpus encoded;
  encoded.src.reserve(corpus.size());
  encoded.tgt.reserve(corpus.size());
  for (const Example& ex : corpus.examples) {
    encoded.src.push_back(src_vocab.encode(ex.src_tokens));
    encoded.tgt.push_back(tgt_vocab.encode(ex.tgt_tokens));
  }
  return encoded;
}

BatchStream::BatchStream(std::vector<int> ids, const ParallelCorpus& corpus,
                         std::int64_t max_tokens, std::uint64_t seed)
    : ids_(std::move(ids)),
      corpus_(&corpus),
      max_tokens_(max_tokens),
      seed_(seed) {
  if (ids_.empty()) {
    throw std::invalid_argument("BatchStream: empty id set");
  }
  refill();
}

void BatchStream::refill() {
  batches_ = make_batches(ids_, *corpus_, max_tokens_, mix_seed(seed_, epoch_));
  cursor_ = 0;
  ++epoch_;
}

const Batch& BatchStream::next() {
  if (cursor_ >= batches_.size()) refill();
  return batches_[cursor_++];
}

void train_steps(TrainState& state, BatchStream& stream,
                 const EncodedCorpus& encoded, std::int64_t n,
                 const StepCallback& on_step) {
  std::vector<SeqPair> batch;
  for (std::int64_t i = 0; i < n; ++i) {
    const Batch& ids = stream.next();
    batch.clear();
    batch.reserve(ids.size());
    for (int id : ids) batch.push_back(encoded.pair(id));
    ModelParameters grads = ModelParameters::zeros_like(state.cfg);
    Rng* dropout = state.cfg.dropout > 0.0 ? &state.rng : nullptr;
    const LossResult loss = grad(state.cfg, state.params, batch, grads, dropout);
    const double lr = state.current_lr();
    adam_step(state, grads, lr);
    if (on_step) on_step(state.step, loss.mean, lr);
  }
}

ModelParameters average_parameters(const std::vector<ModelParameters>& sets) {
  if (sets.empty()) {
    throw std::invalid_argument("average_parameters: no parameter sets");
  }
  ModelParameters mean = sets.front();
  for (std::size_t k = 1; k < sets.size(); ++k) {
    if (!mean.same_shape(sets[k])) {
      throw std::invalid_argument("average_parameters: shape mismatch");
    }
    int idx = 0;
    Tensor* acc[12];
    mean.for_each([&](const char*, Tensor& t) { acc[idx++] = &t; });
    idx = 0;
    sets[k].for_each([&](const char*, const Tensor& t) {
      Tensor& a = *acc[idx++];
      for (std::size_t i = 0; i < t.data.size(); ++i) a.data[i] += t.data[i];
    });
  }
  const double inv = 1.0 / static_cast<double>(sets.size());
  mean.for_each([&](const char*, Tensor& t) {
    for (auto& v : t.data) v *= inv;
  });
  return mean;
}

}  // namespace seqcl
