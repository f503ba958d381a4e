// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "seqcl/corpus.hpp"
#include "seqcl/model.hpp"
#include "seqcl/rng.hpp"

namespace seqcl {

// Inverse square-root schedule with linear warm-up:
// lr(t) = peak * min(t / warmup, sqrt(warmup / t)), t >= 1.
struct LrSchedule {
  double peak = 3e-3;
  std::int64_t warmup_steps = 100;
};

double lr_at(std::int64_t t, const LrSchedule& schedule);

// Mutable training state: parameters, Adam moments, step counters and the
// RNG that drives dropout. Single-writer; decoding against a copied
// parameter snapshot is safe concurrently.
struct TrainState {
  ModelConfig cfg;
  ModelParameters params;
  ModelParameters adam_m;
  ModelParameters adam_v;
  std::int64_t step = 0;
  // Global step at the last warm-up restart; the schedule sees t - origin.
  std::int64_t lr_origin = 0;
  LrSchedule lr;
  Rng rng{0};
  std::uint64_t init_seed = 0;

  // Restart the learning-rate warm-up from the current step.
  void warmup_restart() { lr_origin = step; }
  double current_lr() const { return lr_at(step - lr_origin + 1, lr); }
};

TrainState init_train_state(const ModelConfig& cfg, std::uint64_t seed,
                            const LrSchedule& lr);

// Standard Adam (beta1=0.9, beta2=0.98, eps=1e-9) with bias correction;
// increments state.step. Throws on non-finite gradients, naming the tensor.
void adam_step(TrainState& state, const ModelParameters& grads, double lr);

// Examples encoded once up front; indexed by example id.
struct EncodedCorpus {
  std::vector<IdSeq> src;
  std::vector<IdSeq> tgt;

  static EncodedCorpus build(const ParallelCorpus& corpus,
                             const Vocabulary& src_vocab,
                             const Vocabulary& tgt_vocab);
  SeqPair pair(int id) const {
    return {src[static_cast<std::size_t>(id)],
            tgt[static_cast<std::size_t>(id)]};
  }
};

// Token-budgeted batches over a fixed id set, reshuffled each epoch with a
// seed derived from (seed, epoch). Holds a cursor so interleaved
// train/evaluate cycles keep consuming one deterministic stream.
class BatchStream {
 public:
  BatchStream(std::vector<int> ids, const ParallelCorpus& corpus,
              std::int64_t max_tokens, std::uint64_t seed);

  const Batch& next();
  const std::vector<int>& ids() const { return ids_; }

 private:
  std::vector<int> ids_;
  const ParallelCorpus* corpus_;
  std::int64_t max_tokens_;
  std::uint64_t seed_;
  std::uint64_t epoch_ = 0;
  std::size_t cursor_ = 0;
  std::vector<Batch> batches_;

  void refill();
};

// Invoked after every optimizer step with the new global step count.
using StepCallback =
    std::function<void(std::int64_t global_step, double batch_loss, double lr)>;

// Runs n optimizer steps drawing batches from the stream. n = 0 is a no-op.
void train_steps(TrainState& state, BatchStream& stream,
                 const EncodedCorpus& encoded, std::int64_t n,
                 const StepCallback& on_step = {});

// Elementwise arithmetic mean; all parameter sets must share one shape.
ModelParameters average_parameters(const std::vector<ModelParameters>& sets);

}  // namespace seqcl
