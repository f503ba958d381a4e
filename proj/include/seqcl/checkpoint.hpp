// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "seqcl/trainer.hpp"

namespace seqcl {

// Checkpoint container (versioned, little-endian binary):
//   magic "SQC1", u32 version, u64 model-config hash,
//   i64 step, i64 lr_origin, f64 lr peak, i64 lr warmup steps,
//   u64 init seed, length-prefixed mt19937_64 state blob,
//   then params, adam_m, adam_v tensors in ModelParameters::for_each
//   order, each as u64 rows, u64 cols, rows*cols f64 values.
// Loading verifies the stored hash against the caller's ModelConfig and
// throws IncompatibilityError on mismatch.
void save_checkpoint(const TrainState& state,
                     const std::filesystem::path& path);

TrainState load_checkpoint(const std::filesystem::path& path,
                           const ModelConfig& cfg);

// Elementwise mean of the parameter tensors of compatible checkpoints.
ModelParameters average_checkpoints(
    const std::vector<std::filesystem::path>& paths, const ModelConfig& cfg);

}  // namespace seqcl
