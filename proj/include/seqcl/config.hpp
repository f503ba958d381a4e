// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "seqcl/corpus.hpp"
#include "seqcl/model.hpp"
#include "seqcl/scheduler.hpp"

namespace seqcl {

// Difficulty criterion selector as spelled on the CLI.
enum class Criterion {
  kRecovery,
  kLength,
  kRarity,
  kLm,
  kEmbedNorm,
  kLossDecline
};

Criterion criterion_from_string(const std::string& name);
std::string to_string(Criterion criterion);

// Full experiment description. Defaults are the noisy-cipher smoke setup;
// a config file overrides them. Seeds carry no wall-clock defaults: runs
// are reproducible unless the user changes them.
struct ExperimentConfig {
  struct Corpus {
    bool synthetic = true;
    SyntheticTaskSpec task{SyntheticTask::kNoisyCipher, 50, 3, 12, 0.2, 0.5};
    int n = 2000;
    std::filesystem::path src_file;
    std::filesystem::path tgt_file;
    TokenizeMode tokenize = TokenizeMode::kWhitespace;
    std::int64_t min_freq = 1;
  } corpus;

  struct Model {
    std::int32_t embed_dim = 32;
    std::int32_t hidden_dim = 64;
    double dropout = 0.0;
    double label_smoothing = 0.1;
    std::int32_t max_decode_len = 24;
  } model;

  struct Train {
    std::int64_t vanilla_steps = 2000;
    std::int64_t max_tokens_per_batch = 400;
    double peak_lr = 3e-3;
    std::int64_t warmup_steps = 100;
    std::int64_t log_every = 100;
    std::int64_t eval_every = 250;
    double dev_fraction = 0.05;
  } train;

  ScheduleConfig schedule;

  Criterion criterion = Criterion::kRecovery;
  int lm_order = 2;

  struct Report {
    double bin_width = 10.0;
  } report;

  struct Seeds {
    std::uint64_t data = 1;
    std::uint64_t vanilla = 2;
    std::uint64_t cl = 3;
  } seeds;

  std::filesystem::path out_dir = "out";

  void validate() const;  // throws ConfigError

  // Canonical text of every field except out_dir; identical settings hash
  // identically regardless of where outputs land.
  std::string canonical_string() const;
  std::uint64_t hash() const;
};

// Strict JSON loader: unknown keys anywhere are ConfigErrors.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& origin);

}  // namespace seqcl
