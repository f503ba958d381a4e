// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqcl/checkpoint.hpp"
#include "seqcl/config.hpp"
#include "seqcl/corpus.hpp"
#include "seqcl/difficulty.hpp"
#include "seqcl/scheduler.hpp"
#include "seqcl/trainer.hpp"

namespace seqcl {

// Everything derived deterministically from an ExperimentConfig: the
// corpus, vocabularies, encoded views, the train/dev split and the
// resolved model configuration.
struct Experiment {
  ExperimentConfig cfg;
  ParallelCorpus corpus;
  Vocabulary src_vocab;
  Vocabulary tgt_vocab;
  EncodedCorpus encoded;
  std::vector<int> train_ids;  // sorted
  std::vector<int> dev_ids;    // sorted
  ModelConfig model_cfg;       // vocab sizes resolved from the corpus
  std::uint64_t config_hash = 0;

  TokenSeq decode_src(const TrainState& state, const Example& ex) const;
  double dev_bleu(const TrainState& state) const;
  // Keeps only training-split members, preserving order.
  std::vector<int> without_dev(const std::vector<int>& ids) const;
};

Experiment prepare_experiment(const ExperimentConfig& cfg);

struct VanillaArtifacts {
  std::filesystem::path checkpoint;
  std::filesystem::path mid_checkpoint;  // for the loss-decline criterion
  std::filesystem::path trace;
  double final_dev_bleu = 0.0;
};

// Trains the vanilla model phi on the training split of the full corpus
// and writes checkpoint + dev-BLEU trace under cfg.out_dir.
VanillaArtifacts cmd_train_vanilla(const Experiment& exp);

// Scores every example in the corpus under the selected criterion and
// writes the TSV. Recovery decodes greedily with the checkpointed model;
// loss-decline additionally needs `prev_checkpoint` (defaults to the
// vanilla mid checkpoint next to `checkpoint`).
std::filesystem::path cmd_score(
    const Experiment& exp, const std::filesystem::path& checkpoint,
    std::optional<Criterion> criterion_override = std::nullopt,
    std::optional<std::filesystem::path> prev_checkpoint = std::nullopt);

// Splits a score TSV into K subsets and writes the canonical manifest.
// Refuses score tables produced under a different config hash.
std::filesystem::path cmd_split(const Experiment& exp,
                                const std::filesystem::path& score_path,
                                int k);

struct ClArtifacts {
  std::filesystem::path checkpoint;
  std::filesystem::path trace;
  std::int64_t total_steps = 0;
  double final_dev_bleu = 0.0;
};

// Retrains a fresh model under the configured curriculum schedule.
ClArtifacts cmd_train_cl(const Experiment& exp,
                         const std::filesystem::path& manifest_path,
                         const std::filesystem::path& vanilla_checkpoint);

// Continues the vanilla checkpoint for `steps` more standard training
// steps; the desk-scale baseline the CL run is compared against.
ClArtifacts continue_baseline(const Experiment& exp,
                              const std::filesystem::path& vanilla_checkpoint,
                              std::int64_t steps, const std::string& tag);

struct PartitionStatsRow {
  int subset = 0;  // 1-based
  std::size_t size = 0;
  double min_bleu = 0.0;
  double max_bleu = 0.0;
  double mean_bleu = 0.0;
};

struct ReportArtifacts {
  std::filesystem::path histogram;
  std::filesystem::path subset_stats;
  std::filesystem::path learning_curves;
  std::vector<PartitionStatsRow> stats;
  double fraction_below_10 = 0.0;
};

// Renders histogram / subset-table / merged-curve CSVs from a score table,
// a partition manifest, and any number of trace files.
ReportArtifacts cmd_report(const Experiment& exp,
                           const std::filesystem::path& score_path,
                           const std::filesystem::path& manifest_path,
                           const std::vector<std::filesystem::path>& traces);

// Per-subset recovery-degree statistics (BLEU = -difficulty score).
std::vector<PartitionStatsRow> partition_stats(
    const DifficultyScoreTable& scores, const CurriculumPartition& partition);
void write_partition_stats_csv(const std::vector<PartitionStatsRow>& rows,
                               const std::filesystem::path& path);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};
// Recovery-degree histogram over [0, 100] with the given bin width; the
// final bin is closed at 100.
std::vector<HistogramBin> degree_histogram(const DifficultyScoreTable& scores,
                                           double bin_width);

struct RunAllResult {
  VanillaArtifacts vanilla;
  std::filesystem::path score_table;
  std::filesystem::path manifest;
  ClArtifacts cl;
  ClArtifacts baseline;
  ReportArtifacts report;
  std::filesystem::path summary;
  // Ground-truth enrichment of injected noise, by subset (noisy task only).
  std::vector<double> corrupted_fraction_by_subset;
};

// Full pipeline: vanilla -> score -> split -> CL train -> baseline
// continuation -> report, plus a summary.json of the headline numbers.
RunAllResult run_all(const ExperimentConfig& cfg);

}  // namespace seqcl
