// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqcl/errors.hpp"
#include "seqcl/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string mode;
  int k = 0;
  std::optional<std::uint64_t> seed_data, seed_vanilla, seed_cl;
  std::string criterion;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Experiment config (JSON)");
  cmd->add_option("--out", opts.out_dir, "Output directory override");
  cmd->add_option("--mode", opts.mode, "Schedule mode: fixed|dynamic|competence");
  cmd->add_option("--k", opts.k, "Number of curriculum subsets");
  cmd->add_option("--seed-data", opts.seed_data, "Corpus / data-order seed");
  cmd->add_option("--seed-vanilla", opts.seed_vanilla, "Vanilla model seed");
  cmd->add_option("--seed-cl", opts.seed_cl, "CL model seed");
  cmd->add_option(
      "--criterion", opts.criterion,
      "Difficulty criterion: recovery|length|rarity|lm|embed-norm|loss-decline");
}

seqcl::ExperimentConfig resolve_config(const CommonOpts& opts) {
  seqcl::ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = seqcl::load_experiment_config(opts.config_path);
  }
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (!opts.mode.empty()) {
    if (opts.mode == "fixed") {
      cfg.schedule.mode = seqcl::ScheduleMode::kFixed;
    } else if (opts.mode == "dynamic") {
      cfg.schedule.mode = seqcl::ScheduleMode::kDynamic;
    } else if (opts.mode == "competence") {
      cfg.schedule.mode = seqcl::ScheduleMode::kCompetence;
    } else {
      throw seqcl::ConfigError("unknown --mode '" + opts.mode + "'");
    }
  }
  if (opts.k > 0) cfg.schedule.k = opts.k;
  if (opts.seed_data) cfg.seeds.data = *opts.seed_data;
  if (opts.seed_vanilla) cfg.seeds.vanilla = *opts.seed_vanilla;
  if (opts.seed_cl) cfg.seeds.cl = *opts.seed_cl;
  if (!opts.criterion.empty()) {
    cfg.criterion = seqcl::criterion_from_string(opts.criterion);
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-guided curriculum training harness for small seq2seq models"};
  app.require_subcommand(1);

  CommonOpts train_vanilla_opts;
  auto* train_vanilla = app.add_subcommand(
      "train-vanilla", "Train the vanilla model on the full corpus");
  add_common(train_vanilla, train_vanilla_opts);

  CommonOpts score_opts;
  std::string score_checkpoint, score_prev_checkpoint;
  auto* score = app.add_subcommand(
      "score", "Score every training example under a difficulty criterion");
  add_common(score, score_opts);
  score->add_option("--checkpoint", score_checkpoint, "Trained vanilla checkpoint")
      ->required();
  score->add_option("--prev-checkpoint", score_prev_checkpoint,
                    "Earlier checkpoint (loss-decline criterion)");

  CommonOpts split_opts;
  std::string split_scores;
  auto* split = app.add_subcommand(
      "split", "Split a score table into K difficulty subsets");
  add_common(split, split_opts);
  split->add_option("--scores", split_scores, "Score table TSV")->required();

  CommonOpts train_cl_opts;
  std::string cl_manifest, cl_vanilla;
  auto* train_cl = app.add_subcommand(
      "train-cl", "Retrain under the curriculum schedule");
  add_common(train_cl, train_cl_opts);
  train_cl->add_option("--manifest", cl_manifest, "Partition manifest JSON")
      ->required();
  train_cl->add_option("--vanilla", cl_vanilla, "Vanilla checkpoint")
      ->required();

  CommonOpts report_opts;
  std::string report_scores, report_manifest;
  std::vector<std::string> report_traces;
  auto* report = app.add_subcommand(
      "report", "Render histogram, subset table and learning curves");
  add_common(report, report_opts);
  report->add_option("--scores", report_scores, "Score table TSV")->required();
  report->add_option("--manifest", report_manifest, "Partition manifest JSON")
      ->required();
  report->add_option("--trace", report_traces,
                     "Trace CSV (repeatable, merged into the curve report)");

  CommonOpts run_all_opts;
  auto* run_all_cmd = app.add_subcommand(
      "run-all", "Full pipeline: vanilla, score, split, CL, baseline, report");
  add_common(run_all_cmd, run_all_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_vanilla->parsed()) {
      const auto cfg = resolve_config(train_vanilla_opts);
      const auto exp = seqcl::prepare_experiment(cfg);
      const auto artifacts = seqcl::cmd_train_vanilla(exp);
      std::cout << "checkpoint: " << artifacts.checkpoint.string() << '\n'
                << "trace: " << artifacts.trace.string() << '\n'
                << "dev_bleu: " << artifacts.final_dev_bleu << '\n';
    } else if (score->parsed()) {
      const auto cfg = resolve_config(score_opts);
      const auto exp = seqcl::prepare_experiment(cfg);
      std::optional<std::filesystem::path> prev;
      if (!score_prev_checkpoint.empty()) prev = score_prev_checkpoint;
      const auto path =
          seqcl::cmd_score(exp, score_checkpoint, std::nullopt, prev);
      std::cout << "scores: " << path.string() << '\n';
    } else if (split->parsed()) {
      const auto cfg = resolve_config(split_opts);
      const auto exp = seqcl::prepare_experiment(cfg);
      const auto path = seqcl::cmd_split(exp, split_scores, cfg.schedule.k);
      std::cout << "manifest: " << path.string() << '\n';
    } else if (train_cl->parsed()) {
      const auto cfg = resolve_config(train_cl_opts);
      const auto exp = seqcl::prepare_experiment(cfg);
      const auto artifacts = seqcl::cmd_train_cl(exp, cl_manifest, cl_vanilla);
      std::cout << "checkpoint: " << artifacts.checkpoint.string() << '\n'
                << "trace: " << artifacts.trace.string() << '\n'
                << "total_steps: " << artifacts.total_steps << '\n'
                << "dev_bleu: " << artifacts.final_dev_bleu << '\n';
    } else if (report->parsed()) {
      const auto cfg = resolve_config(report_opts);
      const auto exp = seqcl::prepare_experiment(cfg);
      std::vector<std::filesystem::path> traces(report_traces.begin(),
                                                report_traces.end());
      const auto artifacts =
          seqcl::cmd_report(exp, report_scores, report_manifest, traces);
      std::cout << "histogram: " << artifacts.histogram.string() << '\n'
                << "subset_stats: " << artifacts.subset_stats.string() << '\n'
                << "learning_curves: " << artifacts.learning_curves.string()
                << '\n'
                << "fraction_below_10: " << artifacts.fraction_below_10
                << '\n';
    } else if (run_all_cmd->parsed()) {
      const auto cfg = resolve_config(run_all_opts);
      const auto result = seqcl::run_all(cfg);
      std::cout << "summary: " << result.summary.string() << '\n'
                << "vanilla_dev_bleu: " << result.vanilla.final_dev_bleu
                << '\n'
                << "cl_dev_bleu: " << result.cl.final_dev_bleu << '\n'
                << "baseline_dev_bleu: " << result.baseline.final_dev_bleu
                << '\n'
                << "fraction_below_10: " << result.report.fraction_below_10
                << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
