// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seqcl/bleu.hpp"
#include "seqcl/errors.hpp"
#include "seqcl/hash.hpp"

namespace seqcl {

namespace {

constexpr std::uint64_t kDevSplitSalt = 0xDE5;
constexpr std::uint64_t kVanillaDataSalt = 0x7A1;
constexpr std::uint64_t kClDataSalt = 0xC1;
constexpr std::uint64_t kBaselineDataSalt = 0xBA5E;

std::string tokenize_mode_name(TokenizeMode mode) {
  return mode == TokenizeMode::kWhitespace ? "whitespace" : "character";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << text;
  if (!out) throw IoError("write failure on file: " + path.string());
}

// Greedy decode of one example against a frozen parameter snapshot.
TokenSeq decode_example(const ModelConfig& cfg, const ModelParameters& params,
                        const Vocabulary& src_vocab,
                        const Vocabulary& tgt_vocab, const TokenSeq& src) {
  const IdSeq src_ids = src_vocab.encode(src);
  const IdSeq out = greedy_decode(cfg, params, src_ids, cfg.max_decode_len);
  return tgt_vocab.decode(out);
}

double corpus_dev_bleu(const Experiment& exp, const ModelConfig& cfg,
                       const ModelParameters& params) {
  if (exp.dev_ids.empty()) return 0.0;
  std::vector<std::pair<TokenSeq, TokenSeq>> pairs;
  pairs.reserve(exp.dev_ids.size());
  for (int id : exp.dev_ids) {
    const Example& ex = exp.corpus.at(id);
    pairs.emplace_back(decode_example(cfg, params, exp.src_vocab,
                                      exp.tgt_vocab, ex.src_tokens),
                       ex.tgt_tokens);
  }
  return corpus_bleu(pairs).value;
}

// Shared train loop for the vanilla model and the baseline continuation:
// plain single-phase training with periodic trace summaries.
void run_plain_training(const Experiment& exp, TrainState& state,
                        BatchStream& stream, std::int64_t steps,
                        TraceSink& sink) {
  const auto& tr = exp.cfg.train;
  const auto size = static_cast<std::int64_t>(stream.ids().size());
  train_steps(state, stream, exp.encoded, steps,
              [&](std::int64_t step, double, double lr) {
                if (step % tr.log_every != 0) return;
                std::optional<double> dev;
                if (step % tr.eval_every == 0) {
                  dev = corpus_dev_bleu(exp, state.cfg, state.params);
                }
                sink.train_step_summary(step, 1, size, dev, lr);
              });
}

std::map<std::string, std::string> artifact_metadata(const Experiment& exp) {
  return {{"config", hash_hex(exp.config_hash)}};
}

DifficultyScoreTable scores_for_criterion(
    const Experiment& exp, Criterion criterion, const TrainState& model,
    const std::optional<std::filesystem::path>& prev_checkpoint) {
  switch (criterion) {
    case Criterion::kRecovery: {
      const ModelConfig cfg = model.cfg;
      const ModelParameters& params = model.params;
      return recovery_difficulty(
          exp.corpus, [&](const TokenSeq& src) {
            return decode_example(cfg, params, exp.src_vocab, exp.tgt_vocab,
                                  src);
          });
    }
    case Criterion::kLength:
      return feature_difficulty(exp.corpus, SentenceFeature::kLength);
    case Criterion::kRarity:
      return feature_difficulty(exp.corpus, SentenceFeature::kWordRarity);
    case Criterion::kLm: {
      std::vector<TokenSeq> sentences;
      sentences.reserve(exp.corpus.size());
      for (const Example& ex : exp.corpus.examples) {
        sentences.push_back(ex.src_tokens);
      }
      const NgramLM lm = NgramLM::train(sentences, exp.cfg.lm_order);
      return lm_difficulty(exp.corpus, lm, CorpusSide::kSource);
    }
    case Criterion::kEmbedNorm: {
      EmbeddingTable table;
      const Tensor& emb = model.params.src_embed;
      for (std::int32_t id = 0; id < exp.src_vocab.size(); ++id) {
        const double* row = emb.row(static_cast<std::size_t>(id));
        table.vectors[exp.src_vocab.id_to_token(id)] =
            std::vector<double>(row, row + emb.cols);
      }
      return embedding_norm_difficulty(exp.corpus, table);
    }
    case Criterion::kLossDecline: {
      if (!prev_checkpoint) {
        throw ConfigError(
            "loss-decline scoring needs a previous checkpoint (vanilla mid "
            "checkpoint)");
      }
      const TrainState prev = load_checkpoint(*prev_checkpoint, exp.model_cfg);
      std::map<int, double> prev_losses, cur_losses;
      for (const Example& ex : exp.corpus.examples) {
        const SeqPair pair = exp.encoded.pair(ex.id);
        prev_losses[ex.id] =
            sequence_nll(prev.cfg, prev.params, pair.src, pair.tgt);
        cur_losses[ex.id] =
            sequence_nll(model.cfg, model.params, pair.src, pair.tgt);
      }
      return loss_decline_difficulty(prev_losses, cur_losses);
    }
  }
  throw ConfigError("unhandled criterion");
}

void verify_config_hash(const std::string& artifact,
                        const std::string& stored_hex,
                        const Experiment& exp) {
  if (stored_hex.empty()) return;  // artifact predates hashing; accept
  if (stored_hex != hash_hex(exp.config_hash)) {
    throw IncompatibilityError(
        artifact + " was produced under config " + stored_hex +
        " but the current config hashes to " + hash_hex(exp.config_hash));
  }
}

}  // namespace

TokenSeq Experiment::decode_src(const TrainState& state,
                                const Example& ex) const {
  return decode_example(state.cfg, state.params, src_vocab, tgt_vocab,
                        ex.src_tokens);
}

double Experiment::dev_bleu(const TrainState& state) const {
  return corpus_dev_bleu(*this, state.cfg, state.params);
}

std::vector<int> Experiment::without_dev(const std::vector<int>& ids) const {
  std::vector<int> out;
  out.reserve(ids.size());
  for (int id : ids) {
    if (!std::binary_search(dev_ids.begin(), dev_ids.end(), id)) {
      out.push_back(id);
    }
  }
  return out;
}

Experiment prepare_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Experiment exp;
  exp.cfg = cfg;
  exp.config_hash = cfg.hash();

  if (cfg.corpus.synthetic) {
    exp.corpus = generate_synthetic(cfg.corpus.task, cfg.corpus.n,
                                    cfg.seeds.data);
  } else {
    exp.corpus = load_parallel(cfg.corpus.src_file, cfg.corpus.tgt_file,
                               cfg.corpus.tokenize);
  }
  if (exp.corpus.examples.empty()) {
    throw ConfigError("corpus is empty after loading");
  }

  exp.src_vocab =
      Vocabulary::build(exp.corpus, VocabSide::kSource, cfg.corpus.min_freq);
  exp.tgt_vocab =
      Vocabulary::build(exp.corpus, VocabSide::kTarget, cfg.corpus.min_freq);
  exp.encoded = EncodedCorpus::build(exp.corpus, exp.src_vocab, exp.tgt_vocab);

  // Deterministic 5% (by default) dev split; at least one example stays in
  // the training split.
  std::vector<int> ids = exp.corpus.all_ids();
  Rng rng(mix_seed(cfg.seeds.data, kDevSplitSalt));
  rng_shuffle(rng, ids);
  auto dev_n = static_cast<std::size_t>(std::llround(
      cfg.train.dev_fraction * static_cast<double>(ids.size())));
  dev_n = std::min(dev_n, ids.size() - 1);
  exp.dev_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(dev_n));
  exp.train_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(dev_n), ids.end());
  std::sort(exp.dev_ids.begin(), exp.dev_ids.end());
  std::sort(exp.train_ids.begin(), exp.train_ids.end());

  exp.model_cfg.src_vocab_size = exp.src_vocab.size();
  exp.model_cfg.tgt_vocab_size = exp.tgt_vocab.size();
  exp.model_cfg.embed_dim = cfg.model.embed_dim;
  exp.model_cfg.hidden_dim = cfg.model.hidden_dim;
  exp.model_cfg.dropout = cfg.model.dropout;
  exp.model_cfg.label_smoothing = cfg.model.label_smoothing;
  exp.model_cfg.max_decode_len = cfg.model.max_decode_len;
  exp.model_cfg.validate();

  std::filesystem::create_directories(cfg.out_dir);
  return exp;
}

VanillaArtifacts cmd_train_vanilla(const Experiment& exp) {
  const auto& cfg = exp.cfg;
  TrainState state = init_train_state(
      exp.model_cfg, cfg.seeds.vanilla,
      LrSchedule{cfg.train.peak_lr, cfg.train.warmup_steps});

  PhaseTrace trace;
  TraceSink sink(trace);
  VanillaArtifacts artifacts;
  artifacts.checkpoint = cfg.out_dir / "vanilla.ckpt";
  artifacts.mid_checkpoint = cfg.out_dir / "vanilla_mid.ckpt";
  artifacts.trace = cfg.out_dir / "vanilla_trace.csv";

  const std::int64_t steps = cfg.train.vanilla_steps;
  const std::int64_t mid = (steps + 1) / 2;
  if (steps > 0) {
    BatchStream stream(exp.train_ids, exp.corpus,
                       cfg.train.max_tokens_per_batch,
                       mix_seed(cfg.seeds.data, kVanillaDataSalt));
    run_plain_training(exp, state, stream, mid, sink);
    save_checkpoint(state, artifacts.mid_checkpoint);
    run_plain_training(exp, state, stream, steps - mid, sink);
  } else {
    save_checkpoint(state, artifacts.mid_checkpoint);
  }
  trace.total_steps = state.step;
  artifacts.final_dev_bleu = exp.dev_bleu(state);
  {
    TraceEvent e;
    e.step = state.step;
    e.phase = 1;
    e.kind = TraceEventKind::kTrainStepSummary;
    e.train_set_size = static_cast<std::int64_t>(exp.train_ids.size());
    e.dev_bleu = artifacts.final_dev_bleu;
    e.lr = state.current_lr();
    trace.events.push_back(e);
  }
  save_checkpoint(state, artifacts.checkpoint);
  write_trace_csv(trace, artifacts.trace, artifact_metadata(exp));
  return artifacts;
}

std::filesystem::path cmd_score(
    const Experiment& exp, const std::filesystem::path& checkpoint,
    std::optional<Criterion> criterion_override,
    std::optional<std::filesystem::path> prev_checkpoint) {
  const Criterion criterion =
      criterion_override.value_or(exp.cfg.criterion);
  const TrainState model = load_checkpoint(checkpoint, exp.model_cfg);
  if (criterion == Criterion::kLossDecline && !prev_checkpoint) {
    const auto mid = checkpoint.parent_path() / "vanilla_mid.ckpt";
    if (std::filesystem::exists(mid)) prev_checkpoint = mid;
  }
  DifficultyScoreTable table =
      scores_for_criterion(exp, criterion, model, prev_checkpoint);
  table.metadata["config"] = hash_hex(exp.config_hash);
  table.metadata["checkpoint"] = hash_hex(file_fnv1a64(checkpoint));
  table.metadata["tokenization"] = tokenize_mode_name(exp.cfg.corpus.tokenize);
  const auto path =
      exp.cfg.out_dir / ("scores_" + to_string(criterion) + ".tsv");
  write_score_table(table, path);
  return path;
}

std::filesystem::path cmd_split(const Experiment& exp,
                                const std::filesystem::path& score_path,
                                int k) {
  const DifficultyScoreTable table = read_score_table(score_path);
  if (auto it = table.metadata.find("config"); it != table.metadata.end()) {
    verify_config_hash("score table " + score_path.string(), it->second, exp);
  }
  const CurriculumPartition partition = split_corpus(table, k);
  const auto path = exp.cfg.out_dir / "partition.json";
  write_partition_manifest(
      partition, path,
      {{"config", hash_hex(exp.config_hash)},
       {"scores", hash_hex(file_fnv1a64(score_path))}});
  return path;
}

namespace {

// Schedule-driven training shared by cmd_train_cl; assembles the hooks
// around a TrainState and the experiment's corpus views.
PhaseTrace run_scheduled_training(const Experiment& exp, TrainState& state,
                                  const ModelParameters& vanilla_params,
                                  const CurriculumPartition& partition,
                                  const std::map<int, double>* competence_scores,
                                  const std::filesystem::path& trace_path) {
  const auto& cfg = exp.cfg;
  ScheduleConfig schedule = cfg.schedule;
  if (schedule.subsample_seed == 0) {
    schedule.subsample_seed = mix_seed(cfg.seeds.data, 0x5A3);
  }

  struct StreamSlot {
    std::vector<int> ids;
    std::unique_ptr<BatchStream> stream;
  };
  auto slot = std::make_shared<StreamSlot>();

  TrainerHooks hooks;
  hooks.warmup_restart = [&state]() { state.warmup_restart(); };
  hooks.train_steps = [&, slot](const std::vector<int>& train_ids,
                                std::int64_t n, int phase, TraceSink& sink) {
    std::vector<int> effective = exp.without_dev(train_ids);
    if (effective.empty()) effective = train_ids;  // dev-only corner
    if (slot->ids != effective) {
      slot->ids = effective;
      slot->stream = std::make_unique<BatchStream>(
          effective, exp.corpus, cfg.train.max_tokens_per_batch,
          mix_seed(mix_seed(cfg.seeds.data, kClDataSalt),
                   static_cast<std::uint64_t>(phase)));
    }
    const auto size = static_cast<std::int64_t>(train_ids.size());
    train_steps(state, *slot->stream, exp.encoded, n,
                [&](std::int64_t step, double, double lr) {
                  if (step % cfg.train.log_every != 0) return;
                  std::optional<double> dev;
                  if (step % cfg.train.eval_every == 0) {
                    dev = corpus_dev_bleu(exp, state.cfg, state.params);
                  }
                  sink.train_step_summary(step, phase, size, dev, lr);
                });
  };
  hooks.cl_decode = [&](const Example& ex) {
    return decode_example(state.cfg, state.params, exp.src_vocab,
                          exp.tgt_vocab, ex.src_tokens);
  };
  hooks.vanilla_decode = [&](const Example& ex) {
    return decode_example(state.cfg, vanilla_params, exp.src_vocab,
                          exp.tgt_vocab, ex.src_tokens);
  };

  return run_schedule(exp.corpus, partition, schedule, hooks,
                      competence_scores, &trace_path);
}

}  // namespace

ClArtifacts cmd_train_cl(const Experiment& exp,
                         const std::filesystem::path& manifest_path,
                         const std::filesystem::path& vanilla_checkpoint) {
  const auto& cfg = exp.cfg;
  const CurriculumPartition partition = read_partition_manifest(manifest_path);

  // The manifest must cover exactly the corpus's id universe.
  std::set<int> seen;
  for (const auto& subset : partition.subsets) {
    for (int id : subset) {
      if (id < 0 || static_cast<std::size_t>(id) >= exp.corpus.size() ||
          !seen.insert(id).second) {
        throw IncompatibilityError(
            "manifest " + manifest_path.string() +
            " does not form a partition of the corpus (offending id " +
            std::to_string(id) + ")");
      }
    }
  }
  if (seen.size() != exp.corpus.size()) {
    throw IncompatibilityError("manifest " + manifest_path.string() +
                               " covers " + std::to_string(seen.size()) +
                               " of " + std::to_string(exp.corpus.size()) +
                               " corpus ids");
  }

  // Competence mode re-extracts the training set from the per-example
  // scores; load them from the score table the manifest was built from.
  std::map<int, double> competence_scores;
  if (cfg.schedule.mode == ScheduleMode::kCompetence) {
    const auto score_path =
        cfg.out_dir / ("scores_" + to_string(cfg.criterion) + ".tsv");
    if (!std::filesystem::exists(score_path)) {
      throw ConfigError("competence mode needs the score table at " +
                        score_path.string() + "; run the score stage first");
    }
    const DifficultyScoreTable table = read_score_table(score_path);
    competence_scores = table.cdf_applied ? table.scores
                                          : empirical_cdf(table.scores);
  }

  const TrainState vanilla = load_checkpoint(vanilla_checkpoint, exp.model_cfg);
  TrainState state = init_train_state(
      exp.model_cfg, cfg.seeds.cl,
      LrSchedule{cfg.train.peak_lr, cfg.train.warmup_steps});

  ClArtifacts artifacts;
  artifacts.checkpoint = cfg.out_dir / "cl.ckpt";
  artifacts.trace = cfg.out_dir / "cl_trace.csv";

  PhaseTrace trace = run_scheduled_training(
      exp, state, vanilla.params, partition,
      competence_scores.empty() ? nullptr : &competence_scores,
      artifacts.trace);
  artifacts.total_steps = trace.total_steps;
  artifacts.final_dev_bleu = exp.dev_bleu(state);
  {
    TraceEvent e;
    e.step = trace.total_steps;
    e.phase = partition.k;
    e.kind = TraceEventKind::kTrainStepSummary;
    e.dev_bleu = artifacts.final_dev_bleu;
    e.lr = state.current_lr();
    trace.events.push_back(e);
  }
  save_checkpoint(state, artifacts.checkpoint);
  write_trace_csv(trace, artifacts.trace, artifact_metadata(exp));
  return artifacts;
}

ClArtifacts continue_baseline(const Experiment& exp,
                              const std::filesystem::path& vanilla_checkpoint,
                              std::int64_t steps, const std::string& tag) {
  const auto& cfg = exp.cfg;
  TrainState state = load_checkpoint(vanilla_checkpoint, exp.model_cfg);
  PhaseTrace trace;
  TraceSink sink(trace);
  if (steps > 0) {
    BatchStream stream(
        exp.train_ids, exp.corpus, cfg.train.max_tokens_per_batch,
        mix_seed(mix_seed(cfg.seeds.data, kBaselineDataSalt), cfg.seeds.cl));
    run_plain_training(exp, state, stream, steps, sink);
  }
  trace.total_steps = state.step;

  ClArtifacts artifacts;
  artifacts.checkpoint = cfg.out_dir / (tag + ".ckpt");
  artifacts.trace = cfg.out_dir / (tag + "_trace.csv");
  artifacts.total_steps = state.step;
  artifacts.final_dev_bleu = exp.dev_bleu(state);
  {
    TraceEvent e;
    e.step = state.step;
    e.phase = 1;
    e.kind = TraceEventKind::kTrainStepSummary;
    e.train_set_size = static_cast<std::int64_t>(exp.train_ids.size());
    e.dev_bleu = artifacts.final_dev_bleu;
    e.lr = state.current_lr();
    trace.events.push_back(e);
  }
  save_checkpoint(state, artifacts.checkpoint);
  write_trace_csv(trace, artifacts.trace, artifact_metadata(exp));
  return artifacts;
}

std::vector<PartitionStatsRow> partition_stats(
    const DifficultyScoreTable& scores, const CurriculumPartition& partition) {
  std::vector<PartitionStatsRow> rows;
  for (std::size_t k = 0; k < partition.subsets.size(); ++k) {
    const auto& subset = partition.subsets[k];
    PartitionStatsRow row;
    row.subset = static_cast<int>(k + 1);
    row.size = subset.size();
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int id : subset) {
      const double bleu = -scores.scores.at(id);
      sum += bleu;
      lo = std::min(lo, bleu);
      hi = std::max(hi, bleu);
    }
    if (!subset.empty()) {
      row.min_bleu = lo;
      row.max_bleu = hi;
      row.mean_bleu = sum / static_cast<double>(subset.size());
    }
    rows.push_back(row);
  }
  return rows;
}

void write_partition_stats_csv(const std::vector<PartitionStatsRow>& rows,
                               const std::filesystem::path& path) {
  std::ostringstream out;
  out << "subset,size,min_bleu,max_bleu,mean_bleu\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "D_%d,%zu,%.2f,%.2f,%.2f\n", row.subset,
                  row.size, row.min_bleu, row.max_bleu, row.mean_bleu);
    out << buf;
  }
  write_text(path, out.str());
}

std::vector<HistogramBin> degree_histogram(const DifficultyScoreTable& scores,
                                           double bin_width) {
  if (bin_width <= 0.0) throw ConfigError("histogram bin width must be > 0");
  const int bins = std::max(1, static_cast<int>(std::ceil(100.0 / bin_width)));
  std::vector<HistogramBin> histogram(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    histogram[static_cast<std::size_t>(b)].lo = bin_width * b;
    histogram[static_cast<std::size_t>(b)].hi =
        std::min(100.0, bin_width * (b + 1));
  }
  for (const auto& [id, score] : scores.scores) {
    const double degree = -score;
    int b = static_cast<int>(std::floor(degree / bin_width));
    b = std::clamp(b, 0, bins - 1);
    ++histogram[static_cast<std::size_t>(b)].count;
  }
  return histogram;
}

ReportArtifacts cmd_report(const Experiment& exp,
                           const std::filesystem::path& score_path,
                           const std::filesystem::path& manifest_path,
                           const std::vector<std::filesystem::path>& traces) {
  const DifficultyScoreTable scores = read_score_table(score_path);
  const CurriculumPartition partition = read_partition_manifest(manifest_path);

  // Same id universe, both ways.
  std::set<int> score_ids;
  for (const auto& [id, s] : scores.scores) score_ids.insert(id);
  std::set<int> partition_ids;
  for (const auto& subset : partition.subsets) {
    partition_ids.insert(subset.begin(), subset.end());
  }
  if (score_ids != partition_ids) {
    std::vector<int> offending;
    std::set_symmetric_difference(score_ids.begin(), score_ids.end(),
                                  partition_ids.begin(), partition_ids.end(),
                                  std::back_inserter(offending));
    std::ostringstream msg;
    msg << "report inputs disagree on the id universe; offending ids:";
    for (std::size_t i = 0; i < offending.size() && i < 10; ++i) {
      msg << ' ' << offending[i];
    }
    if (offending.size() > 10) msg << " ... (" << offending.size() << " total)";
    throw IncompatibilityError(msg.str());
  }

  ReportArtifacts artifacts;
  artifacts.histogram = exp.cfg.out_dir / "histogram.csv";
  artifacts.subset_stats = exp.cfg.out_dir / "subset_stats.csv";
  artifacts.learning_curves = exp.cfg.out_dir / "learning_curves.csv";

  // Recovery-degree histogram plus the fraction below 10 BLEU.
  const auto histogram = degree_histogram(scores, exp.cfg.report.bin_width);
  std::size_t below = 0;
  for (const auto& [id, score] : scores.scores) {
    if (-score < 10.0) ++below;
  }
  artifacts.fraction_below_10 =
      static_cast<double>(below) / static_cast<double>(scores.scores.size());
  {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "#fraction_below_10=%.6f\n",
                  artifacts.fraction_below_10);
    out << "#config=" << hash_hex(exp.config_hash) << '\n' << buf;
    out << "bin_lo,bin_hi,count\n";
    for (const auto& bin : histogram) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%zu\n", bin.lo, bin.hi,
                    bin.count);
      out << buf;
    }
    write_text(artifacts.histogram, out.str());
  }

  artifacts.stats = partition_stats(scores, partition);
  write_partition_stats_csv(artifacts.stats, artifacts.subset_stats);

  // Merged learning curves for side-by-side plotting.
  {
    std::ostringstream out;
    out << "run,step,dev_bleu\n";
    char buf[128];
    for (const auto& trace_path : traces) {
      const PhaseTrace trace = read_trace_csv(trace_path);
      const std::string run = trace_path.stem().string();
      for (const auto& e : trace.events) {
        if (e.kind != TraceEventKind::kTrainStepSummary || !e.dev_bleu) {
          continue;
        }
        std::snprintf(buf, sizeof(buf), "%s,%lld,%.6f\n", run.c_str(),
                      static_cast<long long>(e.step), *e.dev_bleu);
        out << buf;
      }
    }
    write_text(artifacts.learning_curves, out.str());
  }
  return artifacts;
}

RunAllResult run_all(const ExperimentConfig& cfg) {
  const Experiment exp = prepare_experiment(cfg);
  RunAllResult result;
  result.vanilla = cmd_train_vanilla(exp);
  result.score_table = cmd_score(exp, result.vanilla.checkpoint);
  result.manifest = cmd_split(exp, result.score_table, cfg.schedule.k);
  result.cl = cmd_train_cl(exp, result.manifest, result.vanilla.checkpoint);
  result.baseline = continue_baseline(exp, result.vanilla.checkpoint,
                                      result.cl.total_steps, "baseline");
  result.report = cmd_report(
      exp, result.score_table, result.manifest,
      {result.vanilla.trace, result.cl.trace, result.baseline.trace});

  // Ground-truth enrichment for synthetic noisy corpora.
  const CurriculumPartition partition =
      read_partition_manifest(result.manifest);
  const auto& corrupted = exp.corpus.metadata.corrupted_ids;
  for (const auto& subset : partition.subsets) {
    if (subset.empty() || corrupted.empty()) {
      result.corrupted_fraction_by_subset.push_back(0.0);
      continue;
    }
    std::size_t hits = 0;
    for (int id : subset) {
      if (std::binary_search(corrupted.begin(), corrupted.end(), id)) ++hits;
    }
    result.corrupted_fraction_by_subset.push_back(
        static_cast<double>(hits) / static_cast<double>(subset.size()));
  }

  nlohmann::ordered_json summary;
  summary["config_hash"] = hash_hex(exp.config_hash);
  summary["criterion"] = to_string(cfg.criterion);
  summary["corpus_size"] = exp.corpus.size();
  summary["train_size"] = exp.train_ids.size();
  summary["dev_size"] = exp.dev_ids.size();
  summary["vanilla_steps"] = cfg.train.vanilla_steps;
  summary["vanilla_dev_bleu"] = result.vanilla.final_dev_bleu;
  summary["cl_total_steps"] = result.cl.total_steps;
  summary["cl_dev_bleu"] = result.cl.final_dev_bleu;
  summary["baseline_dev_bleu"] = result.baseline.final_dev_bleu;
  summary["fraction_below_10"] = result.report.fraction_below_10;
  {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : result.report.stats) {
      rows.push_back({{"subset", row.subset},
                      {"size", row.size},
                      {"min_bleu", row.min_bleu},
                      {"max_bleu", row.max_bleu},
                      {"mean_bleu", row.mean_bleu}});
    }
    summary["subset_stats"] = std::move(rows);
  }
  summary["corrupted_fraction_by_subset"] =
      result.corrupted_fraction_by_subset;
  result.summary = cfg.out_dir / "summary.json";
  write_text(result.summary, summary.dump(2) + "\n");
  return result;
}

}  // namespace seqcl
