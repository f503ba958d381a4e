// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seqcl/bleu.hpp"
#include "seqcl/errors.hpp"
#include "seqcl/rng.hpp"

namespace seqcl {

std::size_t CurriculumPartition::total_ids() const {
  std::size_t total = 0;
  for (const auto& subset : subsets) total += subset.size();
  return total;
}

std::string to_string(TraceEventKind kind) {
  switch (kind) {
    case TraceEventKind::kPhaseStart:
      return "phase-start";
    case TraceEventKind::kRecoveryCheck:
      return "recovery-check";
    case TraceEventKind::kPhaseAdvance:
      return "phase-advance";
    case TraceEventKind::kTrainStepSummary:
      return "train-step-summary";
  }
  return "unknown";
}

std::vector<TraceEvent> PhaseTrace::events_of(TraceEventKind kind) const {
  std::vector<TraceEvent> out;
  for (const auto& e : events) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

void TraceSink::train_step_summary(std::int64_t global_step, int phase,
                                   std::int64_t train_set_size,
                                   std::optional<double> dev_bleu,
                                   std::optional<double> lr) {
  TraceEvent e;
  e.step = global_step;
  e.phase = phase;
  e.kind = TraceEventKind::kTrainStepSummary;
  e.train_set_size = train_set_size;
  e.dev_bleu = dev_bleu;
  e.lr = lr;
  trace_.events.push_back(e);
}

CurriculumPartition split_corpus(const DifficultyScoreTable& scores, int k) {
  const auto n = static_cast<int>(scores.scores.size());
  if (k < 1 || k > n) {
    throw std::invalid_argument("split_corpus: K must lie in [1, N]; K=" +
                                std::to_string(k) + ", N=" + std::to_string(n));
  }
  std::vector<std::pair<int, double>> order(scores.scores.begin(),
                                            scores.scores.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second < b.second;
                     return a.first < b.first;
                   });
  CurriculumPartition partition;
  partition.k = k;
  partition.criterion = scores.criterion;
  const int base = n / k;
  const int extra = n % k;
  std::size_t cursor = 0;
  for (int block = 0; block < k; ++block) {
    const int size = base + (block < extra ? 1 : 0);
    std::vector<int> subset;
    subset.reserve(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) subset.push_back(order[cursor++].first);
    partition.subsets.push_back(std::move(subset));
  }
  return partition;
}

double competence(std::int64_t t, const ScheduleConfig& cfg) {
  const std::int64_t total = cfg.competence_total_steps > 0
                                 ? cfg.competence_total_steps
                                 : (cfg.k - 1) * cfg.steps_per_phase;
  const double c0p = std::pow(cfg.c0, cfg.p);
  if (total <= 0) return 1.0;
  const double inner =
      static_cast<double>(t) * (1.0 - c0p) / static_cast<double>(total) + c0p;
  return std::min(1.0, std::pow(inner, 1.0 / cfg.p));
}

std::vector<int> competence_training_set(const DifficultyScoreTable& scores_01,
                                         std::int64_t t,
                                         const ScheduleConfig& cfg) {
  const double c = competence(t, cfg);
  std::vector<int> ids;
  int easiest_id = -1;
  double easiest_score = std::numeric_limits<double>::infinity();
  for (const auto& [id, score] : scores_01.scores) {
    if (score < 0.0 || score > 1.0) {
      throw std::invalid_argument(
          "competence_training_set: score outside [0,1] for id " +
          std::to_string(id) + " (not CDF-normalized?)");
    }
    if (score <= c) ids.push_back(id);
    if (score < easiest_score) {
      easiest_score = score;
      easiest_id = id;
    }
  }
  if (ids.empty() && easiest_id >= 0) ids.push_back(easiest_id);
  return ids;
}

std::vector<int> subsample(const std::vector<int>& subset, std::int64_t size,
                           std::uint64_t seed) {
  if (subset.empty()) {
    throw std::invalid_argument("subsample: empty subset");
  }
  if (size < 1) {
    throw std::invalid_argument("subsample: size must be >= 1");
  }
  std::vector<int> ids = subset;
  Rng rng(seed);
  rng_shuffle(rng, ids);
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(size),
                                          ids.size());
  ids.resize(keep);
  return ids;
}

double model_recovery(const ExampleDecoder& decoder,
                      const std::vector<const Example*>& sample) {
  if (sample.empty()) {
    throw std::invalid_argument("model_recovery: empty sample");
  }
  std::vector<std::pair<TokenSeq, TokenSeq>> pairs;
  pairs.reserve(sample.size());
  for (const Example* ex : sample) {
    try {
      pairs.emplace_back(decoder(*ex), ex->tgt_tokens);
    } catch (const std::exception& e) {
      throw std::runtime_error("model_recovery: decoder failed on id " +
                               std::to_string(ex->id) + ": " + e.what());
    }
  }
  return corpus_bleu(pairs).value;
}

double model_recovery(const ExampleDecoder& decoder,
                      const ParallelCorpus& corpus,
                      const std::vector<int>& ids) {
  std::vector<const Example*> sample;
  sample.reserve(ids.size());
  for (int id : ids) sample.push_back(&corpus.at(id));
  return model_recovery(decoder, sample);
}

namespace {

TraceEvent make_event(std::int64_t step, int phase, TraceEventKind kind) {
  TraceEvent e;
  e.step = step;
  e.phase = phase;
  e.kind = kind;
  return e;
}

void validate(const CurriculumPartition& partition, const ScheduleConfig& cfg,
              const TrainerHooks& hooks,
              const std::map<int, double>* competence_scores) {
  if (!hooks.train_steps) {
    throw ConfigError("run_schedule: train_steps hook is required");
  }
  if (cfg.mode == ScheduleMode::kCompetence) {
    if (competence_scores == nullptr || competence_scores->empty()) {
      throw ConfigError(
          "run_schedule: competence mode needs CDF-normalized scores");
    }
  } else if (partition.k < 1 ||
             partition.subsets.size() != static_cast<std::size_t>(partition.k)) {
    throw ConfigError("run_schedule: malformed partition");
  }
  if (cfg.mode == ScheduleMode::kDynamic) {
    if (!hooks.cl_decode || !hooks.vanilla_decode) {
      throw ConfigError("run_schedule: dynamic mode needs both decoders");
    }
    if (cfg.warmup_steps_before_check < 0 || cfg.check_interval < 1 ||
        cfg.subsample_size < 1 || cfg.consecutive_successes_required < 1) {
      throw ConfigError("run_schedule: invalid dynamic scheduling knobs");
    }
  }
  if (cfg.k < 1) throw ConfigError("run_schedule: K must be positive");
  if (!cfg.phase_steps.empty() &&
      cfg.phase_steps.size() != static_cast<std::size_t>(cfg.k)) {
    throw ConfigError("run_schedule: phase_steps must list one budget per phase");
  }
  for (int phase = 0; phase < cfg.k; ++phase) {
    if (cfg.phase_budget(phase) < 1) {
      throw ConfigError("run_schedule: phase budgets must be positive");
    }
  }
}

}  // namespace

PhaseTrace run_schedule(const ParallelCorpus& corpus,
                        const CurriculumPartition& partition,
                        const ScheduleConfig& cfg, const TrainerHooks& hooks,
                        const std::map<int, double>* competence_scores,
                        const std::filesystem::path* abort_trace_path) {
  validate(partition, cfg, hooks, competence_scores);

  PhaseTrace trace;
  TraceSink sink(trace);
  std::int64_t global_step = 0;
  std::vector<int> train_ids;

  const int num_phases = cfg.mode == ScheduleMode::kCompetence
                             ? cfg.k
                             : partition.k;
  try {
    for (int phase = 1; phase <= num_phases; ++phase) {
      const auto phase_budget = cfg.phase_budget(phase - 1);

      // Assemble this phase's training set.
      if (cfg.mode == ScheduleMode::kCompetence) {
        DifficultyScoreTable wrapped;
        wrapped.scores = *competence_scores;
        train_ids = competence_training_set(wrapped, global_step, cfg);
      } else {
        const auto& subset =
            partition.subsets[static_cast<std::size_t>(phase - 1)];
        if (cfg.regimen == Regimen::kBabySteps) {
          train_ids.insert(train_ids.end(), subset.begin(), subset.end());
        } else {
          train_ids = subset;
        }
      }

      if (hooks.warmup_restart) hooks.warmup_restart();
      {
        TraceEvent e = make_event(global_step, phase, TraceEventKind::kPhaseStart);
        e.train_set_size = static_cast<std::int64_t>(train_ids.size());
        trace.events.push_back(e);
      }

      const bool dynamic_checks =
          cfg.mode == ScheduleMode::kDynamic &&
          cfg.consecutive_successes_required != ScheduleConfig::kNeverAdvance;

      if (!dynamic_checks) {
        hooks.train_steps(train_ids, phase_budget, phase, sink);
        global_step += phase_budget;
      } else {
        const auto& subset =
            partition.subsets[static_cast<std::size_t>(phase - 1)];
        const auto sample_ids =
            subsample(subset, cfg.subsample_size,
                      mix_seed(cfg.subsample_seed,
                               static_cast<std::uint64_t>(phase)));
        // The vanilla model is frozen, so o_v is computed once per phase.
        const double o_v =
            model_recovery(hooks.vanilla_decode, corpus, sample_ids);

        std::int64_t in_phase = 0;
        std::int64_t consecutive = 0;
        while (in_phase < phase_budget) {
          const std::int64_t next_check =
              in_phase < cfg.warmup_steps_before_check
                  ? cfg.warmup_steps_before_check
                  : in_phase + cfg.check_interval;
          const std::int64_t chunk =
              std::min(next_check, phase_budget) - in_phase;
          hooks.train_steps(train_ids, chunk, phase, sink);
          in_phase += chunk;
          global_step += chunk;
          if (in_phase >= phase_budget) break;  // budget reached; advance

          const double o_c =
              model_recovery(hooks.cl_decode, corpus, sample_ids);
          TraceEvent e =
              make_event(global_step, phase, TraceEventKind::kRecoveryCheck);
          e.train_set_size = static_cast<std::int64_t>(train_ids.size());
          e.o_c = o_c;
          e.o_v = o_v;
          trace.events.push_back(e);
          consecutive = o_c > o_v ? consecutive + 1 : 0;
          if (consecutive >= cfg.consecutive_successes_required) break;
        }
      }

      if (phase < num_phases) {
        TraceEvent e =
            make_event(global_step, phase, TraceEventKind::kPhaseAdvance);
        e.train_set_size = static_cast<std::int64_t>(train_ids.size());
        trace.events.push_back(e);
      }
    }
  } catch (...) {
    trace.total_steps = global_step;
    if (abort_trace_path != nullptr) {
      try {
        write_trace_csv(trace, *abort_trace_path);
      } catch (...) {
        // Keep the original failure.
      }
    }
    throw;
  }
  trace.total_steps = global_step;
  return trace;
}

namespace {

std::string format_opt(const std::optional<double>& v) {
  if (!v) return "";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

std::string format_opt(const std::optional<std::int64_t>& v) {
  return v ? std::to_string(*v) : "";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_trace_csv(const PhaseTrace& trace, const std::filesystem::path& path,
                     const std::map<std::string, std::string>& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write trace: " + path.string());
  for (const auto& [key, value] : metadata) {
    out << '#' << key << '=' << value << '\n';
  }
  out << "step,phase,event,train_set_size,o_c,o_v,dev_bleu,lr\n";
  for (const auto& e : trace.events) {
    out << e.step << ',' << e.phase << ',' << to_string(e.kind) << ','
        << format_opt(e.train_set_size) << ',' << format_opt(e.o_c) << ','
        << format_opt(e.o_v) << ',' << format_opt(e.dev_bleu) << ','
        << format_opt(e.lr) << '\n';
  }
  out << "#total_steps=" << trace.total_steps << '\n';
  if (!out) throw IoError("write failure on trace: " + path.string());
}

PhaseTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace: " + path.string());
  PhaseTrace trace;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && line.substr(1, eq - 1) == "total_steps") {
        trace.total_steps = std::stoll(line.substr(eq + 1));
      }
      continue;
    }
    if (!saw_header) {
      saw_header = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 8) {
      throw ParseError("trace " + path.string() + " line " +
                       std::to_string(line_no) + ": expected 8 fields");
    }
    TraceEvent e;
    e.step = std::stoll(fields[0]);
    e.phase = std::stoi(fields[1]);
    if (fields[2] == "phase-start") {
      e.kind = TraceEventKind::kPhaseStart;
    } else if (fields[2] == "recovery-check") {
      e.kind = TraceEventKind::kRecoveryCheck;
    } else if (fields[2] == "phase-advance") {
      e.kind = TraceEventKind::kPhaseAdvance;
    } else if (fields[2] == "train-step-summary") {
      e.kind = TraceEventKind::kTrainStepSummary;
    } else {
      throw ParseError("trace " + path.string() + " line " +
                       std::to_string(line_no) + ": unknown event kind '" +
                       fields[2] + "'");
    }
    if (!fields[3].empty()) e.train_set_size = std::stoll(fields[3]);
    if (!fields[4].empty()) e.o_c = std::stod(fields[4]);
    if (!fields[5].empty()) e.o_v = std::stod(fields[5]);
    if (!fields[6].empty()) e.dev_bleu = std::stod(fields[6]);
    if (!fields[7].empty()) e.lr = std::stod(fields[7]);
    trace.events.push_back(e);
  }
  return trace;
}

void write_partition_manifest(const CurriculumPartition& partition,
                              const std::filesystem::path& path,
                              const std::map<std::string, std::string>& extra) {
  nlohmann::ordered_json doc;
  doc["criterion"] = partition.criterion;
  doc["K"] = partition.k;
  auto subsets = nlohmann::ordered_json::array();
  for (const auto& subset : partition.subsets) {
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    subsets.push_back(sorted);
  }
  doc["subsets"] = std::move(subsets);
  for (const auto& [key, value] : extra) doc[key] = value;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failure on manifest: " + path.string());
}

CurriculumPartition read_partition_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }
  CurriculumPartition partition;
  try {
    partition.criterion = doc.at("criterion").get<std::string>();
    partition.k = doc.at("K").get<int>();
    for (const auto& subset : doc.at("subsets")) {
      partition.subsets.push_back(subset.get<std::vector<int>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }
  if (partition.subsets.size() != static_cast<std::size_t>(partition.k)) {
    throw ParseError("manifest " + path.string() +
                     ": K does not match subset count");
  }
  return partition;
}

}  // namespace seqcl
