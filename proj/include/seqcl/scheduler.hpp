// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqcl/corpus.hpp"
#include "seqcl/difficulty.hpp"

namespace seqcl {

// Ordered, mutually exclusive difficulty subsets D_1..D_K. Subsets keep
// ascending-difficulty order internally; the manifest serializes each
// subset with ids ascending for canonical form.
struct CurriculumPartition {
  int k = 0;
  std::vector<std::vector<int>> subsets;
  std::string criterion;

  std::size_t total_ids() const;
};

enum class ScheduleMode { kFixed, kDynamic, kCompetence };
enum class Regimen { kBabySteps, kOnePass };

struct ScheduleConfig {
  ScheduleMode mode = ScheduleMode::kFixed;
  Regimen regimen = Regimen::kBabySteps;
  int k = 4;
  // Max steps per phase; fixed mode may override per phase.
  std::int64_t steps_per_phase = 500;
  std::vector<std::int64_t> phase_steps;  // optional, size k when set

  // Dynamic mode. With consecutive_successes_required set to kNeverAdvance
  // the recovery checks are skipped entirely and the run is step-for-step
  // identical to fixed scheduling.
  static constexpr std::int64_t kNeverAdvance =
      std::numeric_limits<std::int64_t>::max();
  std::int64_t warmup_steps_before_check = 200;
  std::int64_t check_interval = 100;
  std::int64_t consecutive_successes_required = 2;
  std::int64_t subsample_size = 500;
  std::uint64_t subsample_seed = 0;

  // Competence mode.
  double c0 = 0.01;
  double p = 2.0;
  // Step at which competence reaches 1; 0 means (k-1) * steps_per_phase so
  // the final phase trains on the full corpus.
  std::int64_t competence_total_steps = 0;

  std::int64_t phase_budget(int phase_index) const {
    if (!phase_steps.empty()) {
      return phase_steps.at(static_cast<std::size_t>(phase_index));
    }
    return steps_per_phase;
  }
};

enum class TraceEventKind {
  kPhaseStart,
  kRecoveryCheck,
  kPhaseAdvance,
  kTrainStepSummary
};

std::string to_string(TraceEventKind kind);

struct TraceEvent {
  std::int64_t step = 0;
  int phase = 0;  // 1-based
  TraceEventKind kind = TraceEventKind::kPhaseStart;
  std::optional<std::int64_t> train_set_size;
  std::optional<double> o_c;
  std::optional<double> o_v;
  std::optional<double> dev_bleu;
  std::optional<double> lr;
};

struct PhaseTrace {
  std::vector<TraceEvent> events;
  std::int64_t total_steps = 0;

  std::vector<TraceEvent> events_of(TraceEventKind kind) const;
};

// Lets trainer callbacks append train-step-summary events at their own
// cadence while the scheduler owns phase bookkeeping.
class TraceSink {
 public:
  explicit TraceSink(PhaseTrace& trace) : trace_(trace) {}
  void train_step_summary(std::int64_t global_step, int phase,
                          std::int64_t train_set_size,
                          std::optional<double> dev_bleu,
                          std::optional<double> lr);

 private:
  PhaseTrace& trace_;
};

// Greedy decoder over a frozen model; serves both o_c and o_v.
using ExampleDecoder = std::function<TokenSeq(const Example&)>;

struct TrainerHooks {
  // Run n optimizer steps over the given train set. The sink may receive
  // train-step-summary events; `phase` is the 1-based phase index.
  std::function<void(const std::vector<int>& train_ids, std::int64_t n,
                     int phase, TraceSink& sink)>
      train_steps;
  // Restart the learning-rate warm-up; invoked at every phase boundary.
  std::function<void()> warmup_restart;
  ExampleDecoder cl_decode;       // current CL model (dynamic mode)
  ExampleDecoder vanilla_decode;  // frozen vanilla model (dynamic mode)
};

// Stable-sorts ids by (score ascending, id ascending) and chunks them into
// K contiguous blocks; the first N mod K blocks take the extra id.
// Throws std::invalid_argument unless 1 <= K <= N.
CurriculumPartition split_corpus(const DifficultyScoreTable& scores, int k);

// c(t) = min(1, (t*(1-c0^p)/T + c0^p)^(1/p)).
double competence(std::int64_t t, const ScheduleConfig& cfg);

// All ids whose CDF-normalized difficulty is <= c(t); falls back to the
// single easiest id (lowest id among ties) rather than returning empty.
// Throws std::invalid_argument if any score lies outside [0, 1].
std::vector<int> competence_training_set(const DifficultyScoreTable& scores_01,
                                         std::int64_t t,
                                         const ScheduleConfig& cfg);

// min(size, |subset|) ids drawn without replacement, deterministic in seed.
std::vector<int> subsample(const std::vector<int>& subset, std::int64_t size,
                           std::uint64_t seed);

// Corpus-level BLEU of the decoder's greedy outputs against the sample's
// references (Eq. o_c / o_v).
double model_recovery(const ExampleDecoder& decoder,
                      const std::vector<const Example*>& sample);
double model_recovery(const ExampleDecoder& decoder,
                      const ParallelCorpus& corpus,
                      const std::vector<int>& ids);

// Drives K training phases under the configured mode and regimen.
// Fixed: every phase runs its full budget. Dynamic: a phase ends early once
// o_c > o_v holds for consecutive_successes_required consecutive checks on
// the fixed subsample of the newly merged subset, else at the budget.
// Competence mode re-extracts the training set from `competence_scores`
// (CDF-normalized; required for that mode) at each phase start.
// On a callback failure the partial trace is flushed to `abort_trace_path`
// (when given) before the exception propagates.
PhaseTrace run_schedule(const ParallelCorpus& corpus,
                        const CurriculumPartition& partition,
                        const ScheduleConfig& cfg, const TrainerHooks& hooks,
                        const std::map<int, double>* competence_scores = nullptr,
                        const std::filesystem::path* abort_trace_path = nullptr);

// Trace file: CSV with header step,phase,event,train_set_size,o_c,o_v,
// dev_bleu,lr; empty fields for non-applicable columns. Lines starting
// with '#' before the header carry audit metadata.
void write_trace_csv(const PhaseTrace& trace, const std::filesystem::path& path,
                     const std::map<std::string, std::string>& metadata = {});
PhaseTrace read_trace_csv(const std::filesystem::path& path);

// Partition manifest JSON: {"criterion": str, "K": int, "subsets": [[ids]]},
// ids ascending within each subset. Extra keys carry audit hashes.
void write_partition_manifest(const CurriculumPartition& partition,
                              const std::filesystem::path& path,
                              const std::map<std::string, std::string>& extra = {});
CurriculumPartition read_partition_manifest(const std::filesystem::path& path);

}  // namespace seqcl
