// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seqcl/errors.hpp"
#include "seqcl/hash.hpp"

namespace seqcl {

using nlohmann::json;

Criterion criterion_from_string(const std::string& name) {
  if (name == "recovery") return Criterion::kRecovery;
  if (name == "length") return Criterion::kLength;
  if (name == "rarity") return Criterion::kRarity;
  if (name == "lm") return Criterion::kLm;
  if (name == "embed-norm") return Criterion::kEmbedNorm;
  if (name == "loss-decline") return Criterion::kLossDecline;
  throw ConfigError("unknown criterion: '" + name + "'");
}

std::string to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::kRecovery:
      return "recovery";
    case Criterion::kLength:
      return "length";
    case Criterion::kRarity:
      return "rarity";
    case Criterion::kLm:
      return "lm";
    case Criterion::kEmbedNorm:
      return "embed-norm";
    case Criterion::kLossDecline:
      return "loss-decline";
  }
  return "unknown";
}

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& scope) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown config key '" + scope + key + "'");
    }
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out,
                const std::string& scope) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + scope + key + "': " + e.what());
  }
}

SyntheticTask task_from_string(const std::string& name) {
  if (name == "substitution-cipher") return SyntheticTask::kSubstitutionCipher;
  if (name == "reversal-cipher") return SyntheticTask::kReversalCipher;
  if (name == "noisy-cipher") return SyntheticTask::kNoisyCipher;
  throw ConfigError("unknown synthetic task: '" + name + "'");
}

std::string task_to_string(SyntheticTask task) {
  switch (task) {
    case SyntheticTask::kSubstitutionCipher:
      return "substitution-cipher";
    case SyntheticTask::kReversalCipher:
      return "reversal-cipher";
    case SyntheticTask::kNoisyCipher:
      return "noisy-cipher";
  }
  return "unknown";
}

ScheduleMode mode_from_string(const std::string& name) {
  if (name == "fixed") return ScheduleMode::kFixed;
  if (name == "dynamic") return ScheduleMode::kDynamic;
  if (name == "competence") return ScheduleMode::kCompetence;
  throw ConfigError("unknown schedule mode: '" + name + "'");
}

std::string mode_to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kFixed:
      return "fixed";
    case ScheduleMode::kDynamic:
      return "dynamic";
    case ScheduleMode::kCompetence:
      return "competence";
  }
  return "unknown";
}

void parse_corpus(const json& obj, ExperimentConfig::Corpus& out) {
  require_keys(obj, {"synthetic", "files", "tokenize", "min_freq"}, "corpus.");
  if (obj.contains("synthetic") && obj.contains("files")) {
    throw ConfigError("corpus: give either 'synthetic' or 'files', not both");
  }
  if (obj.contains("synthetic")) {
    const auto& syn = obj.at("synthetic");
    require_keys(syn,
                 {"task", "n", "vocab_size", "min_len", "max_len",
                  "corrupt_fraction", "rho"},
                 "corpus.synthetic.");
    out.synthetic = true;
    std::string task = task_to_string(out.task.task);
    read_field(syn, "task", task, "corpus.synthetic.");
    out.task.task = task_from_string(task);
    read_field(syn, "n", out.n, "corpus.synthetic.");
    read_field(syn, "vocab_size", out.task.vocab_size, "corpus.synthetic.");
    read_field(syn, "min_len", out.task.min_len, "corpus.synthetic.");
    read_field(syn, "max_len", out.task.max_len, "corpus.synthetic.");
    read_field(syn, "corrupt_fraction", out.task.corrupt_fraction,
               "corpus.synthetic.");
    read_field(syn, "rho", out.task.rho, "corpus.synthetic.");
  }
  if (obj.contains("files")) {
    const auto& files = obj.at("files");
    require_keys(files, {"src", "tgt"}, "corpus.files.");
    out.synthetic = false;
    std::string src, tgt;
    read_field(files, "src", src, "corpus.files.");
    read_field(files, "tgt", tgt, "corpus.files.");
    if (src.empty() || tgt.empty()) {
      throw ConfigError("corpus.files: both 'src' and 'tgt' are required");
    }
    out.src_file = src;
    out.tgt_file = tgt;
  }
  if (obj.contains("tokenize")) {
    const auto name = obj.at("tokenize").get<std::string>();
    if (name == "whitespace") {
      out.tokenize = TokenizeMode::kWhitespace;
    } else if (name == "character") {
      out.tokenize = TokenizeMode::kCharacter;
    } else {
      throw ConfigError("corpus.tokenize must be 'whitespace' or 'character'");
    }
  }
  read_field(obj, "min_freq", out.min_freq, "corpus.");
}

void parse_schedule(const json& obj, ScheduleConfig& out) {
  require_keys(obj,
               {"mode", "regimen", "k", "steps_per_phase", "phase_steps",
                "total_steps", "warmup_steps_before_check", "check_interval",
                "consecutive_successes_required", "subsample_size",
                "subsample_seed", "competence"},
               "schedule.");
  std::string mode = mode_to_string(out.mode);
  read_field(obj, "mode", mode, "schedule.");
  out.mode = mode_from_string(mode);
  if (obj.contains("regimen")) {
    const auto name = obj.at("regimen").get<std::string>();
    if (name == "baby-steps") {
      out.regimen = Regimen::kBabySteps;
    } else if (name == "one-pass") {
      out.regimen = Regimen::kOnePass;
    } else {
      throw ConfigError("schedule.regimen must be 'baby-steps' or 'one-pass'");
    }
  }
  read_field(obj, "k", out.k, "schedule.");
  read_field(obj, "steps_per_phase", out.steps_per_phase, "schedule.");
  read_field(obj, "phase_steps", out.phase_steps, "schedule.");
  if (obj.contains("total_steps")) {
    // Shaped split of a total budget: 10%/10%/10%/70%, the K=4 default.
    if (!out.phase_steps.empty() || obj.contains("steps_per_phase")) {
      throw ConfigError(
          "schedule: 'total_steps' conflicts with per-phase budgets");
    }
    if (out.k != 4) {
      throw ConfigError("schedule.total_steps requires k = 4");
    }
    std::int64_t total = 0;
    read_field(obj, "total_steps", total, "schedule.");
    if (total < 10) throw ConfigError("schedule.total_steps too small");
    const std::int64_t early = total / 10;
    out.phase_steps = {early, early, early, total - 3 * early};
  }
  read_field(obj, "warmup_steps_before_check", out.warmup_steps_before_check,
             "schedule.");
  read_field(obj, "check_interval", out.check_interval, "schedule.");
  if (obj.contains("consecutive_successes_required")) {
    const auto& v = obj.at("consecutive_successes_required");
    if (v.is_string() && v.get<std::string>() == "inf") {
      out.consecutive_successes_required = ScheduleConfig::kNeverAdvance;
    } else {
      read_field(obj, "consecutive_successes_required",
                 out.consecutive_successes_required, "schedule.");
    }
  }
  read_field(obj, "subsample_size", out.subsample_size, "schedule.");
  read_field(obj, "subsample_seed", out.subsample_seed, "schedule.");
  if (obj.contains("competence")) {
    const auto& comp = obj.at("competence");
    require_keys(comp, {"c0", "p", "total_steps"}, "schedule.competence.");
    read_field(comp, "c0", out.c0, "schedule.competence.");
    read_field(comp, "p", out.p, "schedule.competence.");
    read_field(comp, "total_steps", out.competence_total_steps,
               "schedule.competence.");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (corpus.synthetic) {
    if (corpus.n < 1) throw ConfigError("corpus.synthetic.n must be >= 1");
  } else if (corpus.src_file.empty() || corpus.tgt_file.empty()) {
    throw ConfigError("corpus: file mode needs both src and tgt paths");
  }
  if (corpus.min_freq < 1) throw ConfigError("corpus.min_freq must be >= 1");
  if (model.embed_dim < 1 || model.hidden_dim < 1) {
    throw ConfigError("model dims must be >= 1");
  }
  if (model.dropout < 0.0 || model.dropout >= 1.0) {
    throw ConfigError("model.dropout must lie in [0, 1)");
  }
  if (model.label_smoothing < 0.0 || model.label_smoothing >= 1.0) {
    throw ConfigError("model.label_smoothing must lie in [0, 1)");
  }
  if (train.vanilla_steps < 0) {
    throw ConfigError("train.vanilla_steps must be >= 0");
  }
  if (train.max_tokens_per_batch < 1) {
    throw ConfigError("train.max_tokens_per_batch must be >= 1");
  }
  if (train.peak_lr <= 0.0) throw ConfigError("train.peak_lr must be > 0");
  if (train.warmup_steps < 1) {
    throw ConfigError("train.warmup_steps must be >= 1");
  }
  if (train.log_every < 1 || train.eval_every < 1) {
    throw ConfigError("train.log_every and eval_every must be >= 1");
  }
  if (train.dev_fraction < 0.0 || train.dev_fraction >= 1.0) {
    throw ConfigError("train.dev_fraction must lie in [0, 1)");
  }
  if (schedule.k < 1) throw ConfigError("schedule.k must be >= 1");
  if (schedule.steps_per_phase < 1) {
    throw ConfigError("schedule.steps_per_phase must be >= 1");
  }
  if (!schedule.phase_steps.empty() &&
      schedule.phase_steps.size() != static_cast<std::size_t>(schedule.k)) {
    throw ConfigError("schedule.phase_steps must list one budget per phase");
  }
  if (schedule.c0 < 0.0 || schedule.c0 >= 1.0) {
    throw ConfigError("schedule.competence.c0 must lie in [0, 1)");
  }
  if (schedule.p < 1.0) {
    throw ConfigError("schedule.competence.p must be >= 1");
  }
  if (lm_order < 1 || lm_order > 3) {
    throw ConfigError("lm_order must lie in 1..3");
  }
  if (report.bin_width <= 0.0) {
    throw ConfigError("report.bin_width must be > 0");
  }
}

std::string ExperimentConfig::canonical_string() const {
  std::ostringstream out;
  out.precision(17);
  out << "corpus{";
  if (corpus.synthetic) {
    out << "synthetic:" << static_cast<int>(corpus.task.task) << ','
        << corpus.n << ',' << corpus.task.vocab_size << ','
        << corpus.task.min_len << ',' << corpus.task.max_len << ','
        << corpus.task.corrupt_fraction << ',' << corpus.task.rho;
  } else {
    out << "files:" << corpus.src_file.string() << ','
        << corpus.tgt_file.string();
  }
  out << ";tok=" << static_cast<int>(corpus.tokenize)
      << ";min_freq=" << corpus.min_freq << "}";
  out << "model{" << model.embed_dim << ',' << model.hidden_dim << ','
      << model.dropout << ',' << model.label_smoothing << ','
      << model.max_decode_len << "}";
  out << "train{" << train.vanilla_steps << ',' << train.max_tokens_per_batch
      << ',' << train.peak_lr << ',' << train.warmup_steps << ','
      << train.log_every << ',' << train.eval_every << ','
      << train.dev_fraction << "}";
  out << "schedule{" << static_cast<int>(schedule.mode) << ','
      << static_cast<int>(schedule.regimen) << ',' << schedule.k << ','
      << schedule.steps_per_phase << ",[";
  for (auto s : schedule.phase_steps) out << s << ' ';
  out << "]," << schedule.warmup_steps_before_check << ','
      << schedule.check_interval << ','
      << schedule.consecutive_successes_required << ','
      << schedule.subsample_size << ',' << schedule.subsample_seed << ','
      << schedule.c0 << ',' << schedule.p << ','
      << schedule.competence_total_steps << "}";
  out << "criterion=" << to_string(criterion) << ";lm_order=" << lm_order
      << ";bin_width=" << report.bin_width;
  out << ";seeds{" << seeds.data << ',' << seeds.vanilla << ',' << seeds.cl
      << "}";
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  return fnv1a64(canonical_string());
}

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("config " + origin + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config " + origin + ": top level must be an object");
  }
  require_keys(doc,
               {"corpus", "model", "train", "schedule", "criterion",
                "lm_order", "report", "seeds", "out_dir"},
               "");
  ExperimentConfig cfg;
  if (doc.contains("corpus")) parse_corpus(doc.at("corpus"), cfg.corpus);
  if (doc.contains("model")) {
    const auto& m = doc.at("model");
    require_keys(m,
                 {"embed_dim", "hidden_dim", "dropout", "label_smoothing",
                  "max_decode_len"},
                 "model.");
    read_field(m, "embed_dim", cfg.model.embed_dim, "model.");
    read_field(m, "hidden_dim", cfg.model.hidden_dim, "model.");
    read_field(m, "dropout", cfg.model.dropout, "model.");
    read_field(m, "label_smoothing", cfg.model.label_smoothing, "model.");
    read_field(m, "max_decode_len", cfg.model.max_decode_len, "model.");
  }
  if (doc.contains("train")) {
    const auto& t = doc.at("train");
    require_keys(t,
                 {"vanilla_steps", "max_tokens_per_batch", "peak_lr",
                  "warmup_steps", "log_every", "eval_every", "dev_fraction"},
                 "train.");
    read_field(t, "vanilla_steps", cfg.train.vanilla_steps, "train.");
    read_field(t, "max_tokens_per_batch", cfg.train.max_tokens_per_batch,
               "train.");
    read_field(t, "peak_lr", cfg.train.peak_lr, "train.");
    read_field(t, "warmup_steps", cfg.train.warmup_steps, "train.");
    read_field(t, "log_every", cfg.train.log_every, "train.");
    read_field(t, "eval_every", cfg.train.eval_every, "train.");
    read_field(t, "dev_fraction", cfg.train.dev_fraction, "train.");
  }
  if (doc.contains("schedule")) parse_schedule(doc.at("schedule"), cfg.schedule);
  if (doc.contains("criterion")) {
    cfg.criterion = criterion_from_string(doc.at("criterion").get<std::string>());
  }
  read_field(doc, "lm_order", cfg.lm_order, "");
  if (doc.contains("report")) {
    const auto& r = doc.at("report");
    require_keys(r, {"bin_width"}, "report.");
    read_field(r, "bin_width", cfg.report.bin_width, "report.");
  }
  if (doc.contains("seeds")) {
    const auto& s = doc.at("seeds");
    require_keys(s, {"data", "vanilla", "cl"}, "seeds.");
    read_field(s, "data", cfg.seeds.data, "seeds.");
    read_field(s, "vanilla", cfg.seeds.vanilla, "seeds.");
    read_field(s, "cl", cfg.seeds.cl, "seeds.");
  }
  if (doc.contains("out_dir")) {
    cfg.out_dir = doc.at("out_dir").get<std::string>();
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path.string());
}

}  // namespace seqcl
