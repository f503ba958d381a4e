// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/difficulty.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "seqcl/bleu.hpp"
#include "seqcl/errors.hpp"

namespace seqcl {

DifficultyScoreTable recovery_difficulty(const ParallelCorpus& corpus,
                                         const Predictor& predictor) {
  DifficultyScoreTable table;
  table.criterion = "recovery";
  table.cdf_applied = false;
  for (const Example& ex : corpus.examples) {
    TokenSeq hyp;
    try {
      hyp = predictor(ex.src_tokens);
    } catch (const std::exception& e) {
      throw std::runtime_error("recovery_difficulty: predictor failed on id " +
                               std::to_string(ex.id) + ": " + e.what());
    }
    table.scores[ex.id] = -sentence_bleu(hyp, ex.tgt_tokens).value;
  }
  return table;
}

std::map<int, double> empirical_cdf(const std::map<int, double>& raw) {
  if (raw.empty()) {
    throw std::invalid_argument("empirical_cdf: empty score map");
  }
  std::vector<double> values;
  values.reserve(raw.size());
  for (const auto& [id, v] : raw) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("empirical_cdf: non-finite value for id " +
                                  std::to_string(id));
    }
    values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  std::map<int, double> out;
  for (const auto& [id, v] : raw) {
    const auto rank = std::upper_bound(values.begin(), values.end(), v) -
                      values.begin();
    out[id] = static_cast<double>(rank) / n;
  }
  return out;
}

DifficultyScoreTable feature_difficulty(const ParallelCorpus& corpus,
                                        SentenceFeature feature) {
  std::map<int, double> raw;
  if (feature == SentenceFeature::kLength) {
    for (const Example& ex : corpus.examples) {
      raw[ex.id] = static_cast<double>(ex.src_tokens.size());
    }
  } else {
    std::map<std::string, std::int64_t> freq;
    std::int64_t total = 0;
    for (const Example& ex : corpus.examples) {
      for (const auto& t : ex.src_tokens) {
        ++freq[t];
        ++total;
      }
    }
    for (const Example& ex : corpus.examples) {
      double rarity = 0.0;
      for (const auto& t : ex.src_tokens) {
        rarity -= std::log(static_cast<double>(freq.at(t)) /
                           static_cast<double>(total));
      }
      raw[ex.id] = rarity;
    }
  }
  DifficultyScoreTable table;
  table.criterion =
      feature == SentenceFeature::kLength ? "length" : "rarity";
  table.cdf_applied = true;
  table.scores = empirical_cdf(raw);
  return table;
}

DifficultyScoreTable lm_difficulty(const ParallelCorpus& corpus,
                                   const LanguageModel& lm, CorpusSide side) {
  DifficultyScoreTable table;
  table.criterion = side == CorpusSide::kSource ? "lm" : "lm-target";
  table.cdf_applied = false;
  for (const Example& ex : corpus.examples) {
    const TokenSeq& words =
        side == CorpusSide::kSource ? ex.src_tokens : ex.tgt_tokens;
    const auto word_count = static_cast<double>(words.size());
    table.scores[ex.id] = -lm.sentence_log_prob(words) / word_count;
  }
  return table;
}

DifficultyScoreTable embedding_norm_difficulty(const ParallelCorpus& corpus,
                                               const EmbeddingTable& table) {
  auto unk = table.vectors.find("<unk>");
  if (unk == table.vectors.end()) {
    throw ConfigError("embedding_norm_difficulty: table lacks an <unk> entry");
  }
  const std::size_t dim = unk->second.size();
  for (const auto& [token, vec] : table.vectors) {
    if (vec.size() != dim) {
      throw ConfigError(
          "embedding_norm_difficulty: dimension mismatch for token '" + token +
          "': " + std::to_string(vec.size()) + " vs " + std::to_string(dim));
    }
  }
  std::map<int, double> raw;
  for (const Example& ex : corpus.examples) {
    double sum = 0.0;
    for (const auto& t : ex.src_tokens) {
      auto it = table.vectors.find(t);
      const auto& vec = it == table.vectors.end() ? unk->second : it->second;
      double sq = 0.0;
      for (double x : vec) sq += x * x;
      sum += std::sqrt(sq);
    }
    raw[ex.id] = sum;
  }
  DifficultyScoreTable out;
  out.criterion = "embed-norm";
  out.cdf_applied = true;
  out.scores = empirical_cdf(raw);
  return out;
}

DifficultyScoreTable loss_decline_difficulty(
    const std::map<int, double>& prev_losses,
    const std::map<int, double>& cur_losses) {
  DifficultyScoreTable table;
  table.criterion = "loss-decline";
  table.cdf_applied = false;
  table.metadata["loss"] = "sequence-sum";
  for (const auto& [id, prev] : prev_losses) {
    auto it = cur_losses.find(id);
    if (it == cur_losses.end()) {
      throw std::invalid_argument(
          "loss_decline_difficulty: id missing from current losses: " +
          std::to_string(id));
    }
    if (prev <= 0.0) {
      throw std::invalid_argument(
          "loss_decline_difficulty: non-positive previous loss for id " +
          std::to_string(id));
    }
    table.scores[id] = (it->second - prev) / prev;
  }
  for (const auto& [id, cur] : cur_losses) {
    if (!prev_losses.count(id)) {
      throw std::invalid_argument(
          "loss_decline_difficulty: id missing from previous losses: " +
          std::to_string(id));
    }
  }
  return table;
}

void write_score_table(const DifficultyScoreTable& table,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write score table: " + path.string());
  out << "#criterion=" << table.criterion << "\tcdf="
      << (table.cdf_applied ? "true" : "false") << "\n";
  for (const auto& [key, value] : table.metadata) {
    out << '#' << key << '=' << value << "\n";
  }
  char buf[64];
  for (const auto& [id, score] : table.scores) {
    std::snprintf(buf, sizeof(buf), "%d\t%.6f\n", id, score);
    out << buf;
  }
  if (!out) throw IoError("write failure on score table: " + path.string());
}

DifficultyScoreTable read_score_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open score table: " + path.string());
  DifficultyScoreTable table;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(1);
      if (!saw_header) {
        std::istringstream fields(body);
        std::string field;
        while (std::getline(fields, field, '\t')) {
          const auto eq = field.find('=');
          if (eq == std::string::npos) {
            throw ParseError("score table " + path.string() + " line " +
                             std::to_string(line_no) + ": malformed header");
          }
          const std::string key = field.substr(0, eq);
          const std::string value = field.substr(eq + 1);
          if (key == "criterion") {
            table.criterion = value;
          } else if (key == "cdf") {
            table.cdf_applied = value == "true";
          } else {
            table.metadata[key] = value;
          }
        }
        saw_header = true;
      } else {
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
          table.metadata[body.substr(0, eq)] = body.substr(eq + 1);
        }
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("score table " + path.string() + " line " +
                       std::to_string(line_no) + ": expected id<TAB>score");
    }
    int id = 0;
    const char* id_begin = line.data();
    const char* id_end = line.data() + tab;
    auto id_res = std::from_chars(id_begin, id_end, id);
    if (id_res.ec != std::errc{} || id_res.ptr != id_end) {
      throw ParseError("score table " + path.string() + " line " +
                       std::to_string(line_no) + ": bad id field");
    }
    errno = 0;
    char* score_end = nullptr;
    const double score = std::strtod(line.c_str() + tab + 1, &score_end);
    if (score_end == line.c_str() + tab + 1 ||
        score_end != line.c_str() + line.size() || errno == ERANGE) {
      throw ParseError("score table " + path.string() + " line " +
                       std::to_string(line_no) + ": bad score field");
    }
    if (!table.scores.emplace(id, score).second) {
      throw ParseError("score table " + path.string() + " line " +
                       std::to_string(line_no) + ": duplicate id " +
                       std::to_string(id));
    }
  }
  if (!saw_header) {
    throw ParseError("score table " + path.string() + ": missing header line");
  }
  return table;
}

}  // namespace seqcl
