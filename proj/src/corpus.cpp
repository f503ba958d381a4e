// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "seqcl/errors.hpp"
#include "seqcl/rng.hpp"

namespace seqcl {

namespace {

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x0085:  // NEL
    case 0x00A0:  // NBSP
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes the next UTF-8 code point; malformed bytes are passed through as
// single-byte tokens so plain Latin-1 input still tokenizes usably.
char32_t next_code_point(const std::string& s, std::size_t& i,
                         std::size_t& len) {
  const auto byte = static_cast<unsigned char>(s[i]);
  std::size_t width = 1;
  char32_t cp = byte;
  if (byte >= 0xF0) {
    width = 4;
    cp = byte & 0x07U;
  } else if (byte >= 0xE0) {
    width = 3;
    cp = byte & 0x0FU;
  } else if (byte >= 0xC0) {
    width = 2;
    cp = byte & 0x1FU;
  }
  if (i + width > s.size()) width = 1, cp = byte;
  for (std::size_t k = 1; k < width; ++k) {
    const auto cont = static_cast<unsigned char>(s[i + k]);
    if ((cont & 0xC0U) != 0x80U) {
      width = 1;
      cp = byte;
      break;
    }
    cp = (cp << 6) | (cont & 0x3FU);
  }
  len = width;
  i += width;
  return cp;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (in.bad()) {
    throw IoError("read failure on file: " + path.string());
  }
  return lines;
}

std::string token_name(int index) { return "w" + std::to_string(index); }

}  // namespace

std::vector<int> ParallelCorpus::all_ids() const {
  std::vector<int> ids(examples.size());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

TokenSeq tokenize(const std::string& text, TokenizeMode mode) {
  TokenSeq tokens;
  std::size_t i = 0;
  std::string current;
  while (i < text.size()) {
    const std::size_t start = i;
    std::size_t width = 0;
    const char32_t cp = next_code_point(text, i, width);
    if (is_unicode_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (mode == TokenizeMode::kCharacter) {
      tokens.emplace_back(text.substr(start, width));
    } else {
      current.append(text, start, width);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

ParallelCorpus load_parallel(const std::filesystem::path& src_path,
                             const std::filesystem::path& tgt_path,
                             TokenizeMode mode) {
  const auto src_lines = read_lines(src_path);
  const auto tgt_lines = read_lines(tgt_path);
  if (src_lines.size() != tgt_lines.size()) {
    throw AlignmentError(src_lines.size(), tgt_lines.size());
  }
  ParallelCorpus corpus;
  corpus.metadata.src_label = src_path.filename().string();
  corpus.metadata.tgt_label = tgt_path.filename().string();
  corpus.metadata.origin =
      src_path.string() + " || " + tgt_path.string();
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    TokenSeq src = tokenize(src_lines[i], mode);
    TokenSeq tgt = tokenize(tgt_lines[i], mode);
    if (src.empty() || tgt.empty()) {
      ++corpus.metadata.skipped_blank_pairs;
      continue;
    }
    Example ex;
    ex.id = static_cast<int>(corpus.examples.size());
    ex.src_tokens = std::move(src);
    ex.tgt_tokens = std::move(tgt);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

Vocabulary::Vocabulary() {
  tokens_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(tokens_.size()); ++i) {
    ids_.emplace(tokens_[static_cast<std::size_t>(i)], i);
  }
}

Vocabulary Vocabulary::build(const ParallelCorpus& corpus, VocabSide side,
                             std::int64_t min_freq) {
  std::map<std::string, std::int64_t> freq;
  for (const Example& ex : corpus.examples) {
    if (side != VocabSide::kTarget) {
      for (const auto& t : ex.src_tokens) ++freq[t];
    }
    if (side != VocabSide::kSource) {
      for (const auto& t : ex.tgt_tokens) ++freq[t];
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [token, count] : freq) {
    if (count >= min_freq) kept.emplace_back(token, count);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  Vocabulary vocab;
  for (auto& [token, count] : kept) {
    const auto id = static_cast<std::int32_t>(vocab.tokens_.size());
    vocab.ids_.emplace(token, id);
    vocab.tokens_.push_back(std::move(token));
  }
  return vocab;
}

std::int32_t Vocabulary::token_to_id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::id_to_token(std::int32_t id) const {
  return tokens_.at(static_cast<std::size_t>(id));
}

bool Vocabulary::contains(const std::string& token) const {
  return ids_.find(token) != ids_.end();
}

IdSeq Vocabulary::encode(const TokenSeq& tokens) const {
  IdSeq ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(token_to_id(t));
  return ids;
}

TokenSeq Vocabulary::decode(const IdSeq& ids) const {
  TokenSeq tokens;
  tokens.reserve(ids.size());
  for (auto id : ids) tokens.push_back(id_to_token(id));
  return tokens;
}

std::vector<Batch> make_batches(const std::vector<int>& example_ids,
                                const ParallelCorpus& corpus,
                                std::int64_t max_tokens, std::uint64_t seed) {
  if (max_tokens <= 0) {
    throw ConfigError("make_batches: max_tokens must be positive");
  }
  std::vector<int> order = example_ids;
  for (int id : order) {
    if (id < 0 || static_cast<std::size_t>(id) >= corpus.size()) {
      throw std::invalid_argument("make_batches: unknown example id " +
                                  std::to_string(id));
    }
  }
  Rng rng(seed);
  rng_shuffle(rng, order);

  std::vector<Batch> batches;
  Batch current;
  std::int64_t current_tokens = 0;
  for (int id : order) {
    const Example& ex = corpus.at(id);
    const auto cost = static_cast<std::int64_t>(ex.src_tokens.size() +
                                                ex.tgt_tokens.size());
    if (!current.empty() && current_tokens + cost > max_tokens) {
      batches.push_back(std::move(current));
      current.clear();
      current_tokens = 0;
    }
    current.push_back(id);
    current_tokens += cost;
    if (cost > max_tokens) {  // oversize example: singleton batch
      batches.push_back(std::move(current));
      current.clear();
      current_tokens = 0;
    }
  }
  if (!current.empty()) batches.push_back(std::move(current));
  return batches;
}

ParallelCorpus generate_synthetic(const SyntheticTaskSpec& task, int n,
                                  std::uint64_t seed) {
  if (n <= 0) throw ConfigError("generate_synthetic: n must be positive");
  if (task.vocab_size < 1) {
    throw ConfigError("generate_synthetic: vocab_size must be >= 1");
  }
  if (task.min_len < 1 || task.max_len < task.min_len) {
    throw ConfigError("generate_synthetic: empty length range");
  }
  if (task.task == SyntheticTask::kNoisyCipher) {
    if (task.rho < 0.0 || task.rho > 1.0) {
      throw ConfigError("generate_synthetic: rho must lie in [0, 1]");
    }
    if (task.corrupt_fraction < 0.0 || task.corrupt_fraction > 1.0) {
      throw ConfigError(
          "generate_synthetic: corrupt_fraction must lie in [0, 1]");
    }
  }

  const auto vocab = static_cast<std::uint64_t>(task.vocab_size);
  Rng rng(seed);

  // Seeded bijective token mapping shared by all cipher variants.
  std::vector<int> mapping(static_cast<std::size_t>(task.vocab_size));
  std::iota(mapping.begin(), mapping.end(), 0);
  rng_shuffle(rng, mapping);

  ParallelCorpus corpus;
  corpus.metadata.src_label = "synthetic.src";
  corpus.metadata.tgt_label = "synthetic.tgt";
  {
    std::ostringstream origin;
    switch (task.task) {
      case SyntheticTask::kSubstitutionCipher:
        origin << "substitution-cipher";
        break;
      case SyntheticTask::kReversalCipher:
        origin << "reversal-cipher";
        break;
      case SyntheticTask::kNoisyCipher:
        origin << "noisy-cipher(fraction=" << task.corrupt_fraction
               << ",rho=" << task.rho << ")";
        break;
    }
    origin << " n=" << n << " vocab=" << task.vocab_size << " len=["
           << task.min_len << "," << task.max_len << "] seed=" << seed;
    corpus.metadata.origin = origin.str();
  }

  corpus.examples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto span = static_cast<std::uint64_t>(task.max_len - task.min_len + 1);
    const auto len =
        static_cast<std::size_t>(task.min_len + static_cast<int>(rng_below(rng, span)));
    Example ex;
    ex.id = i;
    ex.src_tokens.reserve(len);
    ex.tgt_tokens.reserve(len);
    for (std::size_t j = 0; j < len; ++j) {
      const int tok = static_cast<int>(rng_below(rng, vocab));
      ex.src_tokens.push_back(token_name(tok));
      ex.tgt_tokens.push_back(token_name(mapping[static_cast<std::size_t>(tok)]));
    }
    if (task.task == SyntheticTask::kReversalCipher) {
      std::reverse(ex.tgt_tokens.begin(), ex.tgt_tokens.end());
    }
    corpus.examples.push_back(std::move(ex));
  }

  if (task.task == SyntheticTask::kNoisyCipher) {
    // Separate stream so that rho = 0 reproduces the clean cipher corpus.
    Rng noise_rng(mix_seed(seed, 0xC0FFEE));
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    rng_shuffle(noise_rng, ids);
    const auto n_corrupt = static_cast<std::size_t>(
        std::llround(task.corrupt_fraction * static_cast<double>(n)));
    std::vector<int> chosen(ids.begin(),
                            ids.begin() + static_cast<std::ptrdiff_t>(
                                              std::min(n_corrupt, ids.size())));
    std::sort(chosen.begin(), chosen.end());
    for (int id : chosen) {
      Example& ex = corpus.examples[static_cast<std::size_t>(id)];
      for (auto& tok : ex.tgt_tokens) {
        if (rng_unit(noise_rng) < task.rho) {
          tok = token_name(static_cast<int>(rng_below(noise_rng, vocab)));
        }
      }
    }
    corpus.metadata.corrupted_ids = std::move(chosen);
  }
  return corpus;
}

}  // namespace seqcl
