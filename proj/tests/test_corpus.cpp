// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <doctest.h>

#include "seqcl/errors.hpp"
#include "seqcl/rng.hpp"

using seqcl::ParallelCorpus;
using seqcl::SyntheticTask;
using seqcl::SyntheticTaskSpec;
using seqcl::TokenizeMode;
using seqcl::Vocabulary;

namespace {

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

ParallelCorpus tiny_corpus(const std::vector<std::string>& src_lines,
                           const std::vector<std::string>& tgt_lines) {
  ParallelCorpus corpus;
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    seqcl::Example ex;
    ex.id = static_cast<int>(i);
    ex.src_tokens = seqcl::tokenize(src_lines[i], TokenizeMode::kWhitespace);
    ex.tgt_tokens = seqcl::tokenize(tgt_lines[i], TokenizeMode::kWhitespace);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("whitespace tokenize splits on runs") {
  CHECK(seqcl::tokenize("a  b c", TokenizeMode::kWhitespace) ==
        seqcl::TokenSeq{"a", "b", "c"});
  CHECK(seqcl::tokenize(" \t a \n", TokenizeMode::kWhitespace) ==
        seqcl::TokenSeq{"a"});
  CHECK(seqcl::tokenize("", TokenizeMode::kWhitespace).empty());
  CHECK(seqcl::tokenize("  \t ", TokenizeMode::kWhitespace).empty());
}

TEST_CASE("character tokenize yields one token per non-space code point") {
  CHECK(seqcl::tokenize("ab", TokenizeMode::kCharacter) ==
        seqcl::TokenSeq{"a", "b"});
  CHECK(seqcl::tokenize("a b", TokenizeMode::kCharacter) ==
        seqcl::TokenSeq{"a", "b"});
  // Multi-byte code points stay intact.
  CHECK(seqcl::tokenize("\xC3\xA9x", TokenizeMode::kCharacter) ==
        seqcl::TokenSeq{"\xC3\xA9", "x"});
}

TEST_CASE("unicode spaces separate tokens") {
  // U+00A0 no-break space and U+2003 em space both split.
  CHECK(seqcl::tokenize("a\xC2\xA0"
                        "b",
                        TokenizeMode::kWhitespace) ==
        seqcl::TokenSeq{"a", "b"});
  CHECK(seqcl::tokenize("a\xE2\x80\x83"
                        "b",
                        TokenizeMode::kWhitespace) ==
        seqcl::TokenSeq{"a", "b"});
}

TEST_CASE("load_parallel aligns by line") {
  const auto src = write_temp("seqcl_src.txt", "a b\n");
  const auto tgt = write_temp("seqcl_tgt.txt", "c d\n");
  const ParallelCorpus corpus = seqcl::load_parallel(src, tgt);
  REQUIRE(corpus.size() == 1);
  CHECK(corpus.at(0).src_tokens == seqcl::TokenSeq{"a", "b"});
  CHECK(corpus.at(0).tgt_tokens == seqcl::TokenSeq{"c", "d"});
}

TEST_CASE("load_parallel reports a line count mismatch") {
  const auto src = write_temp("seqcl_src3.txt", "a\nb\nc\n");
  const auto tgt = write_temp("seqcl_tgt2.txt", "x\ny\n");
  try {
    seqcl::load_parallel(src, tgt);
    FAIL("expected AlignmentError");
  } catch (const seqcl::AlignmentError& e) {
    CHECK(e.src_lines == 3);
    CHECK(e.tgt_lines == 2);
  }
}

TEST_CASE("load_parallel skips blank pairs and renumbers densely") {
  const auto src = write_temp("seqcl_src_blank.txt", "a\n\nb\n");
  const auto tgt = write_temp("seqcl_tgt_blank.txt", "x\ny\nz\n");
  const ParallelCorpus corpus = seqcl::load_parallel(src, tgt);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.metadata.skipped_blank_pairs == 1);
  CHECK(corpus.at(0).id == 0);
  CHECK(corpus.at(1).id == 1);
  CHECK(corpus.at(1).src_tokens == seqcl::TokenSeq{"b"});
}

TEST_CASE("load_parallel fails on a missing file") {
  CHECK_THROWS_AS(
      seqcl::load_parallel("/nonexistent/src.txt", "/nonexistent/tgt.txt"),
      seqcl::IoError);
}

TEST_CASE("load_parallel handles a generated 2000-line fixture") {
  std::string src_text, tgt_text;
  for (int i = 0; i < 2000; ++i) {
    src_text += "tok" + std::to_string(i % 31) + " x\n";
    tgt_text += "y tok" + std::to_string(i % 17) + "\n";
  }
  const auto src = write_temp("seqcl_src2000.txt", src_text);
  const auto tgt = write_temp("seqcl_tgt2000.txt", tgt_text);
  const ParallelCorpus corpus = seqcl::load_parallel(src, tgt);
  REQUIRE(corpus.size() == 2000);
  CHECK(corpus.at(0).id == 0);
  CHECK(corpus.at(1999).id == 1999);
}

TEST_CASE("vocabulary honors min_freq and reserved ids") {
  const ParallelCorpus corpus = tiny_corpus({"a a b"}, {"t"});
  const Vocabulary vocab =
      Vocabulary::build(corpus, seqcl::VocabSide::kSource, 2);
  CHECK(vocab.contains("a"));
  CHECK_FALSE(vocab.contains("b"));
  CHECK(vocab.token_to_id("a") == 4);
  CHECK(vocab.token_to_id("b") == Vocabulary::kUnk);
  CHECK(vocab.id_to_token(Vocabulary::kPad) == "<pad>");
  CHECK(vocab.id_to_token(Vocabulary::kBos) == "<bos>");
  CHECK(vocab.id_to_token(Vocabulary::kEos) == "<eos>");
  CHECK(vocab.id_to_token(Vocabulary::kUnk) == "<unk>");
}

TEST_CASE("min_freq 1 keeps every distinct token") {
  const ParallelCorpus corpus = tiny_corpus({"a b c", "c d"}, {"t", "t"});
  const Vocabulary vocab =
      Vocabulary::build(corpus, seqcl::VocabSide::kSource, 1);
  for (const auto* t : {"a", "b", "c", "d"}) CHECK(vocab.contains(t));
  // Frequency then lexicographic: c (2) first, then a, b, d.
  CHECK(vocab.token_to_id("c") == 4);
  CHECK(vocab.token_to_id("a") == 5);
  CHECK(vocab.token_to_id("b") == 6);
  CHECK(vocab.token_to_id("d") == 7);
}

TEST_CASE("vocabulary construction is deterministic") {
  const ParallelCorpus corpus =
      tiny_corpus({"m n o p q", "q p o"}, {"u v", "w"});
  const Vocabulary a = Vocabulary::build(corpus, seqcl::VocabSide::kJoint, 1);
  const Vocabulary b = Vocabulary::build(corpus, seqcl::VocabSide::kJoint, 1);
  REQUIRE(a.size() == b.size());
  for (std::int32_t id = 0; id < a.size(); ++id) {
    CHECK(a.id_to_token(id) == b.id_to_token(id));
  }
}

TEST_CASE("encode maps unknowns to UNK and round-trips known tokens") {
  const ParallelCorpus corpus = tiny_corpus({"a b"}, {"t"});
  const Vocabulary vocab =
      Vocabulary::build(corpus, seqcl::VocabSide::kSource, 1);
  CHECK(vocab.encode({"a"}) == seqcl::IdSeq{4});
  CHECK(vocab.encode({"zzz"}) == seqcl::IdSeq{Vocabulary::kUnk});
  const seqcl::TokenSeq tokens = {"a", "b", "a"};
  CHECK(vocab.decode(vocab.encode(tokens)) == tokens);
}

TEST_CASE("batches pack greedily under the token budget") {
  // Four examples of total length 10 each fit two per 20-token batch.
  std::vector<std::string> src(4, "s1 s2 s3 s4 s5"), tgt(4, "t1 t2 t3 t4 t5");
  const ParallelCorpus corpus = tiny_corpus(src, tgt);
  const auto batches = seqcl::make_batches({0, 1, 2, 3}, corpus, 20, 5);
  REQUIRE(batches.size() == 2);
  CHECK(batches[0].size() == 2);
  CHECK(batches[1].size() == 2);
}

TEST_CASE("oversize example forms a singleton batch") {
  std::string long_line;
  for (int i = 0; i < 25; ++i) long_line += "w ";
  const ParallelCorpus corpus = tiny_corpus({long_line}, {long_line});
  const auto batches = seqcl::make_batches({0}, corpus, 20, 0);
  REQUIRE(batches.size() == 1);
  CHECK(batches[0] == seqcl::Batch{0});
}

TEST_CASE("batching is deterministic in the seed") {
  std::vector<std::string> src, tgt;
  for (int i = 0; i < 30; ++i) {
    src.push_back("a b c");
    tgt.push_back("x y");
  }
  const ParallelCorpus corpus = tiny_corpus(src, tgt);
  const auto one = seqcl::make_batches(corpus.all_ids(), corpus, 17, 99);
  const auto two = seqcl::make_batches(corpus.all_ids(), corpus, 17, 99);
  CHECK(one == two);
  const auto other = seqcl::make_batches(corpus.all_ids(), corpus, 17, 100);
  CHECK(one != other);
}

TEST_CASE("batching partitions the id set across random trials") {
  seqcl::Rng rng(2024);
  std::vector<std::string> src, tgt;
  for (int i = 0; i < 40; ++i) {
    std::string line;
    const auto len = 1 + seqcl::rng_below(rng, 9);
    for (std::uint64_t k = 0; k < len; ++k) line += "t ";
    src.push_back(line);
    tgt.push_back(line);
  }
  const ParallelCorpus corpus = tiny_corpus(src, tgt);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> ids;
    for (int id = 0; id < 40; ++id) {
      if (seqcl::rng_below(rng, 2) == 0) ids.push_back(id);
    }
    const auto max_tokens = 4 + static_cast<std::int64_t>(seqcl::rng_below(rng, 40));
    const auto batches =
        seqcl::make_batches(ids, corpus, max_tokens, rng());
    std::multiset<int> seen;
    for (const auto& batch : batches) seen.insert(batch.begin(), batch.end());
    CHECK(seen == std::multiset<int>(ids.begin(), ids.end()));
    if (ids.empty()) CHECK(batches.empty());
  }
}

TEST_CASE("batches reject unknown ids") {
  const ParallelCorpus corpus = tiny_corpus({"a"}, {"b"});
  CHECK_THROWS_AS(seqcl::make_batches({5}, corpus, 10, 0),
                  std::invalid_argument);
}

TEST_CASE("substitution cipher applies a token-wise bijection") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTask::kSubstitutionCipher;
  spec.vocab_size = 10;
  spec.min_len = 4;
  spec.max_len = 8;
  const ParallelCorpus corpus = seqcl::generate_synthetic(spec, 50, 123);
  REQUIRE(corpus.size() == 50);
  // Recnstruct the mapping from observed pairs; it must be functional and
  // injective.
  std::map<std::string, std::string> mapping;
  for (const auto& ex : corpus.examples) {
    REQUIRE(ex.src_tokens.size() == ex.tgt_tokens.size());
    for (std::size_t i = 0; i < ex.src_tokens.size(); ++i) {
      auto [it, inserted] =
          mapping.emplace(ex.src_tokens[i], ex.tgt_tokens[i]);
      CHECK(it->second == ex.tgt_tokens[i]);
    }
  }
  std::set<std::string> images;
  for (const auto& [from, to] : mapping) images.insert(to);
  CHECK(images.size() == mapping.size());
}

TEST_CASE("cipher repeats tokens consistently within a sentence") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTask::kSubstitutionCipher;
  spec.vocab_size = 2;  // forces repeats
  spec.min_len = 6;
  spec.max_len = 6;
  const ParallelCorpus corpus = seqcl::generate_synthetic(spec, 5, 7);
  for (const auto& ex : corpus.examples) {
    for (std::size_t i = 0; i < ex.src_tokens.size(); ++i) {
      for (std::size_t j = 0; j < ex.src_tokens.size(); ++j) {
        if (ex.src_tokens[i] == ex.src_tokens[j]) {
          CHECK(ex.tgt_tokens[i] == ex.tgt_tokens[j]);
        }
      }
    }
  }
}

TEST_CASE("reversal cipher reverses the mapped target") {
  SyntheticTaskSpec sub;
  sub.task = SyntheticTask::kSubstitutionCipher;
  SyntheticTaskSpec rev = sub;
  rev.task = SyntheticTask::kReversalCipher;
  const ParallelCorpus plain = seqcl::generate_synthetic(sub, 20, 55);
  const ParallelCorpus reversed = seqcl::generate_synthetic(rev, 20, 55);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    auto tgt = plain.examples[i].tgt_tokens;
    std::reverse(tgt.begin(), tgt.end());
    CHECK(reversed.examples[i].tgt_tokens == tgt);
    CHECK(reversed.examples[i].src_tokens == plain.examples[i].src_tokens);
  }
}

TEST_CASE("noisy cipher with rho 0 equals the clean cipher") {
  SyntheticTaskSpec noisy;
  noisy.task = SyntheticTask::kNoisyCipher;
  noisy.rho = 0.0;
  noisy.corrupt_fraction = 0.2;
  SyntheticTaskSpec clean;
  clean.task = SyntheticTask::kSubstitutionCipher;
  clean.vocab_size = noisy.vocab_size;
  clean.min_len = noisy.min_len;
  clean.max_len = noisy.max_len;
  const ParallelCorpus a = seqcl::generate_synthetic(noisy, 100, 9);
  const ParallelCorpus b = seqcl::generate_synthetic(clean, 100, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.examples[i].src_tokens == b.examples[i].src_tokens);
    CHECK(a.examples[i].tgt_tokens == b.examples[i].tgt_tokens);
  }
}

TEST_CASE("noisy cipher marks the configured fraction of examples") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTask::kNoisyCipher;
  spec.corrupt_fraction = 0.2;
  spec.rho = 0.5;
  const ParallelCorpus corpus = seqcl::generate_synthetic(spec, 1000, 31);
  CHECK(corpus.metadata.corrupted_ids.size() == 200);
  // Flags must be valid, sorted, unique ids.
  std::set<int> unique(corpus.metadata.corrupted_ids.begin(),
                       corpus.metadata.corrupted_ids.end());
  CHECK(unique.size() == 200);
  CHECK(*unique.rbegin() < 1000);
  CHECK(std::is_sorted(corpus.metadata.corrupted_ids.begin(),
                       corpus.metadata.corrupted_ids.end()));
}

TEST_CASE("synthetic generation is deterministic in the seed") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTask::kNoisyCipher;
  const ParallelCorpus a = seqcl::generate_synthetic(spec, 64, 17);
  const ParallelCorpus b = seqcl::generate_synthetic(spec, 64, 17);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.examples[i].src_tokens == b.examples[i].src_tokens);
    CHECK(a.examples[i].tgt_tokens == b.examples[i].tgt_tokens);
  }
  CHECK(a.metadata.corrupted_ids == b.metadata.corrupted_ids);
  const ParallelCorpus c = seqcl::generate_synthetic(spec, 64, 18);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.examples[i].src_tokens != c.examples[i].src_tokens) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("invalid synthetic specs are rejected") {
  SyntheticTaskSpec bad_rho;
  bad_rho.task = SyntheticTask::kNoisyCipher;
  bad_rho.rho = 1.5;
  CHECK_THROWS_AS(seqcl::generate_synthetic(bad_rho, 10, 0),
                  seqcl::ConfigError);

  SyntheticTaskSpec bad_range;
  bad_range.min_len = 5;
  bad_range.max_len = 4;
  CHECK_THROWS_AS(seqcl::generate_synthetic(bad_range, 10, 0),
                  seqcl::ConfigError);
}

}  // TEST_SUITE
