// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#include "seqcl/bleu.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "seqcl/rng.hpp"
#include "support/bleu_oracle.hpp"

using seqcl::BleuScore;
using seqcl::NgramStats;

namespace {

std::vector<int> random_seq(seqcl::Rng& rng, int max_len, int vocab) {
  const auto len = seqcl::rng_below(rng, static_cast<std::uint64_t>(max_len + 1));
  std::vector<int> seq(len);
  for (auto& t : seq) {
    t = static_cast<int>(seqcl::rng_below(rng, static_cast<std::uint64_t>(vocab)));
  }
  return seq;
}

}  // namespace

TEST_SUITE("bleu") {

TEST_CASE("ngram stats on an identical pair") {
  const std::vector<std::string> seq = {"a", "b"};
  const NgramStats stats = seqcl::ngram_stats(seq, seq);
  CHECK(stats.matches[0] == 2);
  CHECK(stats.candidates[0] == 2);
  CHECK(stats.matches[1] == 1);
  CHECK(stats.candidates[1] == 1);
  CHECK(stats.matches[2] == 0);
  CHECK(stats.candidates[2] == 0);
}

TEST_CASE("ngram matches are clipped to reference counts") {
  const std::vector<std::string> hyp = {"a", "a", "a"};
  const std::vector<std::string> ref = {"a"};
  const NgramStats stats = seqcl::ngram_stats(hyp, ref);
  CHECK(stats.matches[0] == 1);
  CHECK(stats.candidates[0] == 3);
}

TEST_CASE("empty hypothesis has zero counts") {
  const std::vector<std::string> hyp;
  const std::vector<std::string> ref = {"a"};
  const NgramStats stats = seqcl::ngram_stats(hyp, ref);
  for (int n = 0; n < 4; ++n) {
    CHECK(stats.matches[n] == 0);
    CHECK(stats.candidates[n] == 0);
  }
}

TEST_CASE("candidate counts follow max(0, len - n + 1)") {
  seqcl::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto hyp = random_seq(rng, 10, 5);
    const auto ref = random_seq(rng, 10, 5);
    const NgramStats stats = seqcl::ngram_stats(hyp, ref);
    for (int n = 1; n <= 4; ++n) {
      const auto expect =
          hyp.size() >= static_cast<std::size_t>(n)
              ? static_cast<std::int64_t>(hyp.size()) - n + 1
              : 0;
      CHECK(stats.candidates[n - 1] == expect);
      CHECK(stats.matches[n - 1] >= 0);
      CHECK(stats.matches[n - 1] <= stats.candidates[n - 1]);
    }
  }
}

TEST_CASE("identity scores exactly 100") {
  const std::vector<std::string> seq = {"a", "b", "c", "d"};
  const BleuScore score = seqcl::sentence_bleu(seq, seq);
  CHECK(score.value == 100.0);
  CHECK(score.brevity_penalty == 1.0);

  const std::vector<std::string> one = {"x"};
  CHECK(seqcl::sentence_bleu(one, one).value == 100.0);
}

TEST_CASE("one substituted token gives exactly 50") {
  const std::vector<std::string> hyp = {"a", "b", "c", "d"};
  const std::vector<std::string> ref = {"a", "b", "x", "d"};
  const BleuScore score = seqcl::sentence_bleu(hyp, ref);
  CHECK(score.value == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(score.precisions[0] == doctest::Approx(0.75));
  CHECK(score.precisions[1] == doctest::Approx(0.5));
  CHECK(score.precisions[2] == doctest::Approx(1.0 / 3.0));
  CHECK(score.precisions[3] == doctest::Approx(0.5));
  CHECK(score.brevity_penalty == 1.0);
}

TEST_CASE("short perfect prefix is penalized only by brevity") {
  const std::vector<std::string> hyp = {"a", "b"};
  const std::vector<std::string> ref = {"a", "b", "c", "d"};
  const BleuScore score = seqcl::sentence_bleu(hyp, ref);
  CHECK(score.value == doctest::Approx(100.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(score.value == doctest::Approx(36.78794411714423).epsilon(1e-9));
  CHECK(score.brevity_penalty == doctest::Approx(std::exp(1.0 - 2.0)));
}

TEST_CASE("empty hypothesis scores zero") {
  const std::vector<std::string> hyp;
  const std::vector<std::string> ref = {"a", "b"};
  const BleuScore score = seqcl::sentence_bleu(hyp, ref);
  CHECK(score.value == 0.0);
  CHECK(score.brevity_penalty == 0.0);
}

TEST_CASE("empty reference is rejected") {
  const std::vector<std::string> hyp = {"a"};
  const std::vector<std::string> ref;
  CHECK_THROWS_AS(seqcl::sentence_bleu(hyp, ref), std::invalid_argument);
}

TEST_CASE("score decomposition invariant holds") {
  seqcl::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto hyp = random_seq(rng, 15, 10);
    auto ref = random_seq(rng, 15, 10);
    if (ref.empty()) ref.push_back(0);
    const BleuScore score = seqcl::sentence_bleu(hyp, ref);
    double log_sum = 0.0;
    bool zero = false;
    for (double p : score.precisions) {
      if (p <= 0.0) {
        zero = true;
      } else {
        log_sum += std::log(p);
      }
    }
    const double recomposed =
        zero ? 0.0 : 100.0 * score.brevity_penalty * std::exp(log_sum / 4.0);
    CHECK(score.value == doctest::Approx(recomposed).epsilon(1e-9));
    CHECK(score.value >= 0.0);
    CHECK(score.value <= 100.0);
  }
}

TEST_CASE("oracle equivalence on 200 random pairs") {
  seqcl::Rng rng(42);
  int nontrivial = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto hyp = random_seq(rng, 15, 10);
    auto ref = random_seq(rng, 15, 10);
    if (ref.empty()) ref.push_back(static_cast<int>(seqcl::rng_below(rng, 10)));
    const double mine = seqcl::sentence_bleu(hyp, ref).value;
    const double oracle = seqcl_test::oracle_sentence_bleu(hyp, ref);
    CHECK(std::abs(mine - oracle) < 1e-9);
    if (mine > 0.0) ++nontrivial;
  }
  CHECK(nontrivial > 50);  // the sample exercises non-degenerate scores
}

TEST_CASE("replacing a matching token never raises unigram matches") {
  seqcl::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto ref = random_seq(rng, 12, 6);
    if (ref.empty()) ref.push_back(0);
    std::vector<int> hyp = ref;
    const auto before = seqcl::ngram_stats(hyp, ref).matches[0];
    // Corrupt one position with a token outside the reference vocabulary.
    const auto pos = seqcl::rng_below(rng, hyp.size());
    hyp[pos] = 999;
    const auto after = seqcl::ngram_stats(hyp, ref).matches[0];
    CHECK(after <= before);
  }
}

TEST_CASE("corpus bleu of identical pairs is 100") {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
  for (int i = 0; i < 5; ++i) {
    std::vector<int> seq = {1, 2, 3, 4, i};
    pairs.emplace_back(seq, seq);
  }
  CHECK(seqcl::corpus_bleu(pairs).value == 100.0);
}

TEST_CASE("single-pair corpus bleu equals the unsmoothed computation") {
  const std::vector<std::string> hyp = {"a", "b", "c", "d", "e"};
  const std::vector<std::string> ref = {"a", "b", "c", "x", "e"};
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>
      pairs = {{hyp, ref}};
  const double mine = seqcl::corpus_bleu(pairs).value;
  const double oracle = seqcl_test::oracle_corpus_bleu(pairs);
  CHECK(mine == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("corpus bleu differs from averaged sentence bleu") {
  // A substituted-token pair plus an identity pair: pooling is not
  // averaging.
  const std::vector<std::string> hyp1 = {"a", "b", "c", "d"};
  const std::vector<std::string> ref1 = {"a", "b", "x", "d"};
  const std::vector<std::string> same = {"p", "q", "r", "s"};
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>
      pairs = {{hyp1, ref1}, {same, same}};
  const double pooled = seqcl::corpus_bleu(pairs).value;
  const double averaged = (seqcl::sentence_bleu(hyp1, ref1).value +
                           seqcl::sentence_bleu(same, same).value) /
                          2.0;
  const double oracle = seqcl_test::oracle_corpus_bleu(pairs);
  CHECK(pooled == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::abs(pooled - averaged) > 1.0);
}

TEST_CASE("corpus bleu rejects an empty pair list") {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
  CHECK_THROWS_AS(seqcl::corpus_bleu(pairs), std::invalid_argument);
}

TEST_CASE("corpus bleu with all-empty hypotheses is zero") {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs = {
      {{}, {1, 2, 3}}, {{}, {4, 5}}};
  CHECK(seqcl::corpus_bleu(pairs).value == 0.0);
}

}  // TEST_SUITE
