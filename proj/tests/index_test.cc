// Copyright 2026 The Receipt Linker Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rlink/index.h"

#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "gtest/gtest.h"
#include "oracles.h"

namespace rlink {
namespace {

EntityDocument Doc(DocId id, std::vector<std::string> tokens) {
  EntityDocument doc;
  doc.doc_id = id;
  doc.entity_id = "e" + std::to_string(id);
  doc.label_tokens = std::move(tokens);
  doc.mashed_terms = Mash(doc.label_tokens);
  return doc;
}

TEST(WildcardMatchTest, Anchors) {
  EXPECT_TRUE(WildcardMatch("kro", "kroger"));
  EXPECT_FALSE(WildcardMatch("prsl", "private"));
  EXPECT_FALSE(WildcardMatch("prsl", "select"));
  EXPECT_TRUE(WildcardMatch("prsl", "privateselect"));
  EXPECT_TRUE(WildcardMatch("oceans", "organicgreenbeans"));
}

TEST(WildcardMatchTest, EdgeCases) {
  EXPECT_FALSE(WildcardMatch("rog", "kroger"));  // not anchored at k
  EXPECT_TRUE(WildcardMatch("k", "kroger"));
  EXPECT_TRUE(WildcardMatch("kroger", "kroger"));
  EXPECT_FALSE(WildcardMatch("krogers", "kroger"));
  EXPECT_FALSE(WildcardMatch("", "kroger"));
  EXPECT_FALSE(WildcardMatch("k", ""));
  EXPECT_TRUE(WildcardMatch("jl\xC3\xB1", "jalape\xC3\xB1o"));
  // Byte-level subsequence would accept this; code points do not.
  EXPECT_FALSE(WildcardMatch("a\xC3\xA9", "a\xC3\xB1\xC2\xA9"));
}

TEST(WildcardMatchTest, ExhaustiveSmallAlphabet) {
  const auto strings = oracle::AllStrings("abc", 5);
  for (const auto &pattern : strings) {
    if (pattern.empty()) continue;
    for (const auto &term : strings) {
      ASSERT_EQ(WildcardMatch(pattern, term), oracle::Wildcard(pattern, term))
          << pattern << " / " << term;
    }
  }
}

TEST(EditDistanceTest, Examples) {
  EXPECT_EQ(EditDistance("artichokes", "artichoke"), 1);
  EXPECT_EQ(EditDistance("kroger", "kroger"), 0);
  EXPECT_EQ(EditDistance("abc", ""), 3);
  EXPECT_EQ(EditDistance("", "abc"), 3);
  EXPECT_EQ(EditDistance("kitten", "sitting"), 3);
  EXPECT_EQ(EditDistance("cr\xC3\xA8me", "creme"), 1);
}

TEST(EditDistanceTest, ExhaustiveAndBounded) {
  const auto strings = oracle::AllStrings("abc", 4);
  for (const auto &a : strings) {
    for (const auto &b : strings) {
      const int want = oracle::EditDistance(a, b);
      ASSERT_EQ(EditDistance(a, b), want) << a << " / " << b;
      for (int bound = 0; bound <= 3; ++bound) {
        ASSERT_EQ(WithinEditDistance(a, b, bound), want <= bound);
      }
    }
  }
}

TEST(EditDistanceTest, MetricProperties) {
  std::mt19937 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const auto a = oracle::RandomString(rng, "abcd", 0, 9);
    const auto b = oracle::RandomString(rng, "abcd", 0, 9);
    const auto c = oracle::RandomString(rng, "abcd", 0, 9);
    const int ab = EditDistance(a, b);
    ASSERT_EQ(ab, EditDistance(b, a));
    ASSERT_LE(EditDistance(a, c), ab + EditDistance(b, c));
    ASSERT_EQ(ab == 0, a == b);
  }
}

TEST(BuildIndexTest, Postings) {
  const Index index = Index::Build({Doc(0, {"fiji", "water"}),
                                    Doc(1, {"kroger", "water"})});
  const PostingList *water = index.Postings(Field::kLabel, "water");
  ASSERT_NE(water, nullptr);
  EXPECT_EQ(water->document_frequency(), 2u);
  EXPECT_EQ(water->entries[0], (Posting{0, 1}));
  EXPECT_EQ(water->entries[1], (Posting{1, 1}));
  EXPECT_EQ(index.Postings(Field::kLabel, "kro"), nullptr);
  EXPECT_NE(index.Postings(Field::kMashed, "krogerwater"), nullptr);
  EXPECT_NE(index.Postings(Field::kMashed, "water"), nullptr);
}

TEST(BuildIndexTest, SingleDocStats) {
  const Index index = Index::Build({Doc(0, {"kroger", "water"})});
  EXPECT_EQ(index.doc_count(), 1u);
  EXPECT_DOUBLE_EQ(index.AvgDocLength(Field::kLabel), 2.0);
  EXPECT_EQ(index.DocLength(Field::kLabel, 0), 2u);
}

TEST(BuildIndexTest, MashedField) {
  EntityDocument doc = Doc(0, {"kroeger", "water"});
  doc.mashed_terms = {"kroegerwater", "water"};
  const Index index = Index::Build({doc});
  EXPECT_NE(index.Postings(Field::kMashed, "kroegerwater"), nullptr);
  EXPECT_NE(index.Postings(Field::kMashed, "water"), nullptr);
}

TEST(BuildIndexTest, TermFrequencyAndOrdering) {
  const Index index = Index::Build(
      {Doc(1, {"water", "water", "fiji"}), Doc(0, {"fiji"})});
  EXPECT_EQ(index.document(0).label_tokens, (std::vector<std::string>{"fiji"}));
  EXPECT_EQ(index.TermFrequency(Field::kLabel, "water", 1), 2u);
  EXPECT_EQ(index.TermFrequency(Field::kLabel, "water", 0), 0u);
  const PostingList *fiji = index.Postings(Field::kLabel, "fiji");
  ASSERT_NE(fiji, nullptr);
  EXPECT_EQ(fiji->entries[0].doc_id, 0u);
  EXPECT_EQ(fiji->entries[1].doc_id, 1u);
}

TEST(BuildIndexTest, Errors) {
  EXPECT_THROW(Index::Build({}), std::invalid_argument);
  EXPECT_THROW(Index::Build({Doc(0, {"a"}), Doc(0, {"b"})}),
               std::invalid_argument);
  EXPECT_THROW(Index::Build({Doc(0, {"a"}), Doc(2, {"b"})}),
               std::invalid_argument);
  EXPECT_THROW(Index::Build({Doc(0, {})}), std::invalid_argument);
  EXPECT_THROW(Index::Build({Doc(0, {"a"})}, {-1.0, 0.75}),
               std::invalid_argument);
  EXPECT_THROW(Index::Build({Doc(0, {"a"})}, {1.2, 1.5}),
               std::invalid_argument);
}

TEST(IdfTest, HandEvaluated) {
  const Index one = Index::Build({Doc(0, {"a"})});
  EXPECT_NEAR(one.Idf(Field::kLabel, "a"), 0.28768207245178085, 1e-12);
  const Index three =
      Index::Build({Doc(0, {"a"}), Doc(1, {"b"}), Doc(2, {"c"})});
  EXPECT_NEAR(three.Idf(Field::kLabel, "a"), 0.9808292530117262, 1e-12);
  const Index two = Index::Build({Doc(0, {"a"}), Doc(1, {"a"})});
  EXPECT_NEAR(two.Idf(Field::kLabel, "a"), 0.1823215567939546, 1e-12);
  // Absent term: n = 0.
  EXPECT_NEAR(one.Idf(Field::kLabel, "zzz"), std::log(1.0 + 1.5 / 0.5), 1e-12);
}

TEST(Bm25TermScoreTest, HandEvaluated) {
  const Index index = Index::Build({Doc(0, {"kroger", "water"})});
  EXPECT_EQ(index.Bm25TermScore(Field::kLabel, "fiji", 0), 0.0);
  // |D| = avgdl, so the tf part is 2.2 / 2.2 = 1.
  EXPECT_NEAR(index.Bm25TermScore(Field::kLabel, "water", 0),
              0.28768207245178085, 1e-12);

  const Index twice = Index::Build({Doc(0, {"water", "water"})});
  const double idf = twice.Idf(Field::kLabel, "water");
  EXPECT_NEAR(twice.Bm25TermScore(Field::kLabel, "water", 0), idf * 1.375,
              1e-12);
}

TEST(SearchTest, WildcardClausesScoreExactlyOne) {
  const Index index = Index::Build({Doc(0, {"kroger", "water"})});
  QueryPlan plan;
  plan.clauses = {WildcardClause{"kro", {Field::kLabel}},
                  WildcardClause{"wtr", {Field::kLabel}},
                  WildcardClause{"zzz", {Field::kLabel}}};
  const auto hits = index.Search(plan, 5);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].score, 2.0);
}

TEST(SearchTest, ClauseCountsOncePerDocument) {
  // "k" matches both label terms and both mashed terms.
  const Index index = Index::Build({Doc(0, {"kale", "kiwi"})});
  QueryPlan plan;
  plan.clauses = {WildcardClause{"k", {Field::kLabel, Field::kMashed}},
                  FuzzyClause{"kal", 2, Field::kLabel}};
  EXPECT_EQ(index.Search(plan, 1).at(0).score, 2.0);
}

TEST(SearchTest, EmptyPlanAndSingleTerm) {
  const Index index = Index::Build({Doc(0, {"kroger", "water"})});
  EXPECT_TRUE(index.Search(QueryPlan{}, 3).empty());
  QueryPlan plan;
  plan.clauses = {TermClause{"water", Field::kLabel}};
  const auto hits = index.Search(plan, 3);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].entity_id, "e0");
  EXPECT_NEAR(hits[0].score, 0.28768207245178085, 1e-12);
}

TEST(SearchTest, TiesBreakByDocId) {
  const Index index = Index::Build({Doc(0, {"fiji", "water"}),
                                    Doc(1, {"kroger", "water"}),
                                    Doc(2, {"bananas"})});
  QueryPlan baseline;
  baseline.clauses = {TermClause{"kro"}, TermClause{"water"}};
  auto hits = index.Search(baseline, 5);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].score, hits[1].score);
  EXPECT_EQ(hits[0].doc_id, 0u);

  QueryPlan wildcard;
  wildcard.clauses = {WildcardClause{"kro", {Field::kLabel}},
                      TermClause{"water"}};
  hits = index.Search(wildcard, 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].doc_id, 1u);
}

TEST(SearchTest, FuzzyMatchesPluralForm) {
  const Index index = Index::Build({Doc(0, {"marinated", "artichoke"}),
                                    Doc(1, {"hass", "avocado"})});
  QueryPlan plan;
  plan.clauses = {WildcardClause{"artichokes", {Field::kLabel}}};
  EXPECT_TRUE(index.Search(plan, 3).empty());
  plan.clauses.push_back(FuzzyClause{"artichokes", 2, Field::kLabel});
  const auto hits = index.Search(plan, 3);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].doc_id, 0u);
  EXPECT_EQ(hits[0].score, 1.0);
}

// Random micro-index plus a random plan over its vocabulary.
struct MicroCase {
  std::vector<EntityDocument> docs;
  QueryPlan plan;
};

MicroCase RandomCase(std::mt19937 &rng) {
  static const std::vector<std::string> vocab = {
      "ab", "ba", "abc", "cab", "b", "aab", "bca", "cc"};
  std::uniform_int_distribution<int> ndocs(1, 5), ntokens(1, 6), nclauses(0, 6),
      kind(0, 2), edits(0, 2), coin(0, 1);
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  MicroCase c;
  CollocationSet collocations = {{"ab", "ba"}, {"b", "cc", "ab"}, {"cab", "b"}};
  for (int d = ndocs(rng); d > 0; --d) {
    std::vector<std::string> tokens;
    for (int t = ntokens(rng); t > 0; --t) tokens.push_back(vocab[word(rng)]);
    EntityDocument doc = Doc(static_cast<DocId>(c.docs.size()), tokens);
    doc.phrase_terms = PhraseTerms(doc.label_tokens, collocations);
    c.docs.push_back(std::move(doc));
  }
  for (int i = nclauses(rng); i > 0; --i) {
    const std::string term = oracle::RandomString(rng, "abc", 1, 4);
    switch (kind(rng)) {
      case 0:
        c.plan.clauses.push_back(
            TermClause{coin(rng) ? vocab[word(rng)] : term,
                       coin(rng) ? Field::kLabel : Field::kPhrases});
        break;
      case 1: {
        std::vector<Field> fields = {Field::kLabel};
        if (coin(rng)) fields.push_back(coin(rng) ? Field::kMashed : Field::kPhrases);
        c.plan.clauses.push_back(WildcardClause{term, fields});
        break;
      }
      default:
        c.plan.clauses.push_back(FuzzyClause{term, edits(rng), Field::kLabel});
    }
  }
  return c;
}

TEST(SearchTest, MatchesDirectEvaluationBitForBit) {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 500; ++trial) {
    const MicroCase c = RandomCase(rng);
    const ScoringParams params{1.2, 0.75};
    const Index index = Index::Build(c.docs, params);
    const std::vector<double> scores = index.ScoreAll(c.plan);
    bool constant_only = true;
    for (const Clause &clause : c.plan.clauses) {
      constant_only = constant_only && !std::holds_alternative<TermClause>(clause);
    }
    for (std::size_t d = 0; d < c.docs.size(); ++d) {
      const double want =
          oracle::ScoreDocument(c.docs, d, c.plan, params.k1, params.b);
      ASSERT_EQ(scores[d], want) << "trial " << trial << " doc " << d;
      if (constant_only) ASSERT_EQ(scores[d], std::floor(scores[d]));
    }

    const auto hits = index.Search(c.plan, c.docs.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      ASSERT_GT(hits[i].score, 0.0);
      ASSERT_EQ(hits[i].score, scores[hits[i].doc_id]);
      if (i > 0) {
        ASSERT_TRUE(hits[i - 1].score > hits[i].score ||
                    (hits[i - 1].score == hits[i].score &&
                     hits[i - 1].doc_id < hits[i].doc_id));
      }
    }
  }
}

TEST(SearchTest, ConcurrentSearchesAgree) {
  std::mt19937 rng(77);
  const MicroCase c = RandomCase(rng);
  const Index index = Index::Build(c.docs);
  const auto expected = index.ScoreAll(c.plan);
  std::vector<std::thread> threads;
  std::vector<char> ok(8, 0);
  for (std::size_t t = 0; t < ok.size(); ++t) {
    threads.emplace_back([&, t] {
      bool same = true;
      for (int i = 0; i < 200; ++i) same = same && index.ScoreAll(c.plan) == expected;
      ok[t] = same;
    });
  }
  for (auto &t : threads) t.join();
  for (char v : ok) EXPECT_TRUE(v);
}

TEST(SnapshotTest, RoundTripSearchesIdentically) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const MicroCase c = RandomCase(rng);
    const Index index = Index::Build(c.docs, {0.9, 0.4});
    std::stringstream buffer;
    SaveIndex(index, buffer);
    const Index loaded = LoadIndex(buffer);
    EXPECT_EQ(loaded.params().k1, 0.9);
    EXPECT_EQ(loaded.documents(), index.documents());
    EXPECT_EQ(loaded.ScoreAll(c.plan), index.ScoreAll(c.plan));
  }
}

TEST(SnapshotTest, RejectsCorruptInput) {
  std::stringstream garbage("{not json");
  EXPECT_THROW(LoadIndex(garbage), std::runtime_error);
  std::stringstream wrong(R"({"format":"other","version":1})");
  EXPECT_THROW(LoadIndex(wrong), std::runtime_error);

  std::stringstream buffer;
  SaveIndex(Index::Build({Doc(0, {"a", "b"})}), buffer);
  std::string text = buffer.str();
  text.replace(text.find("\"doc_count\":1"), 13, "\"doc_count\":7");
  std::stringstream tampered(text);
  EXPECT_THROW(LoadIndex(tampered), std::runtime_error);
}

}  // namespace
}  // namespace rlink
