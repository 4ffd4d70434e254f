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

// Linking evaluation. Every unique mention is linked to the top-1 search
// result; a hit is a prediction inside the mention's gold set, and accuracy
// is hits over unique mentions.

#ifndef RLINK_EVAL_H_
#define RLINK_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rlink/corpus.h"
#include "rlink/index.h"
#include "rlink/query.h"
#include "rlink/textprep.h"

namespace rlink {

struct LinkerConfig {
  ScoringParams scoring;
  int fuzzy_max_edits = 2;
  std::uint64_t pmi_min_count = 1;
  std::size_t pmi_top_k = 200;  // per arity
  std::size_t threads = 1;
  std::size_t diagnostic_k = 5;  // reported only, never used for accuracy
};

// Everything derived from the entity side of a corpus.
struct LinkingModel {
  Dictionary dictionary;
  std::vector<CollocationStats> bigrams;
  std::vector<CollocationStats> trigrams;
  CollocationSet collocations;
  Index index;
  std::vector<std::string> labels;  // by doc_id
};

// One document per distinct entity id, in first-occurrence order; the label
// is the first "web" text seen for that id.
std::vector<EntityDocument> BuildDocuments(const Corpus &corpus,
                                           const CollocationSet &collocations);

// Throws std::invalid_argument on an empty corpus.
LinkingModel BuildModel(const Corpus &corpus, const LinkerConfig &config);

struct Prediction {
  std::string mention;
  std::optional<std::string> predicted_entity;
  double score = 0.0;
  bool hit = false;
  bool hit_at_k = false;  // diagnostic
};

// Top-1 link. An empty plan or no positive-scoring document yields no
// prediction. Throws std::invalid_argument when gold lacks the mention.
Prediction LinkMention(const Index &index, const QueryPlan &plan,
                       const std::string &mention, const GoldLinkSet &gold,
                       std::size_t diagnostic_k = 5);

struct StrategyResult {
  Strategy strategy = Strategy::kBaseline;
  double accuracy = 0.0;
  std::size_t hits = 0;
  std::size_t total = 0;
  std::size_t hits_at_k = 0;
  std::vector<Prediction> predictions;  // gold.mention_order
};

struct StrategyReport {
  std::vector<StrategyResult> results;
  std::size_t diagnostic_k = 5;
};

StrategyResult EvaluateStrategy(const LinkingModel &model,
                                const GoldLinkSet &gold, Strategy strategy,
                                const LinkerConfig &config);

// Builds gold and model once, then runs each strategy in the given order.
StrategyReport Evaluate(const Corpus &corpus,
                        const std::vector<Strategy> &strategies,
                        const LinkerConfig &config);

void WriteReportTable(const StrategyReport &report, std::ostream &out);
// {"strategy": {"accuracy": a, "hits": h, "total": t}, ...} in report order.
std::string ReportToJson(const StrategyReport &report);
// mention<TAB>predicted<TAB>gold_ids<TAB>hit, one block per strategy with a
// leading "# strategy" line when the report holds more than one.
void WritePredictionsTsv(const StrategyReport &report, const GoldLinkSet &gold,
                         std::ostream &out);

}  // namespace rlink

#endif  // RLINK_EVAL_H_
