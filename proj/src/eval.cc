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

#include "rlink/eval.h"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace rlink {

namespace {

std::vector<std::pair<std::string, std::string>> DistinctEntities(
    const Corpus &corpus) {
  std::vector<std::pair<std::string, std::string>> entities;  // (id, label)
  std::unordered_map<std::string, std::size_t> seen;
  for (const LinkRecord &record : corpus.records) {
    if (seen.emplace(record.entity_id, entities.size()).second) {
      entities.emplace_back(record.entity_id, record.web);
    }
  }
  return entities;
}

Prediction LinkOne(const LinkingModel &model, const GoldLinkSet &gold,
                   const std::string &mention, Strategy strategy,
                   const LinkerConfig &config) {
  QueryPlan plan;
  try {
    plan = BuildPlan(mention, strategy, model.dictionary,
                     PlanOptions{config.fuzzy_max_edits});
  } catch (const EmptyPlanError &) {
    // Linked with an empty plan: recorded as a miss.
  }
  return LinkMention(model.index, plan, mention, gold, config.diagnostic_k);
}

std::string FormatFixed(double value, int precision) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
  return buffer;
}

}  // namespace

std::vector<EntityDocument> BuildDocuments(const Corpus &corpus,
                                           const CollocationSet &collocations) {
  std::vector<EntityDocument> docs;
  for (auto &[id, label] : DistinctEntities(corpus)) {
    EntityDocument doc;
    doc.doc_id = static_cast<DocId>(docs.size());
    doc.entity_id = id;
    doc.label = label;
    doc.label_tokens = Tokenize(label);
    doc.mashed_terms = Mash(doc.label_tokens);
    doc.phrase_terms = PhraseTerms(doc.label_tokens, collocations);
    docs.push_back(std::move(doc));
  }
  return docs;
}

LinkingModel BuildModel(const Corpus &corpus, const LinkerConfig &config) {
  if (corpus.records.empty()) {
    throw std::invalid_argument("cannot build a linking model from an empty "
                                "corpus");
  }
  std::vector<std::string> labels;
  for (auto &[id, label] : DistinctEntities(corpus)) labels.push_back(label);

  Dictionary dictionary = BuildDictionary(labels);
  std::vector<CollocationStats> bigrams =
      MineCollocations(labels, 2, config.pmi_min_count, config.pmi_top_k);
  std::vector<CollocationStats> trigrams =
      MineCollocations(labels, 3, config.pmi_min_count, config.pmi_top_k);
  CollocationSet collocations;
  for (const auto &stats : bigrams) collocations.insert(stats.ngram);
  for (const auto &stats : trigrams) collocations.insert(stats.ngram);

  Index index =
      Index::Build(BuildDocuments(corpus, collocations), config.scoring);
  return LinkingModel{std::move(dictionary), std::move(bigrams),
                      std::move(trigrams),   std::move(collocations),
                      std::move(index),      std::move(labels)};
}

Prediction LinkMention(const Index &index, const QueryPlan &plan,
                       const std::string &mention, const GoldLinkSet &gold,
                       std::size_t diagnostic_k) {
  const std::set<std::string> *expected = gold.Find(mention);
  if (expected == nullptr) {
    throw std::invalid_argument("mention not in gold set: " + mention);
  }
  Prediction prediction;
  prediction.mention = mention;
  const std::vector<SearchHit> hits =
      index.Search(plan, std::max<std::size_t>(1, diagnostic_k));
  if (hits.empty()) return prediction;
  prediction.predicted_entity = hits.front().entity_id;
  prediction.score = hits.front().score;
  prediction.hit = expected->count(hits.front().entity_id) > 0;
  prediction.hit_at_k =
      std::any_of(hits.begin(), hits.end(), [expected](const SearchHit &h) {
        return expected->count(h.entity_id) > 0;
      });
  return prediction;
}

StrategyResult EvaluateStrategy(const LinkingModel &model,
                                const GoldLinkSet &gold, Strategy strategy,
                                const LinkerConfig &config) {
  const std::vector<std::string> &mentions = gold.mention_order;
  StrategyResult result;
  result.strategy = strategy;
  result.predictions.resize(mentions.size());

  // Each worker owns a strided slice of the output slots.
  const std::size_t workers =
      std::clamp<std::size_t>(config.threads, 1, std::max<std::size_t>(
                                                     1, mentions.size()));
  const auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < mentions.size(); i += workers) {
      result.predictions[i] =
          LinkOne(model, gold, mentions[i], strategy, config);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (std::thread &t : pool) t.join();
  }

  for (const Prediction &p : result.predictions) {
    if (p.hit) ++result.hits;
    if (p.hit_at_k) ++result.hits_at_k;
  }
  result.total = mentions.size();
  result.accuracy = result.total == 0
                        ? 0.0
                        : static_cast<double>(result.hits) /
                              static_cast<double>(result.total);
  return result;
}

StrategyReport Evaluate(const Corpus &corpus,
                        const std::vector<Strategy> &strategies,
                        const LinkerConfig &config) {
  const GoldLinkSet gold = BuildGold(corpus);
  const LinkingModel model = BuildModel(corpus, config);
  StrategyReport report;
  report.diagnostic_k = config.diagnostic_k;
  for (Strategy strategy : strategies) {
    report.results.push_back(EvaluateStrategy(model, gold, strategy, config));
  }
  return report;
}

void WriteReportTable(const StrategyReport &report, std::ostream &out) {
  char line[128];
  std::snprintf(line, sizeof(line), "%-15s %9s %11s %9s\n", "strategy",
                "accuracy", "hits/total",
                ("hit@" + std::to_string(report.diagnostic_k)).c_str());
  out << line;
  for (const StrategyResult &r : report.results) {
    const std::string ratio =
        std::to_string(r.hits) + "/" + std::to_string(r.total);
    const double at_k = r.total == 0 ? 0.0
                                     : static_cast<double>(r.hits_at_k) /
                                           static_cast<double>(r.total);
    std::snprintf(line, sizeof(line), "%-15s %9s %11s %9s\n",
                  std::string(StrategyName(r.strategy)).c_str(),
                  FormatFixed(r.accuracy, 4).c_str(), ratio.c_str(),
                  FormatFixed(at_k, 4).c_str());
    out << line;
  }
}

std::string ReportToJson(const StrategyReport &report) {
  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  for (const StrategyResult &r : report.results) {
    nlohmann::ordered_json entry;
    entry["accuracy"] = r.accuracy;
    entry["hits"] = r.hits;
    entry["total"] = r.total;
    root[std::string(StrategyName(r.strategy))] = std::move(entry);
  }
  return root.dump(2) + "\n";
}

void WritePredictionsTsv(const StrategyReport &report, const GoldLinkSet &gold,
                         std::ostream &out) {
  const bool headed = report.results.size() > 1;
  for (const StrategyResult &r : report.results) {
    if (headed) out << "# " << StrategyName(r.strategy) << '\n';
    for (const Prediction &p : r.predictions) {
      std::string gold_ids;
      if (const auto *ids = gold.Find(p.mention)) {
        for (const std::string &id : *ids) {
          if (!gold_ids.empty()) gold_ids.push_back(',');
          gold_ids += id;
        }
      }
      out << p.mention << '\t' << p.predicted_entity.value_or("") << '\t'
          << gold_ids << '\t' << (p.hit ? 1 : 0) << '\n';
    }
  }
}

}  // namespace rlink
