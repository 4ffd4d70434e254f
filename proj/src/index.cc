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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace rlink {

namespace {

bool IsAscii(std::string_view s) {
  for (char c : s) {
    if (static_cast<unsigned char>(c) >= 0x80) return false;
  }
  return true;
}

template <typename CharT>
bool AnchoredSubsequence(std::basic_string_view<CharT> pattern,
                         std::basic_string_view<CharT> term) {
  if (pattern.empty() || term.empty() || pattern[0] != term[0]) return false;
  std::size_t next = 1;
  for (std::size_t i = 1; i < term.size() && next < pattern.size(); ++i) {
    if (term[i] == pattern[next]) ++next;
  }
  return next == pattern.size();
}

template <typename CharT>
int Levenshtein(std::basic_string_view<CharT> a,
                std::basic_string_view<CharT> b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Same recurrence, abandoned as soon as a whole row exceeds the bound. Row
// minima never decrease, so the early exit is exact.
template <typename CharT>
bool BoundedLevenshtein(std::basic_string_view<CharT> a,
                        std::basic_string_view<CharT> b, int max_edits) {
  const auto la = static_cast<int>(a.size());
  const auto lb = static_cast<int>(b.size());
  if (std::abs(la - lb) > max_edits) return false;
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    int row_min = cur[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > max_edits) return false;
    std::swap(prev, cur);
  }
  return prev[b.size()] <= max_edits;
}

const PostingList *FindPostings(const std::vector<PostingList> &postings,
                                std::string_view term) {
  auto it = std::lower_bound(
      postings.begin(), postings.end(), term,
      [](const PostingList &p, std::string_view t) { return p.term < t; });
  if (it == postings.end() || it->term != term) return nullptr;
  return &*it;
}

// One constant-score contribution per matching document.
void AddConstant(const std::vector<char> &matched, std::vector<double> *scores) {
  for (std::size_t d = 0; d < matched.size(); ++d) {
    if (matched[d]) (*scores)[d] += 1.0;
  }
}

}  // namespace

std::string_view FieldName(Field field) {
  switch (field) {
    case Field::kLabel:
      return "label";
    case Field::kMashed:
      return "mashed";
    case Field::kPhrases:
      return "phrases";
  }
  return "unknown";
}

std::optional<Field> ParseField(std::string_view name) {
  for (Field field : kAllFields) {
    if (FieldName(field) == name) return field;
  }
  return std::nullopt;
}

const std::vector<std::string> &EntityDocument::terms(Field field) const {
  switch (field) {
    case Field::kLabel:
      return label_tokens;
    case Field::kMashed:
      return mashed_terms;
    case Field::kPhrases:
      return phrase_terms;
  }
  return label_tokens;
}

bool WildcardMatch(std::string_view pattern, std::string_view term) {
  if (IsAscii(pattern) && IsAscii(term)) {
    return AnchoredSubsequence(pattern, term);
  }
  const std::u32string p = ToCodepoints(pattern);
  const std::u32string t = ToCodepoints(term);
  return AnchoredSubsequence(std::u32string_view(p), std::u32string_view(t));
}

int EditDistance(std::string_view a, std::string_view b) {
  if (IsAscii(a) && IsAscii(b)) return Levenshtein(a, b);
  const std::u32string ca = ToCodepoints(a);
  const std::u32string cb = ToCodepoints(b);
  return Levenshtein(std::u32string_view(ca), std::u32string_view(cb));
}

bool WithinEditDistance(std::string_view a, std::string_view b,
                        int max_edits) {
  if (max_edits < 0) return false;
  if (IsAscii(a) && IsAscii(b)) return BoundedLevenshtein(a, b, max_edits);
  const std::u32string ca = ToCodepoints(a);
  const std::u32string cb = ToCodepoints(b);
  return BoundedLevenshtein(std::u32string_view(ca), std::u32string_view(cb),
                            max_edits);
}

Index Index::Build(std::vector<EntityDocument> docs, ScoringParams params) {
  if (docs.empty()) throw std::invalid_argument("cannot index zero documents");
  if (!(params.k1 >= 0.0)) throw std::invalid_argument("k1 must be >= 0");
  if (!(params.b >= 0.0 && params.b <= 1.0)) {
    throw std::invalid_argument("b must be in [0, 1]");
  }

  Index index;
  index.params_ = params;
  index.docs_.resize(docs.size());
  std::vector<char> seen(docs.size(), 0);
  for (EntityDocument &doc : docs) {
    if (doc.doc_id >= docs.size()) {
      throw std::invalid_argument("doc_id " + std::to_string(doc.doc_id) +
                                  " out of range for " +
                                  std::to_string(docs.size()) + " documents");
    }
    if (seen[doc.doc_id]) {
      throw std::invalid_argument("duplicate doc_id " +
                                  std::to_string(doc.doc_id));
    }
    if (doc.label_tokens.empty()) {
      throw std::invalid_argument("document " + std::to_string(doc.doc_id) +
                                  " has no label tokens");
    }
    seen[doc.doc_id] = 1;
    const DocId id = doc.doc_id;
    index.docs_[id] = std::move(doc);
  }

  for (Field field : kAllFields) {
    FieldIndex &fi = index.fields_[static_cast<std::size_t>(field)];
    std::map<std::string, std::vector<Posting>, std::less<>> inverted;
    fi.doc_lengths.resize(index.docs_.size());
    for (const EntityDocument &doc : index.docs_) {
      const std::vector<std::string> &terms = doc.terms(field);
      fi.doc_lengths[doc.doc_id] = static_cast<std::uint32_t>(terms.size());
      fi.total_length += terms.size();
      for (const std::string &term : terms) {
        std::vector<Posting> &entries = inverted[term];
        // Documents are visited in doc_id order, so a repeat is always last.
        if (!entries.empty() && entries.back().doc_id == doc.doc_id) {
          ++entries.back().term_frequency;
        } else {
          entries.push_back({doc.doc_id, 1});
        }
      }
    }
    fi.avgdl = static_cast<double>(fi.total_length) /
               static_cast<double>(index.docs_.size());
    fi.postings.reserve(inverted.size());
    for (auto &[term, entries] : inverted) {
      fi.postings.push_back({term, field, std::move(entries)});
    }
    for (std::size_t i = 0; i < fi.postings.size(); ++i) {
      const auto lead = static_cast<unsigned char>(fi.postings[i].term[0]);
      fi.by_first_byte[lead].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return index;
}

const PostingList *Index::Postings(Field field, std::string_view term) const {
  return FindPostings(field_index(field).postings, term);
}

std::size_t Index::TermCount(Field field) const {
  return field_index(field).postings.size();
}

std::uint32_t Index::DocLength(Field field, DocId doc_id) const {
  return field_index(field).doc_lengths.at(doc_id);
}

double Index::AvgDocLength(Field field) const {
  return field_index(field).avgdl;
}

std::uint64_t Index::TotalLength(Field field) const {
  return field_index(field).total_length;
}

double Index::Idf(Field field, std::string_view term) const {
  const PostingList *postings = Postings(field, term);
  const double n =
      postings ? static_cast<double>(postings->document_frequency()) : 0.0;
  const double total = static_cast<double>(docs_.size());
  return std::log(1.0 + (total - n + 0.5) / (n + 0.5));
}

std::uint32_t Index::TermFrequency(Field field, std::string_view term,
                                   DocId doc_id) const {
  const PostingList *postings = Postings(field, term);
  if (postings == nullptr) return 0;
  auto it = std::lower_bound(
      postings->entries.begin(), postings->entries.end(), doc_id,
      [](const Posting &p, DocId id) { return p.doc_id < id; });
  if (it == postings->entries.end() || it->doc_id != doc_id) return 0;
  return it->term_frequency;
}

double Index::Bm25TermScore(Field field, std::string_view term,
                            DocId doc_id) const {
  const std::uint32_t tf = TermFrequency(field, term, doc_id);
  if (tf == 0) return 0.0;
  const FieldIndex &fi = field_index(field);
  const double f = static_cast<double>(tf);
  const double dl = static_cast<double>(fi.doc_lengths[doc_id]);
  const double k1 = params_.k1;
  const double b = params_.b;
  return Idf(field, term) * (f * (k1 + 1.0)) /
         (f + k1 * (1.0 - b + b * dl / fi.avgdl));
}

void Index::ForEachWildcardTerm(
    Field field, std::string_view pattern,
    const std::function<void(const PostingList &)> &fn) const {
  if (pattern.empty()) return;
  const FieldIndex &fi = field_index(field);
  const auto lead = static_cast<unsigned char>(pattern[0]);
  for (std::uint32_t i : fi.by_first_byte[lead]) {
    const PostingList &postings = fi.postings[i];
    if (WildcardMatch(pattern, postings.term)) fn(postings);
  }
}

void Index::ForEachFuzzyTerm(
    Field field, std::string_view term, int max_edits,
    const std::function<void(const PostingList &)> &fn) const {
  for (const PostingList &postings : field_index(field).postings) {
    if (WithinEditDistance(term, postings.term, max_edits)) fn(postings);
  }
}

std::vector<double> Index::ScoreAll(const QueryPlan &plan) const {
  std::vector<double> scores(docs_.size(), 0.0);
  std::vector<char> matched(docs_.size());
  const auto mark = [&matched](const PostingList &postings) {
    for (const Posting &p : postings.entries) matched[p.doc_id] = 1;
  };
  for (const Clause &clause : plan.clauses) {
    if (const auto *term = std::get_if<TermClause>(&clause)) {
      const PostingList *postings = Postings(term->field, term->term);
      if (postings == nullptr) continue;
      for (const Posting &p : postings->entries) {
        scores[p.doc_id] += Bm25TermScore(term->field, term->term, p.doc_id);
      }
    } else if (const auto *wildcard = std::get_if<WildcardClause>(&clause)) {
      std::fill(matched.begin(), matched.end(), 0);
      for (Field field : wildcard->fields) {
        ForEachWildcardTerm(field, wildcard->pattern, mark);
      }
      AddConstant(matched, &scores);
    } else if (const auto *fuzzy = std::get_if<FuzzyClause>(&clause)) {
      std::fill(matched.begin(), matched.end(), 0);
      ForEachFuzzyTerm(fuzzy->field, fuzzy->term, fuzzy->max_edits, mark);
      AddConstant(matched, &scores);
    }
  }
  return scores;
}

std::vector<SearchHit> Index::Search(const QueryPlan &plan,
                                     std::size_t k) const {
  if (plan.empty() || k == 0) return {};
  const std::vector<double> scores = ScoreAll(plan);
  std::vector<DocId> ranked;
  for (DocId d = 0; d < scores.size(); ++d) {
    if (scores[d] > 0.0) ranked.push_back(d);
  }
  const auto better = [&scores](DocId a, DocId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  const std::size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + keep, ranked.end(),
                    better);
  std::vector<SearchHit> hits;
  hits.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const DocId d = ranked[i];
    hits.push_back({d, docs_[d].entity_id, scores[d]});
  }
  return hits;
}

namespace {

constexpr const char *kSnapshotFormat = "rlink-index";
constexpr int kSnapshotVersion = 1;

}  // namespace

void SaveIndex(const Index &index, std::ostream &out) {
  nlohmann::ordered_json root;
  root["format"] = kSnapshotFormat;
  root["version"] = kSnapshotVersion;
  root["params"] = {{"k1", index.params().k1}, {"b", index.params().b}};
  nlohmann::ordered_json stats;
  stats["doc_count"] = index.doc_count();
  for (Field field : kAllFields) {
    stats["total_length"][std::string(FieldName(field))] =
        index.TotalLength(field);
    stats["terms"][std::string(FieldName(field))] = index.TermCount(field);
  }
  root["stats"] = stats;
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const EntityDocument &doc : index.documents()) {
    docs.push_back({{"doc_id", doc.doc_id},
                    {"entity_id", doc.entity_id},
                    {"label", doc.label},
                    {"label_tokens", doc.label_tokens},
                    {"mashed_terms", doc.mashed_terms},
                    {"phrase_terms", doc.phrase_terms}});
  }
  root["documents"] = std::move(docs);
  out << root.dump() << '\n';
}

Index LoadIndex(std::istream &in) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw std::runtime_error(std::string("index snapshot: ") + e.what());
  }
  try {
    if (root.at("format") != kSnapshotFormat) {
      throw std::runtime_error("index snapshot: unknown format");
    }
    if (root.at("version") != kSnapshotVersion) {
      throw std::runtime_error("index snapshot: unsupported version " +
                               root.at("version").dump());
    }
    ScoringParams params;
    params.k1 = root.at("params").at("k1").get<double>();
    params.b = root.at("params").at("b").get<double>();
    std::vector<EntityDocument> docs;
    for (const auto &d : root.at("documents")) {
      EntityDocument doc;
      doc.doc_id = d.at("doc_id").get<DocId>();
      doc.entity_id = d.at("entity_id").get<std::string>();
      doc.label = d.at("label").get<std::string>();
      doc.label_tokens = d.at("label_tokens").get<TokenList>();
      doc.mashed_terms = d.at("mashed_terms").get<std::vector<std::string>>();
      doc.phrase_terms = d.at("phrase_terms").get<std::vector<std::string>>();
      docs.push_back(std::move(doc));
    }
    Index index = Index::Build(std::move(docs), params);
    const auto &stats = root.at("stats");
    bool consistent = stats.at("doc_count").get<std::size_t>() ==
                      index.doc_count();
    for (Field field : kAllFields) {
      const std::string name(FieldName(field));
      consistent = consistent &&
                   stats.at("total_length").at(name).get<std::uint64_t>() ==
                       index.TotalLength(field) &&
                   stats.at("terms").at(name).get<std::size_t>() ==
                       index.TermCount(field);
    }
    if (!consistent) {
      throw std::runtime_error("index snapshot: stats do not match documents");
    }
    return index;
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("index snapshot: ") + e.what());
  }
}

}  // namespace rlink
