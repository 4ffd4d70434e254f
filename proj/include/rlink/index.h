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

// Immutable three-field inverted index over entity documents.
//
// Term clauses are scored with BM25:
//
//   score(D, q) = idf(q) * f(q,D) * (k1 + 1) / (f(q,D) + k1 * (1 - b + b * |D| / avgdl))
//   idf(q)      = ln(1 + (N - n + 0.5) / (n + 0.5))
//
// where |D| and avgdl are measured in the clause's field. Wildcard and fuzzy
// clauses are constant-score: 1.0 if any indexed term matches, else 0.

#ifndef RLINK_INDEX_H_
#define RLINK_INDEX_H_

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rlink/plan.h"
#include "rlink/textprep.h"

namespace rlink {

using DocId = std::uint32_t;

struct EntityDocument {
  DocId doc_id = 0;
  std::string entity_id;
  std::string label;  // display only; never indexed directly
  TokenList label_tokens;
  std::vector<std::string> mashed_terms;
  std::vector<std::string> phrase_terms;

  const std::vector<std::string> &terms(Field field) const;
  bool operator==(const EntityDocument &) const = default;
};

struct ScoringParams {
  double k1 = 1.2;
  double b = 0.75;
};

struct Posting {
  DocId doc_id;
  std::uint32_t term_frequency;

  bool operator==(const Posting &) const = default;
};

struct PostingList {
  std::string term;
  Field field = Field::kLabel;
  std::vector<Posting> entries;  // doc_id ascending, unique

  std::size_t document_frequency() const { return entries.size(); }
};

struct SearchHit {
  DocId doc_id;
  std::string entity_id;
  double score;
};

// Anchored subsequence match: term starts with pattern[0] and contains the
// remaining pattern characters in order. Compares code points.
bool WildcardMatch(std::string_view pattern, std::string_view term);

// Levenshtein distance over code points.
int EditDistance(std::string_view a, std::string_view b);

// EditDistance(a, b) <= max_edits, with early termination.
bool WithinEditDistance(std::string_view a, std::string_view b, int max_edits);

class Index {
 public:
  // Documents may arrive in any order but their doc_ids must be exactly
  // 0..N-1. Throws std::invalid_argument on an empty list, a duplicate or
  // out-of-range doc_id, empty label_tokens, or invalid params.
  static Index Build(std::vector<EntityDocument> docs,
                     ScoringParams params = {});

  std::size_t doc_count() const { return docs_.size(); }
  const ScoringParams &params() const { return params_; }
  const EntityDocument &document(DocId doc_id) const { return docs_.at(doc_id); }
  const std::vector<EntityDocument> &documents() const { return docs_; }

  // nullptr when the term is not indexed in the field.
  const PostingList *Postings(Field field, std::string_view term) const;
  std::size_t TermCount(Field field) const;

  std::uint32_t DocLength(Field field, DocId doc_id) const;
  double AvgDocLength(Field field) const;
  std::uint64_t TotalLength(Field field) const;

  double Idf(Field field, std::string_view term) const;
  std::uint32_t TermFrequency(Field field, std::string_view term,
                              DocId doc_id) const;
  double Bm25TermScore(Field field, std::string_view term, DocId doc_id) const;

  // Calls fn for every indexed term of the field that the pattern matches.
  void ForEachWildcardTerm(Field field, std::string_view pattern,
                           const std::function<void(const PostingList &)> &fn)
      const;
  void ForEachFuzzyTerm(Field field, std::string_view term, int max_edits,
                        const std::function<void(const PostingList &)> &fn)
      const;

  // Per-document clause scores summed in plan order. Documents with a
  // non-positive total are dropped; ordering is score descending, then
  // doc_id ascending.
  std::vector<SearchHit> Search(const QueryPlan &plan, std::size_t k) const;

  // Scores every document (including zeros), indexed by doc_id.
  std::vector<double> ScoreAll(const QueryPlan &plan) const;

 private:
  struct FieldIndex {
    std::vector<PostingList> postings;  // term ascending
    // Positions in `postings` grouped by the term's leading byte.
    std::array<std::vector<std::uint32_t>, 256> by_first_byte;
    std::vector<std::uint32_t> doc_lengths;
    std::uint64_t total_length = 0;
    double avgdl = 0.0;
  };

  Index() = default;
  const FieldIndex &field_index(Field field) const {
    return fields_[static_cast<std::size_t>(field)];
  }

  ScoringParams params_;
  std::vector<EntityDocument> docs_;
  std::array<FieldIndex, kFieldCount> fields_;
};

// Versioned JSON snapshot. LoadIndex(SaveIndex(ix)) searches identically.
void SaveIndex(const Index &index, std::ostream &out);
Index LoadIndex(std::istream &in);

}  // namespace rlink

#endif  // RLINK_INDEX_H_
