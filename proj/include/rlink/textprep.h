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

// Text analysis shared by indexing and query planning: tokenization, the
// entity vocabulary, mashed terms and PMI collocation mining.

#ifndef RLINK_TEXTPREP_H_
#define RLINK_TEXTPREP_H_

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rlink {

using TokenList = std::vector<std::string>;
using Ngram = std::vector<std::string>;

// Token-tuple set used to build phrase terms. Members are 2- or 3-tuples.
using CollocationSet = std::set<Ngram>;

// Lowercases and splits on every character that is neither alphanumeric nor
// an apostrophe, then strips the apostrophes ("Boar's" -> "boars"). Latin-1
// and Latin Extended-A/B letters count as alphanumeric; ASCII and Latin-1
// capitals are lowercased. U+2019 is treated as an apostrophe.
TokenList Tokenize(std::string_view text);

// Vocabulary of all tokens occurring in entity labels.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::set<std::string, std::less<>> known)
      : known_(std::move(known)) {}

  bool Contains(std::string_view token) const {
    return known_.find(token) != known_.end();
  }
  std::size_t size() const { return known_.size(); }
  const std::set<std::string, std::less<>> &known() const { return known_; }

 private:
  std::set<std::string, std::less<>> known_;
};

Dictionary BuildDictionary(const std::vector<std::string> &labels);

// Suffix concatenations: [t1..tn, t2..tn, ..., tn].
std::vector<std::string> Mash(const TokenList &tokens);

struct CollocationStats {
  Ngram ngram;
  std::uint64_t count = 0;                    // adjacent-window occurrences
  std::vector<std::uint64_t> component_counts;  // unigram count per token
  std::uint64_t total_tokens = 0;             // W
  std::uint64_t total_windows = 0;            // B for this arity
  double pmi = 0.0;                           // bits

  std::size_t arity() const { return ngram.size(); }
};

// log2((count / total_windows) / prod(component / total_tokens)).
double PmiFromCounts(std::uint64_t count,
                     const std::vector<std::uint64_t> &component_counts,
                     std::uint64_t total_tokens, std::uint64_t total_windows);

// Recomputes pmi from the counts a record carries.
inline double RecomputePmi(const CollocationStats &stats) {
  return PmiFromCounts(stats.count, stats.component_counts, stats.total_tokens,
                       stats.total_windows);
}

// Counts adjacent windows of `arity` tokens inside each tokenized label and
// ranks them by PMI descending, ties by ngram ascending. Windows never span
// two labels. Throws std::invalid_argument unless arity is 2 or 3,
// min_count >= 1 and top_k >= 1.
std::vector<CollocationStats> MineCollocations(
    const std::vector<std::string> &labels, int arity, std::uint64_t min_count,
    std::size_t top_k);

// Greedy left-to-right, non-overlapping: a trigram match is preferred over a
// bigram at each position and emits its concatenation.
std::vector<std::string> PhraseTerms(const TokenList &tokens,
                                     const CollocationSet &collocations);

// Decodes UTF-8; invalid bytes become U+FFFD.
std::u32string ToCodepoints(std::string_view text);

// Joins tokens with single spaces.
std::string JoinNgram(const Ngram &ngram);

}  // namespace rlink

#endif  // RLINK_TEXTPREP_H_
