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

#include "rlink/textprep.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rlink {

namespace {

enum class CharClass { kSeparator, kApostrophe, kWord };

// Decodes one UTF-8 sequence starting at text[*pos] and advances *pos.
// Invalid sequences decode to U+FFFD and consume one byte.
char32_t DecodeUtf8(std::string_view text, std::size_t *pos) {
  const auto lead = static_cast<unsigned char>(text[*pos]);
  int length = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++*pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
  } else {
    ++*pos;
    return 0xFFFD;
  }
  if (*pos + length > text.size()) {
    ++*pos;
    return 0xFFFD;
  }
  for (int i = 1; i < length; ++i) {
    const auto next = static_cast<unsigned char>(text[*pos + i]);
    if ((next & 0xC0) != 0x80) {
      ++*pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (next & 0x3F);
  }
  *pos += length;
  return cp;
}

void AppendUtf8(char32_t cp, std::string *out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

CharClass Classify(char32_t cp) {
  if (cp == U'\'' || cp == 0x2019) return CharClass::kApostrophe;
  if (cp < 0x80) {
    const bool alnum = (cp >= U'a' && cp <= U'z') ||
                       (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9');
    return alnum ? CharClass::kWord : CharClass::kSeparator;
  }
  if (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7) {
    return CharClass::kWord;
  }
  return CharClass::kSeparator;
}

char32_t ToLower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

// Below this bound every cross product in CompareRatio fits in 128 bits.
constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 31;

// Sign of a.count / prod(a.components) - b.count / prod(b.components).
int CompareRatio(const CollocationStats &a, const CollocationStats &b) {
  using Wide = unsigned __int128;
  Wide left = a.count;
  Wide right = b.count;
  for (std::uint64_t c : b.component_counts) left *= c;
  for (std::uint64_t c : a.component_counts) right *= c;
  return left < right ? -1 : (left > right ? 1 : 0);
}

}  // namespace

TokenList Tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = DecodeUtf8(text, &pos);
    switch (Classify(cp)) {
      case CharClass::kWord:
        AppendUtf8(ToLower(cp), &current);
        break;
      case CharClass::kApostrophe:
        // Stripped without splitting the token.
        break;
      case CharClass::kSeparator:
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
        break;
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Dictionary BuildDictionary(const std::vector<std::string> &labels) {
  std::set<std::string, std::less<>> known;
  for (const std::string &label : labels) {
    for (std::string &token : Tokenize(label)) known.insert(std::move(token));
  }
  return Dictionary(std::move(known));
}

std::vector<std::string> Mash(const TokenList &tokens) {
  std::vector<std::string> mashed(tokens.size());
  std::string suffix;
  for (std::size_t i = tokens.size(); i-- > 0;) {
    suffix.insert(0, tokens[i]);
    mashed[i] = suffix;
  }
  return mashed;
}

double PmiFromCounts(std::uint64_t count,
                     const std::vector<std::uint64_t> &component_counts,
                     std::uint64_t total_tokens, std::uint64_t total_windows) {
  double joint = static_cast<double>(count) / static_cast<double>(total_windows);
  double marginals = 1.0;
  for (std::uint64_t c : component_counts) {
    marginals *= static_cast<double>(c) / static_cast<double>(total_tokens);
  }
  return std::log2(joint / marginals);
}

std::vector<CollocationStats> MineCollocations(
    const std::vector<std::string> &labels, int arity, std::uint64_t min_count,
    std::size_t top_k) {
  if (arity != 2 && arity != 3) {
    throw std::invalid_argument("collocation arity must be 2 or 3, got " +
                                std::to_string(arity));
  }
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");

  const auto n = static_cast<std::size_t>(arity);
  std::map<std::string, std::uint64_t> unigrams;
  std::map<Ngram, std::uint64_t> windows;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_windows = 0;
  for (const std::string &label : labels) {
    const TokenList tokens = Tokenize(label);
    for (const std::string &token : tokens) ++unigrams[token];
    total_tokens += tokens.size();
    if (tokens.size() < n) continue;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      ++windows[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
      ++total_windows;
    }
  }

  std::vector<CollocationStats> ranked;
  for (const auto &[ngram, count] : windows) {
    if (count < min_count) continue;
    CollocationStats stats;
    stats.ngram = ngram;
    stats.count = count;
    for (const std::string &token : ngram) {
      stats.component_counts.push_back(unigrams.at(token));
    }
    stats.total_tokens = total_tokens;
    stats.total_windows = total_windows;
    stats.pmi = RecomputePmi(stats);
    ranked.push_back(std::move(stats));
  }
  // W and B are shared by every candidate, so pmi order is the order of
  // count / prod(component_counts). Comparing that ratio exactly keeps
  // mathematically equal scores tied even when their doubles differ in the
  // last ulp. `windows` iterates in ngram order, so the stable sort leaves
  // ties lexicographic.
  const bool exact = std::all_of(unigrams.begin(), unigrams.end(),
                                 [](const auto &u) { return u.second < kExactLimit; });
  std::stable_sort(ranked.begin(), ranked.end(),
                   [exact](const CollocationStats &a, const CollocationStats &b) {
                     if (!exact) return a.pmi > b.pmi;
                     return CompareRatio(a, b) > 0;
                   });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

std::vector<std::string> PhraseTerms(const TokenList &tokens,
                                     const CollocationSet &collocations) {
  std::vector<std::string> phrases;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (std::size_t n : {3u, 2u}) {
      if (i + n > tokens.size()) continue;
      if (collocations.count(Ngram(tokens.begin() + i, tokens.begin() + i + n))) {
        matched = n;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    std::string phrase;
    for (std::size_t j = i; j < i + matched; ++j) phrase += tokens[j];
    phrases.push_back(std::move(phrase));
    i += matched;
  }
  return phrases;
}

std::u32string ToCodepoints(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) out.push_back(DecodeUtf8(text, &pos));
  return out;
}

std::string JoinNgram(const Ngram &ngram) {
  std::string joined;
  for (const std::string &token : ngram) {
    if (!joined.empty()) joined.push_back(' ');
    joined += token;
  }
  return joined;
}

}  // namespace rlink
