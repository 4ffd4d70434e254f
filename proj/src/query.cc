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

#include "rlink/query.h"

#include <algorithm>

namespace rlink {

namespace {

std::string Canonical(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_' || c == ' ') c = '-';
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

std::vector<Field> WildcardTargets(Strategy strategy) {
  switch (strategy) {
    case Strategy::kBaseline:
    case Strategy::kWildcard:
      return {Field::kLabel};
    case Strategy::kMashed:
      return {Field::kLabel, Field::kMashed};
    case Strategy::kPhrases:
    case Strategy::kFuzzyPhrases:
      return {Field::kLabel, Field::kPhrases};
  }
  return {Field::kLabel};
}

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kBaseline:
      return "baseline";
    case Strategy::kWildcard:
      return "wildcard";
    case Strategy::kMashed:
      return "mashed";
    case Strategy::kPhrases:
      return "phrases";
    case Strategy::kFuzzyPhrases:
      return "fuzzy-phrases";
  }
  return "unknown";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  const std::string key = Canonical(name);
  for (Strategy strategy : kAllStrategies) {
    if (key == StrategyName(strategy)) return strategy;
  }
  if (key == "ngrams") return Strategy::kPhrases;
  if (key == "fuzzy-ngrams") return Strategy::kFuzzyPhrases;
  return std::nullopt;
}

QueryPlan BuildPlan(std::string_view mention, Strategy strategy,
                    const Dictionary &dictionary, const PlanOptions &options) {
  const TokenList tokens = Tokenize(mention);
  if (tokens.empty()) {
    throw EmptyPlanError("mention \"" + std::string(mention) +
                         "\" has no tokens");
  }
  QueryPlan plan;
  for (const std::string &token : tokens) {
    if (strategy == Strategy::kBaseline || dictionary.Contains(token)) {
      plan.clauses.push_back(TermClause{token, Field::kLabel});
      continue;
    }
    plan.clauses.push_back(WildcardClause{token, WildcardTargets(strategy)});
    if (strategy == Strategy::kFuzzyPhrases) {
      plan.clauses.push_back(
          FuzzyClause{token, options.fuzzy_max_edits, Field::kLabel});
    }
  }
  return plan;
}

std::string RenderPlan(const QueryPlan &plan, bool show_fields) {
  std::string out;
  for (const Clause &clause : plan.clauses) {
    if (!out.empty()) out.push_back(' ');
    if (const auto *term = std::get_if<TermClause>(&clause)) {
      out += term->term;
    } else if (const auto *wildcard = std::get_if<WildcardClause>(&clause)) {
      const std::string letters = Upper(wildcard->pattern);
      for (std::size_t i = 0; i < letters.size(); ++i) {
        out.push_back(letters[i]);
        // A star follows each whole code point, not each byte.
        const bool continues =
            i + 1 < letters.size() &&
            (static_cast<unsigned char>(letters[i + 1]) & 0xC0) == 0x80;
        if (!continues) out.push_back('*');
      }
      if (show_fields) {
        out.push_back('@');
        for (std::size_t i = 0; i < wildcard->fields.size(); ++i) {
          if (i > 0) out.push_back('+');
          out += FieldName(wildcard->fields[i]);
        }
      }
    } else if (const auto *fuzzy = std::get_if<FuzzyClause>(&clause)) {
      out += Upper(fuzzy->term);
      out.push_back('~');
      if (fuzzy->max_edits != 2) out += std::to_string(fuzzy->max_edits);
    }
  }
  return out;
}

}  // namespace rlink
