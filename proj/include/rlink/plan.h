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

// Query plan vocabulary shared by the planner and the index.

#ifndef RLINK_PLAN_H_
#define RLINK_PLAN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rlink {

enum class Field : std::uint8_t { kLabel = 0, kMashed = 1, kPhrases = 2 };

inline constexpr std::size_t kFieldCount = 3;
inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::kLabel, Field::kMashed, Field::kPhrases};

std::string_view FieldName(Field field);
std::optional<Field> ParseField(std::string_view name);

// BM25-scored exact term.
struct TermClause {
  std::string term;
  Field field = Field::kLabel;

  bool operator==(const TermClause &) const = default;
};

// Anchored subsequence pattern p1*p2*...pm*. Scores 1.0 when any indexed
// term of any target field matches.
struct WildcardClause {
  std::string pattern;
  std::vector<Field> fields;

  bool operator==(const WildcardClause &) const = default;
};

// Scores 1.0 when any indexed term of the field is within max_edits.
struct FuzzyClause {
  std::string term;
  int max_edits = 2;
  Field field = Field::kLabel;

  bool operator==(const FuzzyClause &) const = default;
};

using Clause = std::variant<TermClause, WildcardClause, FuzzyClause>;

struct QueryPlan {
  std::vector<Clause> clauses;

  bool empty() const { return clauses.empty(); }
  bool operator==(const QueryPlan &) const = default;
};

}  // namespace rlink

#endif  // RLINK_PLAN_H_
