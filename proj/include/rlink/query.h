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

// Query construction. Each strategy extends the previous one:
//
//   baseline       every token is a BM25 term clause on the label field
//   wildcard       out-of-vocabulary tokens become wildcards on {label}
//   mashed         ... wildcards target {label, mashed}
//   phrases        ... wildcards target {label, phrases}
//   fuzzy-phrases  ... plus a fuzzy clause per out-of-vocabulary token

#ifndef RLINK_QUERY_H_
#define RLINK_QUERY_H_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rlink/plan.h"
#include "rlink/textprep.h"

namespace rlink {

enum class Strategy { kBaseline, kWildcard, kMashed, kPhrases, kFuzzyPhrases };

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::kBaseline, Strategy::kWildcard, Strategy::kMashed,
    Strategy::kPhrases, Strategy::kFuzzyPhrases};

// Command-line name: baseline, wildcard, mashed, phrases, fuzzy-phrases.
std::string_view StrategyName(Strategy strategy);

// Accepts the command-line names plus "ngrams" / "fuzzy-ngrams" and
// underscore spellings, case-insensitively.
std::optional<Strategy> ParseStrategy(std::string_view name);

// The mention produced no tokens.
class EmptyPlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlanOptions {
  int fuzzy_max_edits = 2;
};

// In-vocabulary tokens always stay term clauses; only out-of-vocabulary
// tokens are rewritten. Throws EmptyPlanError.
QueryPlan BuildPlan(std::string_view mention, Strategy strategy,
                    const Dictionary &dictionary,
                    const PlanOptions &options = {});

// Surface syntax, e.g. "K*R*O* water" or "A*R*T*I*C*H*O*K*E*S* ARTICHOKES~".
// With show_fields, wildcard clauses carry their targets: "K*R*O*@label+mashed".
std::string RenderPlan(const QueryPlan &plan, bool show_fields = false);

}  // namespace rlink

#endif  // RLINK_QUERY_H_
