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

#include "commands.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fixture_data.h"
#include "rlink/corpus.h"

namespace rlink::cli {

namespace {

std::optional<Corpus> LoadInput(const Options &options, std::ostream &err) {
  const std::string where = options.input.value_or("<bundled fixture>");
  try {
    if (options.input) return LoadCorpus(*options.input);
    return ParseRecords(BundledFixture());
  } catch (const ParseError &e) {
    err << "error: " << where << ": malformed JSON at byte " << e.offset()
        << ": " << e.what() << '\n';
  } catch (const ValidationError &e) {
    err << "error: " << where << ": " << e.what() << '\n';
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

// Writes `text` to --output when given, otherwise to `out`.
int Emit(const Options &options, const std::string &text, std::ostream &out,
         std::ostream &err) {
  if (!options.output) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(*options.output, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << *options.output << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

bool WriteFile(const std::string &path, const std::string &text,
               std::ostream &err) {
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

std::optional<std::vector<Strategy>> SelectStrategies(const std::string &name,
                                                      std::ostream &err) {
  if (name == "all") {
    return std::vector<Strategy>(kAllStrategies.begin(), kAllStrategies.end());
  }
  std::vector<Strategy> selected;
  std::stringstream list(name);
  std::string item;
  while (std::getline(list, item, ',')) {
    const std::optional<Strategy> strategy = ParseStrategy(item);
    if (!strategy) {
      err << "error: unknown strategy \"" << item
          << "\" (expected baseline, wildcard, mashed, phrases, "
             "fuzzy-phrases or all)\n";
      return std::nullopt;
    }
    selected.push_back(*strategy);
  }
  if (selected.empty()) {
    err << "error: no strategy selected\n";
    return std::nullopt;
  }
  return selected;
}

std::string Fixed(double value, int precision) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
  return buffer;
}

void AppendCollocationTsv(const std::vector<CollocationStats> &ranked,
                          std::string *out) {
  for (const CollocationStats &stats : ranked) {
    *out += JoinNgram(stats.ngram);
    *out += '\t';
    *out += std::to_string(stats.count);
    *out += '\t';
    *out += Fixed(stats.pmi, 6);
    *out += '\n';
  }
}

}  // namespace

std::string_view BundledFixture() { return kBundledFixture; }

int RunMinePhrases(const Options &options, std::ostream &out,
                   std::ostream &err) {
  const std::optional<Corpus> corpus = LoadInput(options, err);
  if (!corpus) return kExitFailure;
  std::string tsv;
  if (!corpus->records.empty()) {
    // Documents carry the distinct entity labels in first-occurrence order.
    std::vector<std::string> labels;
    for (const EntityDocument &doc : BuildDocuments(*corpus, {})) {
      labels.push_back(doc.label);
    }
    try {
      for (int arity : {2, 3}) {
        AppendCollocationTsv(
            MineCollocations(labels, arity, options.config.pmi_min_count,
                             options.config.pmi_top_k),
            &tsv);
      }
    } catch (const std::invalid_argument &e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }
  return Emit(options, tsv, out, err);
}

int RunIndex(const Options &options, std::ostream &out, std::ostream &err) {
  const std::optional<Corpus> corpus = LoadInput(options, err);
  if (!corpus) return kExitFailure;
  try {
    const LinkingModel model = BuildModel(*corpus, options.config);
    std::ostringstream summary;
    summary << "documents\t" << model.index.doc_count() << '\n';
    summary << "dictionary\t" << model.dictionary.size() << '\n';
    summary << "bigrams\t" << model.bigrams.size() << '\n';
    summary << "trigrams\t" << model.trigrams.size() << '\n';
    for (Field field : kAllFields) {
      summary << FieldName(field) << "\tterms=" << model.index.TermCount(field)
              << "\tavgdl=" << Fixed(model.index.AvgDocLength(field), 6)
              << '\n';
    }
    if (options.output) {
      std::ofstream file(*options.output, std::ios::binary);
      SaveIndex(model.index, file);
      if (!file) {
        err << "error: cannot write " << *options.output << '\n';
        return kExitFailure;
      }
      summary << "snapshot\t" << *options.output << '\n';
    }
    out << summary.str();
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int RunLink(const Options &options, std::ostream &out, std::ostream &err) {
  const std::optional<std::vector<Strategy>> strategies =
      SelectStrategies(options.strategy, err);
  if (!strategies) return kExitUsage;
  const std::optional<Corpus> corpus = LoadInput(options, err);
  if (!corpus) return kExitFailure;

  std::ostringstream text;
  try {
    const LinkingModel model = BuildModel(*corpus, options.config);
    for (Strategy strategy : *strategies) {
      text << "strategy\t" << StrategyName(strategy) << '\n';
      QueryPlan plan;
      try {
        plan = BuildPlan(options.mention, strategy, model.dictionary,
                         PlanOptions{options.config.fuzzy_max_edits});
      } catch (const EmptyPlanError &) {
      }
      text << "plan\t" << RenderPlan(plan, /*show_fields=*/true) << '\n';
      const std::vector<SearchHit> hits =
          model.index.Search(plan, std::max<std::size_t>(1, options.top));
      if (hits.empty()) text << "(no match)\n";
      for (std::size_t i = 0; i < hits.size(); ++i) {
        text << i + 1 << '\t' << Fixed(hits[i].score, 6) << '\t'
             << hits[i].entity_id << '\t' << model.labels[hits[i].doc_id]
             << '\n';
      }
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return Emit(options, text.str(), out, err);
}

int RunEval(const Options &options, std::ostream &out, std::ostream &err) {
  const std::optional<std::vector<Strategy>> strategies =
      SelectStrategies(options.strategy, err);
  if (!strategies) return kExitUsage;
  if (options.format != "table" && options.format != "json" &&
      options.format != "tsv") {
    err << "error: unknown format \"" << options.format << "\"\n";
    return kExitUsage;
  }
  const std::optional<Corpus> corpus = LoadInput(options, err);
  if (!corpus) return kExitFailure;

  try {
    const GoldLinkSet gold = BuildGold(*corpus);
    const StrategyReport report =
        Evaluate(*corpus, *strategies, options.config);
    const std::string json = ReportToJson(report);
    std::ostringstream tsv;
    WritePredictionsTsv(report, gold, tsv);

    if (options.json_path && !WriteFile(*options.json_path, json, err)) {
      return kExitFailure;
    }
    if (options.tsv_path && !WriteFile(*options.tsv_path, tsv.str(), err)) {
      return kExitFailure;
    }
    if (options.format == "json") return Emit(options, json, out, err);
    if (options.format == "tsv") return Emit(options, tsv.str(), out, err);
    std::ostringstream table;
    WriteReportTable(report, table);
    return Emit(options, table.str(), out, err);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Link shorthand receipt line items to catalog entities."};
  app.require_subcommand(1);
  Options options;

  const auto add_common = [&options](CLI::App *sub) {
    sub->add_option("--input", options.input,
                    "Corpus JSON (defaults to the bundled fixture)");
    sub->add_option("--output", options.output, "Write output to PATH");
    sub->add_option("--k1", options.config.scoring.k1, "BM25 k1")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--b", options.config.scoring.b, "BM25 b")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--max-edits", options.config.fuzzy_max_edits,
                    "Fuzzy clause edit bound")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--pmi-min-count", options.config.pmi_min_count,
                    "Minimum collocation count")
        ->check(CLI::PositiveNumber);
    sub->add_option("--pmi-top-k", options.config.pmi_top_k,
                    "Collocations kept per arity")
        ->check(CLI::PositiveNumber);
  };

  CLI::App *mine =
      app.add_subcommand("mine-phrases", "Rank label bigrams and trigrams by PMI");
  add_common(mine);

  CLI::App *index = app.add_subcommand("index", "Build the entity index");
  add_common(index);

  CLI::App *link = app.add_subcommand("link", "Link a single mention");
  add_common(link);
  options.strategy = "all";
  link->add_option("mention", options.mention, "Raw line item text")
      ->required();
  link->add_option("--strategy", options.strategy,
                   "Strategy name, comma list or all");
  link->add_option("--top", options.top, "Results to print")
      ->check(CLI::PositiveNumber);

  CLI::App *eval = app.add_subcommand("eval", "Evaluate linking accuracy");
  add_common(eval);
  eval->add_option("--strategy", options.strategy,
                   "Strategy name, comma list or all");
  eval->add_option("--format", options.format, "table, json or tsv");
  eval->add_option("--json", options.json_path, "Also write JSON report");
  eval->add_option("--tsv", options.tsv_path, "Also write per-mention TSV");
  eval->add_option("--threads", options.config.threads, "Linking threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (mine->parsed()) return RunMinePhrases(options, out, err);
  if (index->parsed()) return RunIndex(options, out, err);
  if (link->parsed()) return RunLink(options, out, err);
  return RunEval(options, out, err);
}

}  // namespace rlink::cli
