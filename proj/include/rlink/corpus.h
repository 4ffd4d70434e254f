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

// Receipt corpus ingestion. A corpus is the joined receipt data: one record
// per scanned line item, pairing the raw shorthand mention with the label and
// id of the catalog entity it was resolved to.

#ifndef RLINK_CORPUS_H_
#define RLINK_CORPUS_H_

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rlink {

// Malformed JSON input. offset() is the byte position reported by the parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed JSON that does not describe a corpus. item_index() is the
// zero-based position of the offending line item in corpus order.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string &what, std::size_t item_index)
      : std::runtime_error(what), item_index_(item_index) {}

  std::size_t item_index() const { return item_index_; }

 private:
  std::size_t item_index_;
};

struct LinkRecord {
  std::string raw;        // scanned mention, e.g. "STO BABY SPINACH"
  std::string web;        // entity label
  std::string entity_id;  // succinct entity key

  bool operator==(const LinkRecord &other) const = default;
};

struct Corpus {
  std::vector<LinkRecord> records;
  std::size_t receipt_count = 0;

  bool operator==(const Corpus &other) const = default;
};

// Ambiguity-aware ground truth: every unique mention maps to all the entity
// ids it was ever linked to.
struct GoldLinkSet {
  std::map<std::string, std::set<std::string>> links;
  std::vector<std::string> mention_order;  // first-occurrence order

  const std::set<std::string> *Find(const std::string &mention) const;
};

// Parses either a flat array of {"raw","web","id"} objects or an array of
// receipts, each an object holding an "items" array of such objects. Extra
// fields are ignored. Throws ParseError or ValidationError.
Corpus ParseRecords(std::string_view document);

// Reads and parses a corpus file. Throws std::runtime_error naming the path
// when the file cannot be read.
Corpus LoadCorpus(const std::string &path);

// Canonical flat-array encoding. ParseRecords(SerializeRecords(c)) == c for
// corpora with receipt_count <= 1.
std::string SerializeRecords(const Corpus &corpus);

// Trim, collapse internal whitespace runs to one space, uppercase ASCII.
std::string NormalizeMention(std::string_view raw);

// Groups records by normalized mention. Throws std::invalid_argument on an
// empty corpus.
GoldLinkSet BuildGold(const Corpus &corpus);

}  // namespace rlink

#endif  // RLINK_CORPUS_H_
