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

#include "rlink/corpus.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rlink {

namespace {

using nlohmann::json;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsBlank(std::string_view s) {
  for (char c : s) {
    if (!IsSpace(c)) return false;
  }
  return true;
}

std::string RequiredField(const json &item, const char *name,
                          std::size_t index) {
  auto it = item.find(name);
  if (it == item.end()) {
    throw ValidationError("item " + std::to_string(index) +
                              ": missing field \"" + name + "\"",
                          index);
  }
  if (!it->is_string()) {
    throw ValidationError("item " + std::to_string(index) + ": field \"" +
                              name + "\" is not a string",
                          index);
  }
  std::string value = it->get<std::string>();
  if (IsBlank(value)) {
    throw ValidationError("item " + std::to_string(index) + ": field \"" +
                              name + "\" is empty",
                          index);
  }
  return value;
}

void AppendItem(const json &item, std::size_t index, Corpus *corpus) {
  if (!item.is_object()) {
    throw ValidationError(
        "item " + std::to_string(index) + ": expected an object", index);
  }
  LinkRecord record;
  record.raw = RequiredField(item, "raw", index);
  record.web = RequiredField(item, "web", index);
  record.entity_id = RequiredField(item, "id", index);
  corpus->records.push_back(std::move(record));
}

bool IsReceipt(const json &element) {
  if (!element.is_object()) return false;
  auto it = element.find("items");
  return it != element.end() && it->is_array();
}

}  // namespace

const std::set<std::string> *GoldLinkSet::Find(
    const std::string &mention) const {
  auto it = links.find(mention);
  return it == links.end() ? nullptr : &it->second;
}

Corpus ParseRecords(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error &e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!root.is_array()) {
    throw ValidationError("top-level JSON value must be an array", 0);
  }

  Corpus corpus;
  if (root.empty()) return corpus;

  // The first element decides the layout; mixing layouts is rejected.
  const bool nested = IsReceipt(root.front());
  std::size_t index = 0;
  if (nested) {
    for (const json &receipt : root) {
      if (!IsReceipt(receipt)) {
        throw ValidationError("receipt " +
                                  std::to_string(corpus.receipt_count) +
                                  ": expected an object with an \"items\" "
                                  "array",
                              index);
      }
      for (const json &item : receipt.at("items")) {
        AppendItem(item, index++, &corpus);
      }
      ++corpus.receipt_count;
    }
  } else {
    for (const json &item : root) AppendItem(item, index++, &corpus);
    corpus.receipt_count = 1;
  }
  return corpus;
}

Corpus LoadCorpus(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read corpus file: " + path);
  return ParseRecords(buffer.str());
}

std::string SerializeRecords(const Corpus &corpus) {
  json root = json::array();
  for (const LinkRecord &record : corpus.records) {
    json item = json::object();
    item["raw"] = record.raw;
    item["web"] = record.web;
    item["id"] = record.entity_id;
    root.push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

std::string NormalizeMention(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
  }
  return out;
}

GoldLinkSet BuildGold(const Corpus &corpus) {
  if (corpus.records.empty()) {
    throw std::invalid_argument("cannot build gold links from empty corpus");
  }
  GoldLinkSet gold;
  for (const LinkRecord &record : corpus.records) {
    std::string mention = NormalizeMention(record.raw);
    auto [it, inserted] = gold.links.try_emplace(mention);
    if (inserted) gold.mention_order.push_back(mention);
    it->second.insert(record.entity_id);
  }
  return gold;
}

}  // namespace rlink
