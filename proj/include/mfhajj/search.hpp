// Copyright 2026 The mfhajj Authors.
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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mfhajj/util.hpp"

namespace mf {

/// Lowercases (ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic) and splits
/// on anything that is not a letter or digit. Tokens shorter than two code
/// points are dropped unless they consist only of digits.
std::vector<std::string> tokenize(std::string_view text);

/// Filter fields understood by the query language.
inline constexpr std::string_view kFilterFields[] = {"kind", "category", "status", "location"};

struct SearchQuery {
  std::vector<std::string> terms;
  std::vector<std::vector<std::string>> phrases;
  std::map<std::string, std::string> filters;  // lowercased values
  std::optional<Timestamp> date_from;          // inclusive
  std::optional<Timestamp> date_to;            // inclusive

  bool empty() const { return terms.empty() && phrases.empty() && filters.empty() && !date_from && !date_to; }
};

/// query  := (filter | phrase | term)+
/// filter := field ":" value      field in {kind, category, status, location}
///           since:DATE | until:DATE
/// phrase := '"' term+ '"'
/// An unknown `x:y` is read as the terms x and y. A filter value may be quoted.
/// A later filter on the same field replaces an earlier one.
SearchQuery parse_query(std::string_view text);

struct Posting {
  std::string report_id;
  std::vector<int> positions;  // strictly ascending
  std::size_t tf() const { return positions.size(); }
};

struct IndexDocument {
  std::string report_id;
  std::vector<std::string> text_fields;
  /// kind, category, status, location. Values are compared lowercased;
  /// location matches when every query token appears among its tokens.
  std::map<std::string, std::string> facets;
  Timestamp timestamp = 0;
};

struct SearchHit {
  std::string report_id;
  double score = 0;

  bool operator==(const SearchHit&) const = default;
};

/// idf = ln(1 + N/df)
double inverse_document_frequency(std::size_t n_docs, std::size_t df);

/// Positional inverted index. Thread-safe: one writer, many readers.
class InvertedIndex {
 public:
  void index_report(const IndexDocument& doc);
  void remove_report(const std::string& report_id);
  /// remove (when present) then index.
  void reindex_report(const IndexDocument& doc);
  bool contains(const std::string& report_id) const;
  std::size_t size() const;
  void clear();

  std::vector<SearchHit> search(const SearchQuery& query, std::size_t limit) const;
  std::vector<SearchHit> search(std::string_view query_text, std::size_t limit) const {
    return search(parse_query(query_text), limit);
  }

  std::optional<Posting> posting(const std::string& term, const std::string& report_id) const;

 private:
  struct Doc {
    std::map<std::string, std::string> facets;
    std::vector<std::string> location_tokens;  // sorted, unique
    Timestamp timestamp = 0;
    std::vector<std::string> terms;            // distinct terms, for removal
  };

  void index_locked(const IndexDocument& doc);
  void remove_locked(const std::string& report_id);
  bool passes_filters(const Doc& doc, const SearchQuery& query) const;
  bool has_phrase(const std::string& report_id, const std::vector<std::string>& phrase) const;
  const std::vector<int>* positions(const std::string& term, const std::string& report_id) const;

  mutable std::shared_mutex mu_;
  std::map<std::string, Doc> docs_;
  std::unordered_map<std::string, std::map<std::string, std::vector<int>>> postings_;
};

}  // namespace mf
