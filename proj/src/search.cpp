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

#include "mfhajj/search.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "mfhajj/error.hpp"

namespace mf {

namespace {

constexpr char32_t kInvalid = 0xFFFD;
constexpr Timestamp kDayMs = 86'400'000;

// Decodes one code point at `pos` and advances it. Malformed input yields
// U+FFFD and consumes one byte.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || pos + static_cast<std::size_t>(len) > s.size()) {
    ++pos;
    return kInvalid;
  }
  char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
  for (int i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
    if ((b >> 6) != 0x2) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kInvalid;
  }
  pos += static_cast<std::size_t>(len);
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_digit(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 0x660 && c <= 0x669) || (c >= 0x6F0 && c <= 0x6F9) ||
         (c >= 0x966 && c <= 0x96F);
}

bool is_letter(char32_t c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
  if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  return (c <= 0x24F) ||                                  // Latin-1 letters, Latin Extended-A/B
         (c >= 0x370 && c <= 0x3FF && c != 0x37E && c != 0x387) ||  // Greek
         (c >= 0x400 && c <= 0x52F && !(c >= 0x482 && c <= 0x489)) ||  // Cyrillic
         (c >= 0x5D0 && c <= 0x5EA) ||                    // Hebrew
         (c >= 0x620 && c <= 0x65F) ||                    // Arabic letters and harakat
         (c >= 0x66E && c <= 0x6D3) || (c >= 0x6FA && c <= 0x6FF) ||
         (c >= 0x900 && c <= 0x963) ||                    // Devanagari
         (c >= 0x3040 && c <= 0x30FF) ||                  // Hiragana, Katakana
         (c >= 0x4E00 && c <= 0x9FFF) ||                  // CJK
         (c >= 0xAC00 && c <= 0xD7A3);                    // Hangul
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return 'i';
    if (c == 0x178) return 0xFF;
    if ((c <= 0x137) || (c >= 0x14A && c <= 0x177)) return (c % 2 == 0) ? c + 1 : c;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
    return c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 0x25;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 0x3F;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  if ((c >= 0x460 && c <= 0x481) || (c >= 0x48A && c <= 0x4BF)) return (c % 2 == 0) ? c + 1 : c;
  return c;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_filter_field(std::string_view f) {
  return std::find(std::begin(kFilterFields), std::end(kFilterFields), f) != std::end(kFilterFields);
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  std::size_t length = 0;
  bool all_digits = true;
  auto flush = [&] {
    if (length >= 2 || (length >= 1 && all_digits)) out.push_back(current);
    current.clear();
    length = 0;
    all_digits = true;
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = next_code_point(text, pos);
    const bool digit = is_digit(cp);
    if (digit || is_letter(cp)) {
      append_utf8(current, to_lower(cp));
      ++length;
      all_digits = all_digits && digit;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

SearchQuery parse_query(std::string_view text) {
  SearchQuery q;
  std::size_t i = 0;
  auto read_quoted = [&](std::size_t open) {
    const std::size_t close = text.find('"', open + 1);
    if (close == std::string_view::npos) throw Error(ErrorCode::UnbalancedQuote, "unterminated quote");
    std::string_view inner = text.substr(open + 1, close - open - 1);
    i = close + 1;
    return inner;
  };
  auto add_terms = [&](std::string_view word) {
    for (auto& t : tokenize(word)) q.terms.push_back(std::move(t));
  };

  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (text[i] == '"') {
      auto tokens = tokenize(read_quoted(i));
      if (!tokens.empty()) q.phrases.push_back(std::move(tokens));
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && !is_space(text[end]) && text[end] != '"') ++end;
    std::string_view word = text.substr(i, end - i);
    const std::size_t colon = word.find(':');
    if (colon == std::string_view::npos || colon == 0) {
      add_terms(word);
      i = end;
      continue;
    }
    const std::string field = to_lower_ascii(word.substr(0, colon));
    const bool known = is_filter_field(field) || field == "since" || field == "until";
    std::string value;
    std::size_t next = end;
    if (known && colon + 1 == word.size() && end < text.size() && text[end] == '"') {
      i = end;
      value = std::string(read_quoted(end));
      next = i;
    } else {
      value = std::string(word.substr(colon + 1));
    }
    i = next;
    if (!known || value.empty()) {
      add_terms(word);
      continue;
    }
    if (field == "since" || field == "until") {
      const bool date_only = value.find('T') == std::string::npos;
      Timestamp ts = parse_timestamp(value);
      if (field == "since") {
        q.date_from = ts;
      } else {
        q.date_to = date_only ? ts + kDayMs - 1 : ts;
      }
      continue;
    }
    if (field == "location") {
      auto tokens = tokenize(value);
      if (tokens.empty()) continue;
      std::string joined;
      for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
      q.filters[field] = joined;
    } else {
      q.filters[field] = to_lower_ascii(value);
    }
  }
  if (q.date_from && q.date_to && *q.date_from > *q.date_to) {
    throw Error(ErrorCode::ValidationError, "since is after until");
  }
  if (q.empty()) throw Error(ErrorCode::EmptyQuery, "query has no terms, phrases or filters");
  return q;
}

double inverse_document_frequency(std::size_t n_docs, std::size_t df) {
  return std::log(1.0 + static_cast<double>(n_docs) / static_cast<double>(df));
}

void InvertedIndex::index_report(const IndexDocument& doc) {
  std::unique_lock lock(mu_);
  index_locked(doc);
}

void InvertedIndex::remove_report(const std::string& report_id) {
  std::unique_lock lock(mu_);
  remove_locked(report_id);
}

void InvertedIndex::reindex_report(const IndexDocument& doc) {
  std::unique_lock lock(mu_);
  if (docs_.count(doc.report_id)) remove_locked(doc.report_id);
  index_locked(doc);
}

void InvertedIndex::index_locked(const IndexDocument& doc) {
  if (doc.report_id.empty()) throw Error(ErrorCode::InvalidArgument, "document id is empty");
  if (docs_.count(doc.report_id)) throw Error(ErrorCode::DuplicateDocument, doc.report_id);
  Doc d;
  for (const auto& [k, v] : doc.facets) {
    if (k == "location") {
      d.location_tokens = sorted_unique(tokenize(v));
    } else {
      d.facets[k] = to_lower_ascii(v);
    }
  }
  d.timestamp = doc.timestamp;
  int position = 0;
  for (const auto& field : doc.text_fields) {
    for (auto& token : tokenize(field)) {
      postings_[token][doc.report_id].push_back(position++);
      d.terms.push_back(std::move(token));
    }
    ++position;  // phrases never span two fields
  }
  d.terms = sorted_unique(std::move(d.terms));
  docs_.emplace(doc.report_id, std::move(d));
}

void InvertedIndex::remove_locked(const std::string& report_id) {
  auto it = docs_.find(report_id);
  if (it == docs_.end()) throw Error(ErrorCode::NotIndexed, report_id);
  for (const auto& term : it->second.terms) {
    auto p = postings_.find(term);
    if (p == postings_.end()) continue;
    p->second.erase(report_id);
    if (p->second.empty()) postings_.erase(p);
  }
  docs_.erase(it);
}

bool InvertedIndex::contains(const std::string& report_id) const {
  std::shared_lock lock(mu_);
  return docs_.count(report_id) > 0;
}

std::size_t InvertedIndex::size() const {
  std::shared_lock lock(mu_);
  return docs_.size();
}

void InvertedIndex::clear() {
  std::unique_lock lock(mu_);
  docs_.clear();
  postings_.clear();
}

const std::vector<int>* InvertedIndex::positions(const std::string& term, const std::string& report_id) const {
  auto p = postings_.find(term);
  if (p == postings_.end()) return nullptr;
  auto d = p->second.find(report_id);
  return d == p->second.end() ? nullptr : &d->second;
}

std::optional<Posting> InvertedIndex::posting(const std::string& term, const std::string& report_id) const {
  std::shared_lock lock(mu_);
  const auto* pos = positions(term, report_id);
  if (!pos) return std::nullopt;
  return Posting{report_id, *pos};
}

bool InvertedIndex::passes_filters(const Doc& doc, const SearchQuery& query) const {
  for (const auto& [field, value] : query.filters) {
    if (field == "location") {
      for (const auto& t : tokenize(value)) {
        if (!std::binary_search(doc.location_tokens.begin(), doc.location_tokens.end(), t)) return false;
      }
    } else {
      auto it = doc.facets.find(field);
      if (it == doc.facets.end() || it->second != value) return false;
    }
  }
  if (query.date_from && doc.timestamp < *query.date_from) return false;
  if (query.date_to && doc.timestamp > *query.date_to) return false;
  return true;
}

bool InvertedIndex::has_phrase(const std::string& report_id, const std::vector<std::string>& phrase) const {
  std::vector<const std::vector<int>*> lists;
  for (const auto& t : phrase) {
    const auto* p = positions(t, report_id);
    if (!p) return false;
    lists.push_back(p);
  }
  for (int start : *lists[0]) {
    bool ok = true;
    for (std::size_t k = 1; k < lists.size() && ok; ++k) {
      ok = std::binary_search(lists[k]->begin(), lists[k]->end(), start + static_cast<int>(k));
    }
    if (ok) return true;
  }
  return false;
}

std::vector<SearchHit> InvertedIndex::search(const SearchQuery& query, std::size_t limit) const {
  if (limit < 1) throw Error(ErrorCode::InvalidArgument, "limit must be >= 1");
  std::shared_lock lock(mu_);

  std::set<std::string> scored_tokens(query.terms.begin(), query.terms.end());
  for (const auto& phrase : query.phrases) scored_tokens.insert(phrase.begin(), phrase.end());

  // Candidate generation: the rarest constraint that every hit must satisfy.
  std::set<std::string> candidates;
  if (!query.phrases.empty()) {
    auto p = postings_.find(query.phrases[0][0]);
    if (p == postings_.end()) return {};
    for (const auto& [id, pos] : p->second) candidates.insert(id);
  } else if (!query.terms.empty()) {
    for (const auto& t : query.terms) {
      auto p = postings_.find(t);
      if (p == postings_.end()) continue;
      for (const auto& [id, pos] : p->second) candidates.insert(id);
    }
  } else {
    for (const auto& [id, doc] : docs_) candidates.insert(id);
  }

  const std::size_t n = docs_.size();
  std::vector<SearchHit> hits;
  for (const auto& id : candidates) {
    const Doc& doc = docs_.at(id);
    if (!passes_filters(doc, query)) continue;
    bool ok = true;
    for (const auto& phrase : query.phrases) {
      if (!has_phrase(id, phrase)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (!query.terms.empty()) {
      ok = std::any_of(query.terms.begin(), query.terms.end(), [&](const std::string& t) { return positions(t, id); });
      if (!ok) continue;
    }
    double score = 0;
    for (const auto& t : scored_tokens) {
      const auto* pos = positions(t, id);
      if (!pos) continue;
      score += static_cast<double>(pos->size()) * inverse_document_frequency(n, postings_.at(t).size());
    }
    hits.push_back({id, score});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    return a.score != b.score ? a.score > b.score : a.report_id < b.report_id;
  });
  if (hits.size() > limit) hits.resize(limit);
  return hits;
}

}  // namespace mf
