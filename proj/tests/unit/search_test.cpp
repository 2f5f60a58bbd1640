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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../support/corpus.hpp"
#include "../support/oracles.hpp"
#include "mfhajj/error.hpp"
#include "mfhajj/search.hpp"

namespace {

using mf::ErrorCode;
using Tokens = std::vector<std::string>;

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const mf::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

mf::IndexDocument doc(const std::string& id, const std::string& text, mf::Timestamp ts = 0,
                      std::map<std::string, std::string> facets = {}) {
  return {id, {text}, std::move(facets), ts};
}

std::vector<std::string> ids(const std::vector<mf::SearchHit>& hits) {
  std::vector<std::string> out;
  for (const auto& h : hits) out.push_back(h.report_id);
  return out;
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(mf::tokenize("Black Casio watch, Gate-5"), (Tokens{"black", "casio", "watch", "gate", "5"}));
  EXPECT_EQ(mf::tokenize(""), Tokens{});
  EXPECT_EQ(mf::tokenize("AA aa AA"), (Tokens{"aa", "aa", "aa"}));
  EXPECT_EQ(mf::tokenize("a b 7 x9"), (Tokens{"7", "x9"}));
}

TEST(Tokenize, NonAsciiLetters) {
  EXPECT_EQ(mf::tokenize("ÇANTA Überweisung"), (Tokens{"çanta", "überweisung"}));
  EXPECT_EQ(mf::tokenize("ΠΟΡΤΟΦΌΛΙ"), (Tokens{"πορτοφόλι"}));
  EXPECT_EQ(mf::tokenize("Сумка,паспорт"), (Tokens{"сумка", "паспорт"}));
  EXPECT_EQ(mf::tokenize("ساعة ذهبية"), (Tokens{"ساعة", "ذهبية"}));
}

TEST(ParseQuery, Examples) {
  const auto a = mf::parse_query("category:watch gate");
  EXPECT_EQ(a.filters, (std::map<std::string, std::string>{{"category", "watch"}}));
  EXPECT_EQ(a.terms, Tokens{"gate"});
  EXPECT_TRUE(a.phrases.empty());

  const auto b = mf::parse_query("\"black casio\" status:open");
  ASSERT_EQ(b.phrases.size(), 1u);
  EXPECT_EQ(b.phrases[0], (Tokens{"black", "casio"}));
  EXPECT_EQ(b.filters, (std::map<std::string, std::string>{{"status", "open"}}));
  EXPECT_TRUE(b.terms.empty());

  EXPECT_EQ(error_of([] { mf::parse_query("\"unclosed"); }), ErrorCode::UnbalancedQuote);
  EXPECT_EQ(error_of([] { mf::parse_query(""); }), ErrorCode::EmptyQuery);
  EXPECT_EQ(error_of([] { mf::parse_query("  , ; "); }), ErrorCode::EmptyQuery);
}

TEST(ParseQuery, UnknownFieldDegradesToTerms) {
  const auto q = mf::parse_query("colour:red");
  EXPECT_EQ(q.terms, (Tokens{"colour", "red"}));
  EXPECT_TRUE(q.filters.empty());
}

TEST(ParseQuery, QuotedLocationAndDates) {
  const auto q = mf::parse_query("location:\"Mina Camp\" since:2026-01-02 until:2026-01-03");
  EXPECT_EQ(q.filters.at("location"), "mina camp");
  EXPECT_EQ(*q.date_from, mf::parse_timestamp("2026-01-02"));
  EXPECT_EQ(*q.date_to, mf::parse_timestamp("2026-01-04") - 1);
  EXPECT_EQ(error_of([] { mf::parse_query("since:2026-02-01 until:2026-01-01"); }), ErrorCode::ValidationError);
  EXPECT_EQ(mf::parse_query("KIND:Found").filters.at("kind"), "found");
}

TEST(Index, EmptyIndexAndSingleDocument) {
  mf::InvertedIndex idx;
  EXPECT_TRUE(idx.search("watch", 10).empty());
  idx.index_report(doc("r1", "gold watch"));
  const auto hits = idx.search("watch", 10);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].report_id, "r1");
  EXPECT_DOUBLE_EQ(hits[0].score, std::log(2.0));
  EXPECT_EQ(error_of([&] { idx.search("watch", 0); }), ErrorCode::InvalidArgument);
}

TEST(Index, ScoringHandComputed) {
  mf::InvertedIndex idx;
  idx.index_report(doc("a", "watch watch gold"));
  idx.index_report(doc("b", "gold ring"));
  idx.index_report(doc("c", "phone"));
  // N = 3; df(watch) = 1, df(gold) = 2.
  const auto hits = idx.search("watch gold", 10);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].report_id, "a");
  EXPECT_DOUBLE_EQ(hits[0].score, 2 * std::log(1 + 3.0 / 1) + 1 * std::log(1 + 3.0 / 2));
  EXPECT_EQ(hits[1].report_id, "b");
  EXPECT_DOUBLE_EQ(hits[1].score, std::log(1 + 3.0 / 2));
  const auto p = idx.posting("watch", "a");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->positions, (std::vector<int>{0, 1}));
  EXPECT_EQ(p->tf(), 2u);
  EXPECT_DOUBLE_EQ(mf::inverse_document_frequency(4, 2), std::log(3.0));
}

TEST(Index, TiesByIdAndLimit) {
  mf::InvertedIndex idx;
  for (const char* id : {"m", "c", "x", "a"}) idx.index_report(doc(id, "lost bag"));
  EXPECT_EQ(ids(idx.search("bag", 10)), (Tokens{"a", "c", "m", "x"}));
  EXPECT_EQ(ids(idx.search("bag", 2)), (Tokens{"a", "c"}));
}

TEST(Index, PhraseNeedsConsecutivePositions) {
  mf::InvertedIndex idx;
  idx.index_report(doc("yes", "a black casio watch"));
  idx.index_report(doc("no", "casio black watch"));
  EXPECT_EQ(ids(idx.search("\"black casio\"", 10)), Tokens{"yes"});
  // Fields do not run together.
  idx.index_report({"split", {"black", "casio"}, {}, 0});
  EXPECT_EQ(ids(idx.search("\"black casio\"", 10)), Tokens{"yes"});
}

TEST(Index, FiltersAndDates) {
  mf::InvertedIndex idx;
  idx.index_report(doc("w", "gold watch", 100, {{"kind", "FOUND"}, {"category", "watch"}, {"location", "Gate 5"}}));
  idx.index_report(doc("p", "gold phone", 200, {{"kind", "LOST"}, {"category", "phone"}, {"location", "Mina Camp"}}));
  EXPECT_EQ(ids(idx.search("category:watch", 10)), Tokens{"w"});
  EXPECT_EQ(ids(idx.search("gold kind:lost", 10)), Tokens{"p"});
  EXPECT_EQ(ids(idx.search("location:mina", 10)), Tokens{"p"});
  EXPECT_EQ(ids(idx.search("location:\"gate 5\"", 10)), Tokens{"w"});
  mf::SearchQuery q;
  q.terms = {"gold"};
  q.date_from = 150;
  EXPECT_EQ(ids(idx.search(q, 10)), Tokens{"p"});
  q.date_from = 100;
  q.date_to = 100;
  EXPECT_EQ(ids(idx.search(q, 10)), Tokens{"w"});
}

TEST(Index, DuplicateAndRemove) {
  mf::InvertedIndex idx;
  idx.index_report(doc("r", "keys"));
  EXPECT_EQ(error_of([&] { idx.index_report(doc("r", "other")); }), ErrorCode::DuplicateDocument);
  idx.remove_report("r");
  EXPECT_TRUE(idx.search("keys", 10).empty());
  EXPECT_EQ(error_of([&] { idx.remove_report("r"); }), ErrorCode::NotIndexed);
  EXPECT_FALSE(idx.contains("r"));
  idx.reindex_report(doc("r", "wallet"));
  idx.reindex_report(doc("r", "passport"));
  EXPECT_TRUE(idx.search("wallet", 10).empty());
  EXPECT_EQ(ids(idx.search("passport", 10)), Tokens{"r"});
}

TEST(Index, RemovingEverythingEmptiesResults) {
  const auto docs = mftest::random_documents(2, 60);
  mf::InvertedIndex idx;
  for (const auto& d : docs) idx.index_report(d);
  for (const auto& d : docs) idx.remove_report(d.report_id);
  EXPECT_EQ(idx.size(), 0u);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(idx.search(mftest::random_query(rng, docs), 100).empty());
}

TEST(Index, MatchesLinearScanOracle) {
  const auto docs = mftest::random_documents(11, 250);
  mf::InvertedIndex idx;
  mftest::LinearSearch oracle;
  for (const auto& d : docs) {
    idx.index_report(d);
    oracle.add(d);
  }
  std::mt19937_64 rng(12);
  int nonempty = 0;
  for (int i = 0; i < 200; ++i) {
    const std::string text = mftest::random_query(rng, docs);
    mf::SearchQuery q;
    try {
      q = mf::parse_query(text);
    } catch (const mf::Error&) {
      continue;
    }
    const std::size_t limit = 1 + rng() % 40;
    const auto got = idx.search(q, limit);
    EXPECT_EQ(got, oracle.search(q, limit)) << text;
    nonempty += !got.empty();
  }
  EXPECT_GT(nonempty, 100);
}

TEST(Index, InterleavedIndexAndRemoveEqualsRebuild) {
  const auto docs = mftest::random_documents(21, 120);
  std::mt19937_64 rng(22);
  mf::InvertedIndex live;
  std::set<std::size_t> present;
  for (int step = 0; step < 400; ++step) {
    const std::size_t i = rng() % docs.size();
    if (present.count(i)) {
      live.remove_report(docs[i].report_id);
      present.erase(i);
    } else {
      live.index_report(docs[i]);
      present.insert(i);
    }
  }
  mf::InvertedIndex rebuilt;
  for (std::size_t i : present) rebuilt.index_report(docs[i]);
  for (int k = 0; k < 100; ++k) {
    const auto text = mftest::random_query(rng, docs);
    EXPECT_EQ(live.search(text, 1000), rebuilt.search(text, 1000)) << text;
  }
}

TEST(Index, InsertionOrderIndependent) {
  auto docs = mftest::random_documents(31, 150);
  mf::InvertedIndex a, b;
  for (const auto& d : docs) a.index_report(d);
  std::mt19937_64 rng(32);
  std::shuffle(docs.begin(), docs.end(), rng);
  for (const auto& d : docs) b.index_report(d);
  for (int k = 0; k < 100; ++k) {
    const auto text = mftest::random_query(rng, docs);
    EXPECT_EQ(a.search(text, 1000), b.search(text, 1000)) << text;
  }
}

TEST(Index, PhraseResultsAreSubsetOfTermResults) {
  const auto docs = mftest::random_documents(41, 300);
  mf::InvertedIndex idx;
  for (const auto& d : docs) idx.index_report(d);
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    const auto toks = mf::tokenize(docs[rng() % docs.size()].text_fields[0]);
    if (toks.size() < 2) continue;
    const auto phrase = idx.search("\"" + toks[0] + " " + toks[1] + "\"", 1000);
    auto terms = ids(idx.search(toks[0] + " " + toks[1], 1000));
    std::sort(terms.begin(), terms.end());
    EXPECT_FALSE(phrase.empty());
    for (const auto& h : phrase) EXPECT_TRUE(std::binary_search(terms.begin(), terms.end(), h.report_id));
  }
}

}  // namespace
