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

#include "lifecycle.hpp"

#include <memory>
#include <optional>
#include <random>
#include <set>

#include "mfhajj/error.hpp"
#include "mfhajj/store.hpp"

namespace mftest {

namespace {

const std::set<std::pair<std::string, std::string>> kItemEdges = {
    {"OPEN", "CLAIM_PENDING"},
    {"CLAIM_PENDING", "RESOLVED"},
    {"CLAIM_PENDING", "OPEN"},
    {"OPEN", "REJECTED"},
};

const std::set<std::pair<std::string, std::string>> kPersonEdges = {
    {"OPEN", "MATCH_PROPOSED"},
    {"MATCH_PROPOSED", "CONFIRMED"},
    {"MATCH_PROPOSED", "OPEN"},
    {"CONFIRMED", "CLOSED"},
    {"OPEN", "CLOSED"},
};

struct Snapshot {
  std::map<std::string, std::string> items;
  std::map<std::string, std::string> persons;
};

}  // namespace

LifecycleStats run_lifecycle_sequences(std::uint64_t seed, int sequences, const std::filesystem::path& dir,
                                       int ops_per_sequence, int reopen_every) {
  LifecycleStats stats;
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto coin = [&](int percent) { return static_cast<int>(rng() % 100) < percent; };

  mf::StoreOptions options;
  options.sync_writes = false;
  auto store = std::make_unique<mf::Store>(dir, options);

  for (int s = 0; s < sequences; ++s) {
    if (reopen_every > 0 && s > 0 && s % reopen_every == 0) {
      const std::string before = store->canonical_state();
      store.reset();
      store = std::make_unique<mf::Store>(dir, options);
      if (store->canonical_state() != before) stats.forbidden.push_back("state changed across reopen");
    }
    ++stats.sequences;
    std::vector<std::string> items, missing, found, claims;

    auto snapshot = [&] {
      Snapshot snap;
      for (const auto& id : items) snap.items[id] = std::string(mf::to_string(store->get_item_report(id)->status));
      for (const auto* ids : {&missing, &found}) {
        for (const auto& id : *ids) snap.persons[id] = std::string(mf::to_string(store->get_person_report(id)->status));
      }
      return snap;
    };

    auto check = [&](const Snapshot& before, const Snapshot& after, const std::string& op) {
      for (const auto& [id, to] : after.items) {
        auto it = before.items.find(id);
        if (it == before.items.end()) {
          if (to != "OPEN") stats.forbidden.push_back(op + ": new item born " + to);
          continue;
        }
        const std::string& from = it->second;
        if (from == to) continue;
        if (from == "RESOLVED") ++stats.left_resolved;
        if (!kItemEdges.count({from, to})) stats.forbidden.push_back(op + ": item " + from + "->" + to);
        ++stats.edges["item " + from + "->" + to];
      }
      for (const auto& [id, to] : after.persons) {
        auto it = before.persons.find(id);
        if (it == before.persons.end()) {
          if (to != "OPEN") stats.forbidden.push_back(op + ": new person report born " + to);
          continue;
        }
        const std::string& from = it->second;
        if (from == to) continue;
        if (!kPersonEdges.count({from, to})) stats.forbidden.push_back(op + ": person " + from + "->" + to);
        ++stats.edges["person " + from + "->" + to];
      }
    };

    for (int o = 0; o < ops_per_sequence; ++o) {
      const Snapshot before = snapshot();
      std::string op;
      ++stats.operations;
      try {
        const int choice = static_cast<int>(pick(items.empty() ? 3 : 10));
        if (choice == 0 || items.empty()) {
          op = "submit item";
          mf::ItemReport r;
          r.kind = coin(50) ? mf::ItemKind::Found : mf::ItemKind::Lost;
          r.description = "item " + std::to_string(o);
          items.push_back(store->submit_item_report(r).report_id);
        } else if (choice == 1) {
          op = "submit person";
          mf::PersonReport r;
          r.kind = coin(50) ? mf::PersonReportKind::Missing
                            : (coin(50) ? mf::PersonReportKind::FoundAlive : mf::PersonReportKind::Deceased);
          r.photo_ref = std::string(64, 'a');
          (r.kind == mf::PersonReportKind::Missing ? missing : found).push_back(store->submit_person_report(r).report_id);
        } else if (choice <= 4) {
          op = "file claim";
          mf::Claim c;
          c.claimant_name = "claimant";
          if (!coin(10)) c.evidence_text = "serial engraved";
          claims.push_back(store->file_claim(items[pick(items.size())], c).claim_id);
        } else if (choice <= 6) {
          op = "resolve claim";
          if (claims.empty()) throw mf::Error(mf::ErrorCode::ClaimNotFound, "none yet");
          store->resolve_claim(claims[pick(claims.size())],
                               coin(50) ? mf::ClaimDecision::Accepted : mf::ClaimDecision::Denied);
        } else if (choice == 7) {
          op = "reject item";
          store->reject_item_report(items[pick(items.size())]);
        } else if (choice == 8) {
          op = "propose match";
          if (missing.empty() || found.empty()) throw mf::Error(mf::ErrorCode::ReportNotFound, "no pair yet");
          store->propose_person_match(missing[pick(missing.size())], found[pick(found.size())], "person-x", 1.0);
        } else {
          const std::vector<std::string>* pool = coin(50) ? &missing : &found;
          if (pool->empty()) throw mf::Error(mf::ErrorCode::ReportNotFound, "no person report yet");
          const std::string& id = (*pool)[pick(pool->size())];
          if (coin(50)) {
            op = "decide match";
            store->decide_person_match(id, coin(50));
          } else {
            op = "close person report";
            store->close_person_report(id);
          }
        }
      } catch (const mf::Error&) {
        ++stats.rejected_operations;
      }
      check(before, snapshot(), op);
    }

    for (const auto& id : items) {
      int active = 0;
      for (const auto& c : store->claims_for(id)) active += c.decision != mf::ClaimDecision::Denied;
      if (active > 1) ++stats.active_claim_violations;
    }
    for (const auto* ids : {&missing, &found}) {
      for (const auto& id : *ids) {
        const auto r = *store->get_person_report(id);
        const bool matched_state = r.status == mf::PersonReportStatus::MatchProposed ||
                                   r.status == mf::PersonReportStatus::Confirmed;
        if (matched_state != r.matched_person_id.has_value()) ++stats.match_field_violations;
      }
    }
  }
  return stats;
}

}  // namespace mftest
