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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfhajj/record_log.hpp"
#include "mfhajj/records.hpp"

namespace mf {

using Report = std::variant<ItemReport, PersonReport>;

const std::string& report_id_of(const Report& r);
Timestamp reported_at_of(const Report& r);
nlohmann::json report_to_json(const Report& r);

enum class RecoveryMode {
  Strict,    // a checksum failure aborts open with CorruptLog
  Truncate,  // keep the intact prefix, move the damaged tail aside, report it
};

struct StoreOptions {
  bool sync_writes = true;
  RecoveryMode recovery = RecoveryMode::Strict;
  /// Write a snapshot and reset the log after this many commits; 0 = never.
  std::size_t snapshot_every = 0;
  /// Server clock; defaults to now_utc.
  std::function<Timestamp()> clock;
};

struct RecoveryReport {
  std::size_t commits_replayed = 0;
  bool torn_tail = false;
  bool corrupt = false;
  std::uint64_t stop_offset = 0;  // where replay stopped, when torn or corrupt
  std::string detail;
};

struct ReportFilter {
  std::optional<std::string> type;    // "item" | "person"
  std::optional<std::string> kind;    // FOUND, LOST, MISSING, ... (case-insensitive)
  std::optional<std::string> status;  // OPEN, CLAIM_PENDING, ... (case-insensitive)
  std::optional<Timestamp> since;     // inclusive
  std::optional<Timestamp> until;     // inclusive
};

struct Page {
  int number = 1;  // 1-based
  int size = 50;   // 1..500
};

struct SubmitResult {
  std::string report_id;
  bool duplicate = false;  // origin seen before; nothing was written
};

struct ClaimResult {
  std::string claim_id;
  Alert alert;  // CLAIM_FILED
};

struct ResolveResult {
  Claim claim;
  ItemReport report;
};

/// Durable registry: an append-only commit log plus an optional snapshot,
/// and a content-addressed blob directory for photos.
///
///   <dir>/records.log    commits, one record each
///   <dir>/snapshot.log   one record per entity, first record is the header
///   <dir>/blobs/<sha256>
///
/// One writer at a time (internally serialised); readers take a shared lock.
class Store {
 public:
  explicit Store(const std::filesystem::path& dir, StoreOptions options = {});
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const RecoveryReport& recovery() const { return recovery_; }
  const std::filesystem::path& dir() const { return dir_; }

  // Blobs.
  std::string put_blob(std::span<const std::uint8_t> bytes);
  std::optional<std::vector<std::uint8_t>> read_blob(const std::string& hash) const;
  bool has_blob(const std::string& hash) const;

  // Persons.
  void add_person(const PersonRecord& person);
  std::optional<PersonRecord> get_person(const std::string& person_id) const;
  std::vector<PersonRecord> persons() const;

  // Reports. reported_at and report_id are assigned here.
  SubmitResult submit_item_report(ItemReport report);
  SubmitResult submit_person_report(PersonReport report);
  std::optional<ItemReport> get_item_report(const std::string& id) const;
  std::optional<PersonReport> get_person_report(const std::string& id) const;
  std::optional<Report> get_report(const std::string& id) const;
  std::vector<Report> all_reports() const;
  std::vector<Report> list_reports(const ReportFilter& filter, const Page& page) const;
  std::optional<std::string> report_for_origin(const Origin& origin) const;

  void set_person_embedding(const std::string& report_id, const Embedding& embedding);
  /// OPEN -> REJECTED.
  ItemReport reject_item_report(const std::string& report_id);

  // Claims.
  ClaimResult file_claim(const std::string& report_id, Claim claim);
  ResolveResult resolve_claim(const std::string& claim_id, ClaimDecision decision);
  std::optional<Claim> get_claim(const std::string& claim_id) const;
  std::vector<Claim> claims_for(const std::string& report_id) const;

  // Person matching.
  /// Raises a PERSON_MATCH alert for the pair and moves OPEN reports to
  /// MATCH_PROPOSED. Returns nullopt when the pair was alerted before.
  std::optional<Alert> propose_person_match(const std::string& missing_id, const std::string& found_id,
                                            const std::string& person_id, double distance);
  /// MATCH_PROPOSED -> CONFIRMED (confirm) or back to OPEN.
  PersonReport decide_person_match(const std::string& report_id, bool confirm);
  /// OPEN or CONFIRMED -> CLOSED.
  PersonReport close_person_report(const std::string& report_id);
  bool pair_alerted(const std::string& missing_id, const std::string& found_id) const;

  // Alerts.
  std::vector<Alert> alerts(std::optional<bool> acknowledged = std::nullopt) const;
  std::optional<Alert> get_alert(const std::string& alert_id) const;
  Alert acknowledge_alert(const std::string& alert_id, const std::string& operator_id);

  /// Largest accepted seq for the kiosk, 0 when none.
  std::int64_t high_water(const std::string& kiosk_id) const;

  /// Writes a snapshot of the current state and empties the log.
  void checkpoint();

  /// Every entity, one canonical JSON line each, sorted. With
  /// strip_server_times, server-assigned timestamps are removed so two
  /// stores built at different times compare equal.
  std::string canonical_state(bool strip_server_times = false) const;

  std::uint64_t commit_count() const;

 private:
  struct Put {
    std::string type;
    nlohmann::json data;
  };

  void load();
  void apply_put(const Put& put);
  void apply_commit(const nlohmann::json& commit);
  void commit(std::vector<Put> puts);
  Timestamp now() const;
  std::filesystem::path blob_path(const std::string& hash) const;

  ItemReport& item_or_throw(const std::string& id);
  PersonReport& person_report_or_throw(const std::string& id);

  std::filesystem::path dir_;
  StoreOptions options_;
  RecoveryReport recovery_;
  mutable std::shared_mutex mu_;
  RecordLog log_;
  std::uint64_t lsn_ = 0;
  std::size_t commits_since_snapshot_ = 0;

  std::map<std::string, PersonRecord> persons_;
  std::map<std::string, ItemReport> items_;
  std::map<std::string, PersonReport> person_reports_;
  std::map<std::string, Claim> claims_;
  std::map<std::string, Alert> alerts_;
  std::unordered_map<std::string, std::string> origins_;  // origin key -> report id
  std::map<std::string, std::int64_t> high_water_;
  std::set<std::pair<std::string, std::string>> alerted_pairs_;
};

}  // namespace mf
