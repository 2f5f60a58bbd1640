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

#include "mfhajj/store.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <mutex>

#include "mfhajj/error.hpp"
#include "mfhajj/util.hpp"

namespace mf {

using nlohmann::json;

namespace {

constexpr const char* kLogName = "records.log";
constexpr const char* kSnapshotName = "snapshot.log";

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

bool same_client_content(const ItemReport& a, const ItemReport& b) {
  return a.kind == b.kind && a.category == b.category && a.description == b.description &&
         a.location == b.location && a.photo_ref == b.photo_ref && a.claimed_time == b.claimed_time;
}

bool same_client_content(const PersonReport& a, const PersonReport& b) {
  return a.kind == b.kind && a.photo_ref == b.photo_ref && a.location == b.location &&
         a.description == b.description && a.subject_person_id == b.subject_person_id &&
         a.claimed_time == b.claimed_time;
}

void validate_origin(const std::optional<Origin>& origin) {
  if (!origin) return;
  if (origin->kiosk_id.empty()) throw Error(ErrorCode::ValidationError, "origin kiosk_id is empty");
  if (origin->seq < 1) throw Error(ErrorCode::ValidationError, "origin seq must be positive");
}

void strip_times(json& j) {
  for (const char* key : {"reported_at", "enrolled_at", "filed_at", "raised_at", "acknowledged_at"}) j.erase(key);
}

}  // namespace

const std::string& report_id_of(const Report& r) {
  return std::visit([](const auto& v) -> const std::string& { return v.report_id; }, r);
}

Timestamp reported_at_of(const Report& r) {
  return std::visit([](const auto& v) { return v.reported_at; }, r);
}

json report_to_json(const Report& r) {
  return std::visit([](const auto& v) { return json(v); }, r);
}

Store::Store(const std::filesystem::path& dir, StoreOptions options) : dir_(dir), options_(std::move(options)) {
  std::filesystem::create_directories(dir_ / "blobs");
  load();
}

Timestamp Store::now() const { return options_.clock ? options_.clock() : now_utc(); }

void Store::load() {
  const auto snapshot_path = dir_ / kSnapshotName;
  std::uint64_t snapshot_lsn = 0;
  if (std::filesystem::exists(snapshot_path)) {
    ReplayResult snap = replay_records(snapshot_path);
    if (snap.corrupt || snap.torn_tail) {
      throw Error(ErrorCode::CorruptLog, "snapshot is damaged: " + snap.detail, std::to_string(snap.stop_offset));
    }
    for (std::size_t i = 0; i < snap.records.size(); ++i) {
      json j = json::parse(snap.records[i].payload);
      if (i == 0) {
        if (j.value("type", "") != "header") throw Error(ErrorCode::CorruptLog, "snapshot has no header");
        snapshot_lsn = j.at("lsn").get<std::uint64_t>();
        continue;
      }
      apply_put({j.at("type").get<std::string>(), j.at("data")});
    }
    lsn_ = snapshot_lsn;
  }

  const auto log_path = dir_ / kLogName;
  ReplayResult replay = replay_records(log_path);
  std::uint64_t good_bytes = replay.valid_bytes;
  bool bad_payload = false;
  for (const auto& record : replay.records) {
    json commit;
    try {
      commit = json::parse(record.payload);
      const auto lsn = commit.at("lsn").get<std::uint64_t>();
      if (lsn <= snapshot_lsn) continue;
      apply_commit(commit);
      ++recovery_.commits_replayed;
    } catch (const std::exception& e) {
      // The checksum held but the payload is not a commit we wrote.
      good_bytes = record.offset;
      bad_payload = true;
      replay.detail = std::string("unreadable commit: ") + e.what();
      break;
    }
  }

  const bool corrupt = replay.corrupt || bad_payload;
  recovery_.corrupt = corrupt;
  recovery_.torn_tail = replay.torn_tail && !corrupt;
  recovery_.detail = replay.detail;
  if (corrupt || replay.torn_tail) recovery_.stop_offset = good_bytes;

  if (corrupt && options_.recovery == RecoveryMode::Strict) {
    throw Error(ErrorCode::CorruptLog, "record log damaged at offset " + std::to_string(good_bytes) + ": " + replay.detail,
                std::to_string(good_bytes));
  }

  log_ = RecordLog(log_path, options_.sync_writes);
  if (log_.size() != good_bytes) {
    if (corrupt) {
      // Keep the damaged bytes for inspection before dropping them.
      std::ifstream in(log_path, std::ios::binary);
      std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      const auto aside = dir_ / (std::string(kLogName) + ".corrupt-" + std::to_string(good_bytes));
      write_file_atomic(aside, std::string_view(bytes).substr(good_bytes), options_.sync_writes);
    }
    log_.truncate(good_bytes);
  }
}

void Store::apply_commit(const json& commit) {
  lsn_ = commit.at("lsn").get<std::uint64_t>();
  for (const auto& put : commit.at("puts")) apply_put({put.at("type").get<std::string>(), put.at("data")});
}

void Store::apply_put(const Put& put) {
  if (put.type == "item") {
    auto r = put.data.get<ItemReport>();
    if (r.origin) {
      origins_[r.origin->key()] = r.report_id;
      auto& hw = high_water_[r.origin->kiosk_id];
      hw = std::max(hw, r.origin->seq);
    }
    items_[r.report_id] = std::move(r);
  } else if (put.type == "person_report") {
    auto r = put.data.get<PersonReport>();
    if (r.origin) {
      origins_[r.origin->key()] = r.report_id;
      auto& hw = high_water_[r.origin->kiosk_id];
      hw = std::max(hw, r.origin->seq);
    }
    person_reports_[r.report_id] = std::move(r);
  } else if (put.type == "person") {
    auto p = put.data.get<PersonRecord>();
    persons_[p.person_id] = std::move(p);
  } else if (put.type == "claim") {
    auto c = put.data.get<Claim>();
    claims_[c.claim_id] = std::move(c);
  } else if (put.type == "alert") {
    auto a = put.data.get<Alert>();
    if (a.kind == AlertKind::PersonMatch && a.report_ids.size() == 2) {
      alerted_pairs_.emplace(a.report_ids[0], a.report_ids[1]);
    }
    alerts_[a.alert_id] = std::move(a);
  } else {
    throw Error(ErrorCode::CorruptLog, "unknown entity type '" + put.type + "'");
  }
}

void Store::commit(std::vector<Put> puts) {
  json record = {{"lsn", lsn_ + 1}, {"puts", json::array()}};
  for (const auto& p : puts) record["puts"].push_back({{"type", p.type}, {"data", p.data}});
  log_.append(canonical_json(record));
  ++lsn_;
  for (const auto& p : puts) apply_put(p);
  if (options_.snapshot_every > 0 && ++commits_since_snapshot_ >= options_.snapshot_every) {
    commits_since_snapshot_ = 0;
    std::string bytes = encode_record(canonical_json({{"type", "header"}, {"lsn", lsn_}}));
    auto add = [&](const char* type, const auto& map) {
      for (const auto& [id, v] : map) bytes += encode_record(canonical_json({{"type", type}, {"data", v}}));
    };
    add("person", persons_);
    add("item", items_);
    add("person_report", person_reports_);
    add("claim", claims_);
    add("alert", alerts_);
    write_file_atomic(dir_ / kSnapshotName, bytes, options_.sync_writes);
    log_.truncate(0);
  }
}

void Store::checkpoint() {
  std::unique_lock lock(mu_);
  const auto saved = options_.snapshot_every;
  options_.snapshot_every = 1;
  commits_since_snapshot_ = 0;
  // An empty commit keeps the snapshot path in one place.
  try {
    commit({});
  } catch (...) {
    options_.snapshot_every = saved;
    throw;
  }
  options_.snapshot_every = saved;
}

std::uint64_t Store::commit_count() const {
  std::shared_lock lock(mu_);
  return lsn_;
}

std::filesystem::path Store::blob_path(const std::string& hash) const { return dir_ / "blobs" / hash; }

std::string Store::put_blob(std::span<const std::uint8_t> bytes) {
  const std::string hash = sha256_hex(bytes);
  std::unique_lock lock(mu_);
  const auto path = blob_path(hash);
  if (!std::filesystem::exists(path)) {
    write_file_atomic(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()}, options_.sync_writes);
  }
  return hash;
}

std::optional<std::vector<std::uint8_t>> Store::read_blob(const std::string& hash) const {
  if (hash.size() != 64 || !std::all_of(hash.begin(), hash.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
      })) {
    return std::nullopt;
  }
  std::ifstream in(blob_path(hash), std::ios::binary);
  if (!in) return std::nullopt;
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

bool Store::has_blob(const std::string& hash) const { return read_blob(hash).has_value(); }

void Store::add_person(const PersonRecord& person) {
  if (person.person_id.empty()) throw Error(ErrorCode::ValidationError, "person_id is empty");
  if (person.photo_refs.size() < 3) {
    throw Error(ErrorCode::InsufficientGallery, "a person needs at least 3 photos");
  }
  std::unique_lock lock(mu_);
  if (persons_.count(person.person_id)) throw Error(ErrorCode::DuplicatePerson, person.person_id);
  PersonRecord p = person;
  p.enrolled_at = now();
  commit({{"person", p}});
}

std::optional<PersonRecord> Store::get_person(const std::string& person_id) const {
  std::shared_lock lock(mu_);
  auto it = persons_.find(person_id);
  if (it == persons_.end()) return std::nullopt;
  return it->second;
}

std::vector<PersonRecord> Store::persons() const {
  std::shared_lock lock(mu_);
  std::vector<PersonRecord> out;
  for (const auto& [id, p] : persons_) out.push_back(p);
  return out;
}

SubmitResult Store::submit_item_report(ItemReport report) {
  if (blank(report.description) && !report.photo_ref) {
    throw Error(ErrorCode::ValidationError, "a report needs a description or a photo");
  }
  if (report.status != ItemStatus::Open) throw Error(ErrorCode::ValidationError, "new reports must be OPEN");
  validate_origin(report.origin);

  std::unique_lock lock(mu_);
  if (report.origin) {
    auto it = origins_.find(report.origin->key());
    if (it != origins_.end()) {
      auto existing = items_.find(it->second);
      if (existing != items_.end() && same_client_content(existing->second, report)) return {it->second, true};
      throw Error(ErrorCode::DuplicateOrigin, "origin " + report.origin->key() + " already used by " + it->second);
    }
    report.report_id = name_uuid("report:" + report.origin->key());
  } else {
    report.report_id = random_uuid();
  }
  report.reported_at = now();
  commit({{"item", report}});
  return {report.report_id, false};
}

SubmitResult Store::submit_person_report(PersonReport report) {
  if (report.photo_ref.empty()) throw Error(ErrorCode::ValidationError, "a person report needs a photo");
  if (report.status != PersonReportStatus::Open || report.matched_person_id) {
    throw Error(ErrorCode::ValidationError, "new reports must be OPEN and unmatched");
  }
  validate_origin(report.origin);

  std::unique_lock lock(mu_);
  if (report.origin) {
    auto it = origins_.find(report.origin->key());
    if (it != origins_.end()) {
      auto existing = person_reports_.find(it->second);
      if (existing != person_reports_.end() && same_client_content(existing->second, report)) {
        return {it->second, true};
      }
      throw Error(ErrorCode::DuplicateOrigin, "origin " + report.origin->key() + " already used by " + it->second);
    }
    report.report_id = name_uuid("report:" + report.origin->key());
  } else {
    report.report_id = random_uuid();
  }
  report.reported_at = now();
  commit({{"person_report", report}});
  return {report.report_id, false};
}

std::optional<ItemReport> Store::get_item_report(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = items_.find(id);
  if (it == items_.end()) return std::nullopt;
  return it->second;
}

std::optional<PersonReport> Store::get_person_report(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = person_reports_.find(id);
  if (it == person_reports_.end()) return std::nullopt;
  return it->second;
}

std::optional<Report> Store::get_report(const std::string& id) const {
  std::shared_lock lock(mu_);
  if (auto it = items_.find(id); it != items_.end()) return Report(it->second);
  if (auto it = person_reports_.find(id); it != person_reports_.end()) return Report(it->second);
  return std::nullopt;
}

std::vector<Report> Store::all_reports() const {
  std::shared_lock lock(mu_);
  std::vector<Report> out;
  out.reserve(items_.size() + person_reports_.size());
  for (const auto& [id, r] : items_) out.emplace_back(r);
  for (const auto& [id, r] : person_reports_) out.emplace_back(r);
  return out;
}

std::vector<Report> Store::list_reports(const ReportFilter& filter, const Page& page) const {
  if (page.number < 1 || page.size < 1 || page.size > 500) {
    throw Error(ErrorCode::BadPage, "page number must be >= 1 and size in 1..500");
  }
  const auto lower = [](const std::optional<std::string>& s) {
    return s ? std::optional<std::string>(to_lower_ascii(*s)) : std::nullopt;
  };
  const auto type = lower(filter.type);
  const auto kind = lower(filter.kind);
  const auto status = lower(filter.status);
  auto keep = [&](const char* t, std::string_view k, std::string_view s, Timestamp at) {
    if (type && *type != t) return false;
    if (kind && *kind != to_lower_ascii(k)) return false;
    if (status && *status != to_lower_ascii(s)) return false;
    if (filter.since && at < *filter.since) return false;
    if (filter.until && at > *filter.until) return false;
    return true;
  };

  std::vector<Report> hits;
  {
    std::shared_lock lock(mu_);
    for (const auto& [id, r] : items_) {
      if (keep("item", to_string(r.kind), to_string(r.status), r.reported_at)) hits.emplace_back(r);
    }
    for (const auto& [id, r] : person_reports_) {
      if (keep("person", to_string(r.kind), to_string(r.status), r.reported_at)) hits.emplace_back(r);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Report& a, const Report& b) {
    const auto ta = reported_at_of(a), tb = reported_at_of(b);
    if (ta != tb) return ta > tb;
    return report_id_of(a) < report_id_of(b);
  });
  const std::size_t begin = static_cast<std::size_t>(page.number - 1) * static_cast<std::size_t>(page.size);
  if (begin >= hits.size()) return {};
  const std::size_t end = std::min(hits.size(), begin + static_cast<std::size_t>(page.size));
  return {std::make_move_iterator(hits.begin() + static_cast<std::ptrdiff_t>(begin)),
          std::make_move_iterator(hits.begin() + static_cast<std::ptrdiff_t>(end))};
}

std::optional<std::string> Store::report_for_origin(const Origin& origin) const {
  std::shared_lock lock(mu_);
  auto it = origins_.find(origin.key());
  if (it == origins_.end()) return std::nullopt;
  return it->second;
}

ItemReport& Store::item_or_throw(const std::string& id) {
  auto it = items_.find(id);
  if (it == items_.end()) throw Error(ErrorCode::ReportNotFound, "no item report " + id);
  return it->second;
}

PersonReport& Store::person_report_or_throw(const std::string& id) {
  auto it = person_reports_.find(id);
  if (it == person_reports_.end()) throw Error(ErrorCode::ReportNotFound, "no person report " + id);
  return it->second;
}

void Store::set_person_embedding(const std::string& report_id, const Embedding& embedding) {
  std::unique_lock lock(mu_);
  PersonReport r = person_report_or_throw(report_id);
  r.embedding = embedding;
  commit({{"person_report", r}});
}

ItemReport Store::reject_item_report(const std::string& report_id) {
  std::unique_lock lock(mu_);
  ItemReport r = item_or_throw(report_id);
  if (!item_transition_allowed(r.status, ItemStatus::Rejected)) {
    throw Error(ErrorCode::InvalidTransition,
                "cannot reject a report in status " + std::string(to_string(r.status)));
  }
  r.status = ItemStatus::Rejected;
  commit({{"item", r}});
  return r;
}

ClaimResult Store::file_claim(const std::string& report_id, Claim claim) {
  std::unique_lock lock(mu_);
  auto it = items_.find(report_id);
  if (it == items_.end()) {
    if (person_reports_.count(report_id)) {
      throw Error(ErrorCode::ReportNotClaimable, "person reports cannot be claimed");
    }
    throw Error(ErrorCode::ReportNotFound, "no item report " + report_id);
  }
  if (blank(claim.evidence_text) && !claim.evidence_photo_ref) {
    throw Error(ErrorCode::EmptyEvidence, "a claim needs evidence text or an evidence photo");
  }
  ItemReport r = it->second;
  if (!item_transition_allowed(r.status, ItemStatus::ClaimPending)) {
    throw Error(ErrorCode::ReportNotClaimable, "report is " + std::string(to_string(r.status)));
  }
  const Timestamp at = now();
  claim.claim_id = random_uuid();
  claim.report_id = report_id;
  claim.filed_at = at;
  claim.decision = ClaimDecision::Pending;
  r.status = ItemStatus::ClaimPending;

  Alert alert;
  alert.alert_id = random_uuid();
  alert.kind = AlertKind::ClaimFiled;
  alert.report_ids = {report_id};
  alert.claim_id = claim.claim_id;
  alert.raised_at = at;
  commit({{"claim", claim}, {"item", r}, {"alert", alert}});
  return {claim.claim_id, alert};
}

ResolveResult Store::resolve_claim(const std::string& claim_id, ClaimDecision decision) {
  if (decision == ClaimDecision::Pending) {
    throw Error(ErrorCode::ValidationError, "decision must be ACCEPTED or DENIED");
  }
  std::unique_lock lock(mu_);
  auto it = claims_.find(claim_id);
  if (it == claims_.end()) throw Error(ErrorCode::ClaimNotFound, "no claim " + claim_id);
  if (it->second.decision != ClaimDecision::Pending) {
    throw Error(ErrorCode::AlreadyDecided, "claim already " + std::string(to_string(it->second.decision)));
  }
  Claim c = it->second;
  ItemReport r = item_or_throw(c.report_id);
  const ItemStatus next = decision == ClaimDecision::Accepted ? ItemStatus::Resolved : ItemStatus::Open;
  if (!item_transition_allowed(r.status, next)) {
    throw Error(ErrorCode::InvalidTransition, "report is " + std::string(to_string(r.status)));
  }
  c.decision = decision;
  r.status = next;
  commit({{"claim", c}, {"item", r}});
  return {c, r};
}

std::optional<Claim> Store::get_claim(const std::string& claim_id) const {
  std::shared_lock lock(mu_);
  auto it = claims_.find(claim_id);
  if (it == claims_.end()) return std::nullopt;
  return it->second;
}

std::vector<Claim> Store::claims_for(const std::string& report_id) const {
  std::shared_lock lock(mu_);
  std::vector<Claim> out;
  for (const auto& [id, c] : claims_) {
    if (c.report_id == report_id) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const Claim& a, const Claim& b) {
    return a.filed_at != b.filed_at ? a.filed_at < b.filed_at : a.claim_id < b.claim_id;
  });
  return out;
}

std::optional<Alert> Store::propose_person_match(const std::string& missing_id, const std::string& found_id,
                                                 const std::string& person_id, double distance) {
  std::unique_lock lock(mu_);
  if (alerted_pairs_.count({missing_id, found_id})) return std::nullopt;
  PersonReport missing = person_report_or_throw(missing_id);
  PersonReport found = person_report_or_throw(found_id);
  if (missing.kind != PersonReportKind::Missing || found.kind == PersonReportKind::Missing) {
    throw Error(ErrorCode::ValidationError, "a match pairs a MISSING report with a FOUND_ALIVE/DECEASED report");
  }
  for (PersonReport* r : {&missing, &found}) {
    if (r->status == PersonReportStatus::Open) {
      r->status = PersonReportStatus::MatchProposed;
      r->matched_person_id = person_id;
    } else if (r->status != PersonReportStatus::MatchProposed) {
      throw Error(ErrorCode::InvalidTransition,
                  "report " + r->report_id + " is " + std::string(to_string(r->status)));
    }
  }
  Alert alert;
  alert.alert_id = random_uuid();
  alert.kind = AlertKind::PersonMatch;
  alert.report_ids = {missing_id, found_id};
  alert.person_id = person_id;
  alert.distance = distance;
  alert.raised_at = now();
  commit({{"person_report", missing}, {"person_report", found}, {"alert", alert}});
  return alert;
}

PersonReport Store::decide_person_match(const std::string& report_id, bool confirm) {
  std::unique_lock lock(mu_);
  PersonReport r = person_report_or_throw(report_id);
  const auto next = confirm ? PersonReportStatus::Confirmed : PersonReportStatus::Open;
  if (r.status != PersonReportStatus::MatchProposed || !person_transition_allowed(r.status, next)) {
    throw Error(ErrorCode::InvalidTransition, "report is " + std::string(to_string(r.status)));
  }
  r.status = next;
  if (!confirm) r.matched_person_id.reset();
  commit({{"person_report", r}});
  return r;
}

PersonReport Store::close_person_report(const std::string& report_id) {
  std::unique_lock lock(mu_);
  PersonReport r = person_report_or_throw(report_id);
  if (!person_transition_allowed(r.status, PersonReportStatus::Closed)) {
    throw Error(ErrorCode::InvalidTransition, "report is " + std::string(to_string(r.status)));
  }
  r.status = PersonReportStatus::Closed;
  r.matched_person_id.reset();
  commit({{"person_report", r}});
  return r;
}

bool Store::pair_alerted(const std::string& missing_id, const std::string& found_id) const {
  std::shared_lock lock(mu_);
  return alerted_pairs_.count({missing_id, found_id}) > 0;
}

std::vector<Alert> Store::alerts(std::optional<bool> acknowledged) const {
  std::vector<Alert> out;
  {
    std::shared_lock lock(mu_);
    for (const auto& [id, a] : alerts_) {
      if (acknowledged && a.acknowledged_by.has_value() != *acknowledged) continue;
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end(), [](const Alert& a, const Alert& b) {
    return a.raised_at != b.raised_at ? a.raised_at > b.raised_at : a.alert_id < b.alert_id;
  });
  return out;
}

std::optional<Alert> Store::get_alert(const std::string& alert_id) const {
  std::shared_lock lock(mu_);
  auto it = alerts_.find(alert_id);
  if (it == alerts_.end()) return std::nullopt;
  return it->second;
}

Alert Store::acknowledge_alert(const std::string& alert_id, const std::string& operator_id) {
  if (operator_id.empty()) throw Error(ErrorCode::ValidationError, "operator id is empty");
  std::unique_lock lock(mu_);
  auto it = alerts_.find(alert_id);
  if (it == alerts_.end()) throw Error(ErrorCode::AlertNotFound, "no alert " + alert_id);
  if (it->second.acknowledged_by) {
    throw Error(ErrorCode::AlreadyAcknowledged, "alert acknowledged by " + *it->second.acknowledged_by);
  }
  Alert a = it->second;
  a.acknowledged_by = operator_id;
  a.acknowledged_at = now();
  commit({{"alert", a}});
  return a;
}

std::int64_t Store::high_water(const std::string& kiosk_id) const {
  std::shared_lock lock(mu_);
  auto it = high_water_.find(kiosk_id);
  return it == high_water_.end() ? 0 : it->second;
}

std::string Store::canonical_state(bool strip_server_times) const {
  std::shared_lock lock(mu_);
  std::string out;
  auto add = [&](const char* type, const auto& map) {
    for (const auto& [id, v] : map) {
      json j = v;
      if (strip_server_times) strip_times(j);
      out += type;
      out += ' ';
      out += canonical_json(j);
      out += '\n';
    }
  };
  add("person", persons_);
  add("item", items_);
  add("person_report", person_reports_);
  add("claim", claims_);
  add("alert", alerts_);
  for (const auto& [kiosk, seq] : high_water_) out += "high_water " + kiosk + " " + std::to_string(seq) + "\n";
  return out;
}

}  // namespace mf
