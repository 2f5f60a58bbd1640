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

#include "mfhajj/records.hpp"

#include <array>
#include <utility>

#include "mfhajj/error.hpp"

namespace mf {

using nlohmann::json;

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<ItemKind, 2> kItemKinds{{{ItemKind::Found, "FOUND"}, {ItemKind::Lost, "LOST"}}};
constexpr NameTable<ItemCategory, 6> kCategories{{{ItemCategory::Watch, "watch"},
                                                  {ItemCategory::Phone, "phone"},
                                                  {ItemCategory::Bag, "bag"},
                                                  {ItemCategory::Document, "document"},
                                                  {ItemCategory::Jewelry, "jewelry"},
                                                  {ItemCategory::Other, "other"}}};
constexpr NameTable<ItemStatus, 4> kItemStatuses{{{ItemStatus::Open, "OPEN"},
                                                  {ItemStatus::ClaimPending, "CLAIM_PENDING"},
                                                  {ItemStatus::Resolved, "RESOLVED"},
                                                  {ItemStatus::Rejected, "REJECTED"}}};
constexpr NameTable<PersonReportKind, 3> kPersonKinds{{{PersonReportKind::Missing, "MISSING"},
                                                       {PersonReportKind::FoundAlive, "FOUND_ALIVE"},
                                                       {PersonReportKind::Deceased, "DECEASED"}}};
constexpr NameTable<PersonReportStatus, 4> kPersonStatuses{{{PersonReportStatus::Open, "OPEN"},
                                                            {PersonReportStatus::MatchProposed, "MATCH_PROPOSED"},
                                                            {PersonReportStatus::Confirmed, "CONFIRMED"},
                                                            {PersonReportStatus::Closed, "CLOSED"}}};
constexpr NameTable<ClaimDecision, 3> kDecisions{{{ClaimDecision::Pending, "PENDING"},
                                                  {ClaimDecision::Accepted, "ACCEPTED"},
                                                  {ClaimDecision::Denied, "DENIED"}}};
constexpr NameTable<AlertKind, 2> kAlertKinds{{{AlertKind::PersonMatch, "PERSON_MATCH"},
                                               {AlertKind::ClaimFiled, "CLAIM_FILED"}}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E v) {
  for (const auto& [e, n] : table) {
    if (e == v) return n;
  }
  return "?";
}

template <typename E, std::size_t N>
E parse_name(const NameTable<E, N>& table, std::string_view s, const char* what) {
  const std::string lower = to_lower_ascii(s);
  for (const auto& [e, n] : table) {
    if (to_lower_ascii(n) == lower) return e;
  }
  throw Error(ErrorCode::ValidationError, std::string("unknown ") + what + " '" + std::string(s) + "'");
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

void put_optional_ts(json& j, const char* key, const std::optional<Timestamp>& v) {
  if (v) j[key] = format_timestamp(*v);
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  auto it = j.find(key);
  if (it != j.end() && !it->is_null()) {
    v = it->get<T>();
  } else {
    v.reset();
  }
}

std::optional<Timestamp> get_optional_ts(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return parse_timestamp(it->get<std::string>());
}

Timestamp get_ts(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return 0;
  return parse_timestamp(it->get<std::string>());
}

std::string get_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(ItemKind v) { return name_of(kItemKinds, v); }
std::string_view to_string(ItemCategory v) { return name_of(kCategories, v); }
std::string_view to_string(ItemStatus v) { return name_of(kItemStatuses, v); }
std::string_view to_string(PersonReportKind v) { return name_of(kPersonKinds, v); }
std::string_view to_string(PersonReportStatus v) { return name_of(kPersonStatuses, v); }
std::string_view to_string(ClaimDecision v) { return name_of(kDecisions, v); }
std::string_view to_string(AlertKind v) { return name_of(kAlertKinds, v); }

ItemKind parse_item_kind(std::string_view s) { return parse_name(kItemKinds, s, "item kind"); }
ItemCategory parse_item_category(std::string_view s) { return parse_name(kCategories, s, "category"); }
ItemStatus parse_item_status(std::string_view s) { return parse_name(kItemStatuses, s, "item status"); }
PersonReportKind parse_person_report_kind(std::string_view s) {
  return parse_name(kPersonKinds, s, "person report kind");
}
PersonReportStatus parse_person_report_status(std::string_view s) {
  return parse_name(kPersonStatuses, s, "person report status");
}
ClaimDecision parse_claim_decision(std::string_view s) { return parse_name(kDecisions, s, "decision"); }
AlertKind parse_alert_kind(std::string_view s) { return parse_name(kAlertKinds, s, "alert kind"); }

bool item_transition_allowed(ItemStatus from, ItemStatus to) {
  switch (from) {
    case ItemStatus::Open: return to == ItemStatus::ClaimPending || to == ItemStatus::Rejected;
    case ItemStatus::ClaimPending: return to == ItemStatus::Resolved || to == ItemStatus::Open;
    case ItemStatus::Resolved:
    case ItemStatus::Rejected: return false;
  }
  return false;
}

bool person_transition_allowed(PersonReportStatus from, PersonReportStatus to) {
  switch (from) {
    case PersonReportStatus::Open:
      return to == PersonReportStatus::MatchProposed || to == PersonReportStatus::Closed;
    case PersonReportStatus::MatchProposed:
      return to == PersonReportStatus::Confirmed || to == PersonReportStatus::Open;
    case PersonReportStatus::Confirmed: return to == PersonReportStatus::Closed;
    case PersonReportStatus::Closed: return false;
  }
  return false;
}

void to_json(json& j, const Origin& v) { j = json{{"kiosk_id", v.kiosk_id}, {"seq", v.seq}}; }
void from_json(const json& j, Origin& v) {
  v.kiosk_id = j.at("kiosk_id").get<std::string>();
  v.seq = j.at("seq").get<std::int64_t>();
}

void to_json(json& j, const Embedding& v) {
  j = json{{"coords", v.coords}, {"model_version", v.model_version}};
}
void from_json(const json& j, Embedding& v) {
  v.coords = j.at("coords").get<std::vector<double>>();
  v.model_version = j.at("model_version").get<std::uint64_t>();
}

void to_json(json& j, const PersonRecord& v) {
  j = json{{"person_id", v.person_id},       {"full_name", v.full_name},
           {"nationality", v.nationality},   {"enrolled_at", format_timestamp(v.enrolled_at)},
           {"photo_refs", v.photo_refs}};
  put_optional(j, "group_id", v.group_id);
}
void from_json(const json& j, PersonRecord& v) {
  v.person_id = get_string(j, "person_id");
  v.full_name = get_string(j, "full_name");
  v.nationality = get_string(j, "nationality");
  get_optional(j, "group_id", v.group_id);
  v.enrolled_at = get_ts(j, "enrolled_at");
  v.photo_refs = j.value("photo_refs", std::vector<std::string>{});
}

void to_json(json& j, const ItemReport& v) {
  j = json{{"report_id", v.report_id},
           {"type", "item"},
           {"kind", to_string(v.kind)},
           {"category", to_string(v.category)},
           {"description", v.description},
           {"location", v.location},
           {"reported_at", format_timestamp(v.reported_at)},
           {"status", to_string(v.status)}};
  put_optional_ts(j, "claimed_time", v.claimed_time);
  put_optional(j, "photo_ref", v.photo_ref);
  put_optional(j, "origin", v.origin);
}
void from_json(const json& j, ItemReport& v) {
  v.report_id = get_string(j, "report_id");
  v.kind = parse_item_kind(j.at("kind").get<std::string>());
  v.category = parse_item_category(j.value("category", std::string("other")));
  v.description = get_string(j, "description");
  v.location = get_string(j, "location");
  v.reported_at = get_ts(j, "reported_at");
  v.claimed_time = get_optional_ts(j, "claimed_time");
  get_optional(j, "photo_ref", v.photo_ref);
  v.status = parse_item_status(j.value("status", std::string("OPEN")));
  get_optional(j, "origin", v.origin);
}

void to_json(json& j, const PersonReport& v) {
  j = json{{"report_id", v.report_id},
           {"type", "person"},
           {"kind", to_string(v.kind)},
           {"photo_ref", v.photo_ref},
           {"location", v.location},
           {"description", v.description},
           {"reported_at", format_timestamp(v.reported_at)},
           {"status", to_string(v.status)}};
  put_optional(j, "embedding", v.embedding);
  put_optional(j, "subject_person_id", v.subject_person_id);
  put_optional_ts(j, "claimed_time", v.claimed_time);
  put_optional(j, "matched_person_id", v.matched_person_id);
  put_optional(j, "origin", v.origin);
}
void from_json(const json& j, PersonReport& v) {
  v.report_id = get_string(j, "report_id");
  v.kind = parse_person_report_kind(j.at("kind").get<std::string>());
  v.photo_ref = get_string(j, "photo_ref");
  get_optional(j, "embedding", v.embedding);
  v.location = get_string(j, "location");
  v.description = get_string(j, "description");
  get_optional(j, "subject_person_id", v.subject_person_id);
  v.reported_at = get_ts(j, "reported_at");
  v.claimed_time = get_optional_ts(j, "claimed_time");
  v.status = parse_person_report_status(j.value("status", std::string("OPEN")));
  get_optional(j, "matched_person_id", v.matched_person_id);
  get_optional(j, "origin", v.origin);
}

void to_json(json& j, const Claim& v) {
  j = json{{"claim_id", v.claim_id},         {"report_id", v.report_id},
           {"claimant_name", v.claimant_name}, {"evidence_text", v.evidence_text},
           {"filed_at", format_timestamp(v.filed_at)}, {"decision", to_string(v.decision)}};
  put_optional(j, "evidence_photo_ref", v.evidence_photo_ref);
}
void from_json(const json& j, Claim& v) {
  v.claim_id = get_string(j, "claim_id");
  v.report_id = get_string(j, "report_id");
  v.claimant_name = get_string(j, "claimant_name");
  v.evidence_text = get_string(j, "evidence_text");
  get_optional(j, "evidence_photo_ref", v.evidence_photo_ref);
  v.filed_at = get_ts(j, "filed_at");
  v.decision = parse_claim_decision(j.value("decision", std::string("PENDING")));
}

void to_json(json& j, const Alert& v) {
  j = json{{"alert_id", v.alert_id},
           {"kind", to_string(v.kind)},
           {"report_ids", v.report_ids},
           {"raised_at", format_timestamp(v.raised_at)}};
  put_optional(j, "claim_id", v.claim_id);
  put_optional(j, "person_id", v.person_id);
  put_optional(j, "distance", v.distance);
  put_optional(j, "acknowledged_by", v.acknowledged_by);
  put_optional_ts(j, "acknowledged_at", v.acknowledged_at);
}
void from_json(const json& j, Alert& v) {
  v.alert_id = get_string(j, "alert_id");
  v.kind = parse_alert_kind(j.at("kind").get<std::string>());
  v.report_ids = j.value("report_ids", std::vector<std::string>{});
  get_optional(j, "claim_id", v.claim_id);
  get_optional(j, "person_id", v.person_id);
  get_optional(j, "distance", v.distance);
  v.raised_at = get_ts(j, "raised_at");
  get_optional(j, "acknowledged_by", v.acknowledged_by);
  v.acknowledged_at = get_optional_ts(j, "acknowledged_at");
}

std::string canonical_json(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

}  // namespace mf
