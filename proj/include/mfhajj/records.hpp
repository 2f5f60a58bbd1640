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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfhajj/recognition.hpp"
#include "mfhajj/util.hpp"

namespace mf {

enum class ItemKind { Found, Lost };
enum class ItemCategory { Watch, Phone, Bag, Document, Jewelry, Other };
enum class ItemStatus { Open, ClaimPending, Resolved, Rejected };
enum class PersonReportKind { Missing, FoundAlive, Deceased };
enum class PersonReportStatus { Open, MatchProposed, Confirmed, Closed };
enum class ClaimDecision { Pending, Accepted, Denied };
enum class AlertKind { PersonMatch, ClaimFiled };

std::string_view to_string(ItemKind v);
std::string_view to_string(ItemCategory v);
std::string_view to_string(ItemStatus v);
std::string_view to_string(PersonReportKind v);
std::string_view to_string(PersonReportStatus v);
std::string_view to_string(ClaimDecision v);
std::string_view to_string(AlertKind v);

// Case-insensitive; throw ValidationError on unknown names.
ItemKind parse_item_kind(std::string_view s);
ItemCategory parse_item_category(std::string_view s);
ItemStatus parse_item_status(std::string_view s);
PersonReportKind parse_person_report_kind(std::string_view s);
PersonReportStatus parse_person_report_status(std::string_view s);
ClaimDecision parse_claim_decision(std::string_view s);
AlertKind parse_alert_kind(std::string_view s);

/// Item lifecycle: OPEN -> CLAIM_PENDING -> RESOLVED, CLAIM_PENDING -> OPEN
/// (claim denied), OPEN -> REJECTED. RESOLVED and REJECTED are terminal.
bool item_transition_allowed(ItemStatus from, ItemStatus to);
/// OPEN -> MATCH_PROPOSED -> CONFIRMED -> CLOSED, MATCH_PROPOSED -> OPEN
/// (match rejected), OPEN -> CLOSED.
bool person_transition_allowed(PersonReportStatus from, PersonReportStatus to);

/// Where a report entered the system; (kiosk_id, seq) is the dedup key.
struct Origin {
  std::string kiosk_id;
  std::int64_t seq = 0;

  std::string key() const { return kiosk_id + "#" + std::to_string(seq); }
  bool operator==(const Origin&) const = default;
};

struct PersonRecord {
  std::string person_id;
  std::string full_name;
  std::string nationality;
  std::optional<std::string> group_id;
  Timestamp enrolled_at = 0;
  std::vector<std::string> photo_refs;  // content hashes, >= 3

  bool operator==(const PersonRecord&) const = default;
};

struct ItemReport {
  std::string report_id;
  ItemKind kind = ItemKind::Found;
  ItemCategory category = ItemCategory::Other;
  std::string description;
  std::string location;
  Timestamp reported_at = 0;                // server clock at commit
  std::optional<Timestamp> claimed_time;    // client clock, informational
  std::optional<std::string> photo_ref;
  ItemStatus status = ItemStatus::Open;
  std::optional<Origin> origin;

  bool operator==(const ItemReport&) const = default;
};

struct PersonReport {
  std::string report_id;
  PersonReportKind kind = PersonReportKind::Missing;
  std::string photo_ref;
  std::optional<Embedding> embedding;
  std::string location;
  std::string description;
  /// Enrolled pilgrim a MISSING report is about.
  std::optional<std::string> subject_person_id;
  Timestamp reported_at = 0;
  std::optional<Timestamp> claimed_time;
  PersonReportStatus status = PersonReportStatus::Open;
  std::optional<std::string> matched_person_id;
  std::optional<Origin> origin;

  bool operator==(const PersonReport&) const = default;
};

struct Claim {
  std::string claim_id;
  std::string report_id;
  std::string claimant_name;
  std::string evidence_text;
  std::optional<std::string> evidence_photo_ref;
  Timestamp filed_at = 0;
  ClaimDecision decision = ClaimDecision::Pending;

  bool operator==(const Claim&) const = default;
};

struct Alert {
  std::string alert_id;
  AlertKind kind = AlertKind::PersonMatch;
  std::vector<std::string> report_ids;  // PERSON_MATCH: {missing, found}; CLAIM_FILED: {report}
  std::optional<std::string> claim_id;
  std::optional<std::string> person_id;
  std::optional<double> distance;
  Timestamp raised_at = 0;
  std::optional<std::string> acknowledged_by;
  std::optional<Timestamp> acknowledged_at;

  bool operator==(const Alert&) const = default;
};

void to_json(nlohmann::json& j, const Origin& v);
void from_json(const nlohmann::json& j, Origin& v);
void to_json(nlohmann::json& j, const Embedding& v);
void from_json(const nlohmann::json& j, Embedding& v);
void to_json(nlohmann::json& j, const PersonRecord& v);
void from_json(const nlohmann::json& j, PersonRecord& v);
void to_json(nlohmann::json& j, const ItemReport& v);
void from_json(const nlohmann::json& j, ItemReport& v);
void to_json(nlohmann::json& j, const PersonReport& v);
void from_json(const nlohmann::json& j, PersonReport& v);
void to_json(nlohmann::json& j, const Claim& v);
void from_json(const nlohmann::json& j, Claim& v);
void to_json(nlohmann::json& j, const Alert& v);
void from_json(const nlohmann::json& j, Alert& v);

/// Compact JSON with sorted keys (nlohmann objects are ordered maps).
std::string canonical_json(const nlohmann::json& j);

}  // namespace mf
