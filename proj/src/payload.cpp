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

#include "mfhajj/payload.hpp"

#include <algorithm>

#include "mfhajj/error.hpp"

namespace mf {

using nlohmann::json;

namespace {

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error(ErrorCode::ValidationError, std::string(key) + " must be a string");
  return it->get<std::string>();
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

}  // namespace

ReportSubmission parse_submission(const json& payload, std::string_view type) {
  if (!payload.is_object()) throw Error(ErrorCode::ValidationError, "report must be a JSON object");
  ReportSubmission out;
  const std::string photo_b64 = string_field(payload, "photo_b64");
  if (!photo_b64.empty()) {
    out.photo = base64_decode(photo_b64);
    if (out.photo->size() > kMaxPhotoBytes) throw Error(ErrorCode::PayloadTooLarge, "photo exceeds 8 MiB");
  }
  std::optional<Timestamp> claimed;
  if (const std::string t = string_field(payload, "claimed_time"); !t.empty()) claimed = parse_timestamp(t);

  const std::string kind = string_field(payload, "kind");
  if (kind.empty()) throw Error(ErrorCode::ValidationError, "kind is required");
  if (type == "item") {
    ItemReport r;
    r.kind = parse_item_kind(kind);
    const std::string category = string_field(payload, "category");
    r.category = category.empty() ? ItemCategory::Other : parse_item_category(category);
    r.description = string_field(payload, "description");
    r.location = string_field(payload, "location");
    r.claimed_time = claimed;
    out.report = std::move(r);
  } else if (type == "person") {
    PersonReport r;
    r.kind = parse_person_report_kind(kind);
    r.description = string_field(payload, "description");
    r.location = string_field(payload, "location");
    if (const std::string s = string_field(payload, "subject_person_id"); !s.empty()) r.subject_person_id = s;
    r.claimed_time = claimed;
    out.report = std::move(r);
  } else {
    throw Error(ErrorCode::ValidationError, "report type must be item or person");
  }
  return out;
}

void validate_submission(const ReportSubmission& submission) {
  const bool has_photo = submission.photo && !submission.photo->empty();
  if (const auto* item = std::get_if<ItemReport>(&submission.report)) {
    if (blank(item->description) && !has_photo) {
      throw Error(ErrorCode::ValidationError, "a report needs a description or a photo");
    }
  } else if (!has_photo) {
    throw Error(ErrorCode::ValidationError, "a person report needs a photo");
  }
}

json submission_to_json(const ReportSubmission& submission) {
  json j;
  std::optional<Timestamp> claimed;
  if (const auto* item = std::get_if<ItemReport>(&submission.report)) {
    j = {{"kind", to_string(item->kind)},
         {"category", to_string(item->category)},
         {"description", item->description},
         {"location", item->location}};
    claimed = item->claimed_time;
  } else {
    const auto& p = std::get<PersonReport>(submission.report);
    j = {{"kind", to_string(p.kind)}, {"description", p.description}, {"location", p.location}};
    if (p.subject_person_id) j["subject_person_id"] = *p.subject_person_id;
    claimed = p.claimed_time;
  }
  if (claimed) j["claimed_time"] = format_timestamp(*claimed);
  if (submission.photo) j["photo_b64"] = base64_encode(*submission.photo);
  return j;
}

}  // namespace mf
