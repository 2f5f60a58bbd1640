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
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfhajj/records.hpp"

namespace mf {

inline constexpr std::size_t kMaxPhotoBytes = 8u << 20;

/// A client-submitted report before the server assigns ids and times. Used
/// by the HTTP API, sync batches and the kiosk outbox.
///
///   {"kind": "FOUND", "category": "watch", "description": "...",
///    "location": "...", "claimed_time": "2026-...Z", "photo_b64": "..."}
///   {"kind": "MISSING", "location": "...", "description": "...",
///    "subject_person_id": "...", "photo_b64": "..."}
struct ReportSubmission {
  std::variant<ItemReport, PersonReport> report;
  std::optional<std::vector<std::uint8_t>> photo;

  bool is_item() const { return std::holds_alternative<ItemReport>(report); }
};

/// `type` is "item" or "person". Throws ValidationError.
ReportSubmission parse_submission(const nlohmann::json& payload, std::string_view type);

/// The registry's acceptance rules, checked before anything is stored:
/// items need a description or a photo, person reports need a photo.
void validate_submission(const ReportSubmission& submission);

nlohmann::json submission_to_json(const ReportSubmission& submission);

}  // namespace mf
