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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mf {

/// Milliseconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

Timestamp now_utc();

/// "2026-10-18T04:37:00.123Z"
std::string format_timestamp(Timestamp ts);

/// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS[.mmm]Z" (trailing Z optional).
/// Throws ValidationError on anything else.
Timestamp parse_timestamp(std::string_view text);

/// Random v4 UUID, lowercase canonical form.
std::string random_uuid();

/// Name-based v5 UUID (SHA-1) in a fixed namespace; stable across runs.
std::string name_uuid(std::string_view name);

/// CRC-32C (Castagnoli).
std::uint32_t crc32c(std::span<const std::uint8_t> data);
inline std::uint32_t crc32c(std::string_view data) {
  return crc32c({reinterpret_cast<const std::uint8_t*>(data.data()), data.size()});
}

std::string sha256_hex(std::span<const std::uint8_t> data);

std::string base64_encode(std::span<const std::uint8_t> data);
/// Throws ValidationError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string to_lower_ascii(std::string_view s);

}  // namespace mf
