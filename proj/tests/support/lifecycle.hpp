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
#include <map>
#include <string>
#include <vector>

namespace mftest {

struct LifecycleStats {
  int sequences = 0;
  int operations = 0;
  int rejected_operations = 0;  // operations the store refused with an error
  std::map<std::string, int> edges;  // "item OPEN->CLAIM_PENDING" -> count
  std::vector<std::string> forbidden;  // human-readable violations
  int left_resolved = 0;
  int active_claim_violations = 0;  // reports with more than one non-DENIED claim
  int match_field_violations = 0;   // matched_person_id set iff MATCH_PROPOSED/CONFIRMED
};

/// Runs `sequences` random operation sequences against one store in `dir`,
/// each over its own fresh reports, and records every status change seen.
/// The allowed edges are written out here, independently of the library's
/// transition tables. The store is reopened every `reopen_every` sequences
/// and must replay to the same statuses.
LifecycleStats run_lifecycle_sequences(std::uint64_t seed, int sequences, const std::filesystem::path& dir,
                                       int ops_per_sequence = 16, int reopen_every = 500);

}  // namespace mftest
