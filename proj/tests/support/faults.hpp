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
#include <random>
#include <string>
#include <vector>

#include "mfhajj/kiosk.hpp"

namespace mftest {

/// Thrown from the after_ack hook to stand in for the kiosk process dying
/// after the server answered but before the outbox recorded it.
struct KioskKilled {};

struct FaultCounts {
  int dropped_requests = 0;  // never reached the server
  int lost_acks = 0;         // reached the server, answer lost
  int duplicated = 0;        // delivered twice
  int stale_replays = 0;     // an older batch delivered again first
  int reordered = 0;         // an older batch delivered again afterwards
  int kills = 0;
  int runs = 0;              // sync_replay invocations
};

/// Wraps a transport and misbehaves at random.
class FaultyTransport : public mf::SyncTransport {
 public:
  FaultyTransport(mf::SyncTransport& inner, std::uint64_t seed, FaultCounts& counts, int fault_percent = 35)
      : inner_(inner), rng_(seed), counts_(counts), percent_(fault_percent) {}
  mf::SyncAck post_batch(const mf::SyncBatch& batch) override;

 private:
  bool roll() { return static_cast<int>(rng_() % 100) < percent_; }

  mf::SyncTransport& inner_;
  std::mt19937_64 rng_;
  FaultCounts& counts_;
  int percent_;
  std::vector<mf::SyncBatch> delivered_;
};

struct SyncTrialResult {
  bool equal = false;        // final store == no-fault reference store
  bool drained = false;      // outbox ended with nothing unsent
  int reports = 0;
  FaultCounts faults;
  std::string first_difference;
};

/// One randomized exactly-once trial: queue reports in a kiosk outbox, push
/// them through a FaultyTransport into a fresh service (restarting the kiosk
/// whenever it is "killed"), then compare with a service fed the same reports
/// without faults. `dir` must be empty.
SyncTrialResult run_sync_trial(std::uint64_t seed, const std::filesystem::path& dir);

}  // namespace mftest
