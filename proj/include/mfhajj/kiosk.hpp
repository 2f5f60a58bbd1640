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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfhajj/error.hpp"
#include "mfhajj/payload.hpp"
#include "mfhajj/record_log.hpp"
#include "mfhajj/service.hpp"

namespace mf {

struct OutboxEntry {
  std::int64_t seq = 0;
  std::string type;     // item | person
  nlohmann::json report;
  Timestamp created_at = 0;
  bool sent = false;
};

/// A kiosk's durable queue of reports awaiting delivery. Same record format
/// as the registry log; every change is an appended record:
///
///   {"op":"queue","seq":n,"type":..,"report":{..},"created_at":..}
///   {"op":"sent","seqs":[..]}
///   {"op":"renumber","first":n}      unsent entries move to n, n+1, ...
///   {"op":"attempt"}                 first contact with a server
///
/// An exclusive flock on <dir>/outbox.lock keeps two processes apart.
class Outbox {
 public:
  static constexpr std::size_t kDefaultCapacity = 10000;

  Outbox(const std::filesystem::path& dir, std::size_t capacity = kDefaultCapacity, bool sync_writes = true);

  /// Validates, appends with the next seq and returns it. Throws
  /// ValidationError (outbox unchanged) or OutboxFull.
  std::int64_t queue_report(const ReportSubmission& submission, Timestamp now = now_utc());

  std::vector<OutboxEntry> entries() const;
  std::vector<OutboxEntry> unsent() const;
  std::size_t unsent_count() const;
  std::int64_t next_seq() const { return next_seq_; }
  bool attempted() const { return attempted_; }
  std::size_t capacity() const { return capacity_; }

  void mark_sent(const std::vector<std::int64_t>& seqs);
  /// Renumbers unsent entries densely from `first`; only before any contact.
  void renumber_unsent(std::int64_t first);
  void record_attempt();

 private:
  void apply(const nlohmann::json& op);
  void append(const nlohmann::json& op);

  FileLock lock_;
  RecordLog log_;
  std::size_t capacity_;
  std::map<std::int64_t, OutboxEntry> entries_;
  std::int64_t next_seq_ = 1;
  bool attempted_ = false;
};

/// Something that can deliver a batch and return the server's ack. Throws
/// Error(ServerUnreachable) for transport failures and AuthFailure when the
/// server rejects the credential.
class SyncTransport {
 public:
  virtual ~SyncTransport() = default;
  virtual SyncAck post_batch(const SyncBatch& batch) = 0;
};

/// Minimal /api/v1 client. Non-2xx answers are rethrown as the server's
/// error code; 401/403 become AuthFailure, 5xx and transport failures
/// ServerUnreachable.
class ApiClient {
 public:
  ApiClient(const std::string& base_url, const std::string& token,
            std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~ApiClient();
  ApiClient(const ApiClient&) = delete;
  ApiClient& operator=(const ApiClient&) = delete;

  nlohmann::json get(const std::string& path, const std::map<std::string, std::string>& params = {});
  nlohmann::json post_json(const std::string& path, const nlohmann::json& body);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// POST /api/v1/sync/batches with a bearer token.
class HttpSyncTransport : public SyncTransport {
 public:
  HttpSyncTransport(const std::string& base_url, const std::string& token,
                    std::chrono::milliseconds timeout = std::chrono::seconds(10))
      : client_(base_url, token, timeout) {}
  SyncAck post_batch(const SyncBatch& batch) override;

 private:
  ApiClient client_;
};

/// Calls an in-process service directly, as the given principal.
class InProcessTransport : public SyncTransport {
 public:
  InProcessTransport(MfService& service, Principal who) : service_(service), who_(std::move(who)) {}
  SyncAck post_batch(const SyncBatch& batch) override { return service_.ingest_sync_batch(who_, batch); }

 private:
  MfService& service_;
  Principal who_;
};

struct SyncOptions {
  std::size_t batch_size = 100;
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{200};
  /// Replaceable for tests.
  std::function<void(std::chrono::milliseconds)> sleep;
  /// Called after an ack arrives and before it is recorded locally.
  std::function<void(const SyncAck&)> after_ack;
};

struct SyncSummary {
  int sent = 0;          // entries marked sent by this run
  int duplicates = 0;    // of those, how many the server already had
  std::int64_t high_water = 0;
  int batches = 0;
  int retries = 0;
};

/// Delivers every unsent entry in seq order, at most batch_size per batch,
/// retrying transport failures with exponential backoff. Entries are marked
/// sent only after the server acknowledges them, so an interrupted run can
/// simply be repeated.
SyncSummary sync_replay(Outbox& outbox, const std::string& kiosk_id, SyncTransport& transport,
                        const SyncOptions& options = {});

/// Process exit status for the command-line tools: 2 validation, 3 network,
/// 4 auth, 5 corruption, 1 anything else.
int cli_exit_code(ErrorCode code);

}  // namespace mf
