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

#include "mfhajj/kiosk.hpp"

#include <httplib.h>

#include <algorithm>
#include <thread>

#include "mfhajj/error.hpp"

namespace mf {

using nlohmann::json;

Outbox::Outbox(const std::filesystem::path& dir, std::size_t capacity, bool sync_writes) : capacity_(capacity) {
  std::filesystem::create_directories(dir);
  lock_ = FileLock(dir / "outbox.lock");
  const auto path = dir / "outbox.log";
  ReplayResult replay = replay_records(path);
  if (replay.corrupt) {
    throw Error(ErrorCode::CorruptLog, "outbox damaged at offset " + std::to_string(replay.stop_offset) + ": " + replay.detail,
                std::to_string(replay.stop_offset));
  }
  for (const auto& rec : replay.records) {
    try {
      apply(json::parse(rec.payload));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CorruptLog, "unreadable outbox record at offset " + std::to_string(rec.offset),
                  std::to_string(rec.offset));
    }
  }
  log_ = RecordLog(path, sync_writes);
  if (replay.torn_tail) log_.truncate(replay.valid_bytes);
}

void Outbox::apply(const json& op) {
  const std::string kind = op.at("op").get<std::string>();
  if (kind == "queue") {
    OutboxEntry e;
    e.seq = op.at("seq").get<std::int64_t>();
    e.type = op.at("type").get<std::string>();
    e.report = op.at("report");
    e.created_at = op.at("created_at").get<Timestamp>();
    next_seq_ = std::max(next_seq_, e.seq + 1);
    entries_[e.seq] = std::move(e);
  } else if (kind == "sent") {
    for (const auto seq : op.at("seqs").get<std::vector<std::int64_t>>()) {
      if (auto it = entries_.find(seq); it != entries_.end()) it->second.sent = true;
    }
  } else if (kind == "renumber") {
    std::int64_t next = op.at("first").get<std::int64_t>();
    std::map<std::int64_t, OutboxEntry> renumbered;
    std::int64_t after_sent = 1;
    for (auto& [seq, e] : entries_) {
      if (e.sent) {
        after_sent = std::max(after_sent, seq + 1);
        renumbered[seq] = std::move(e);
      }
    }
    for (auto& [seq, e] : entries_) {
      if (e.sent) continue;
      e.seq = next++;
      renumbered[e.seq] = std::move(e);
    }
    entries_ = std::move(renumbered);
    next_seq_ = std::max(after_sent, next);
  } else if (kind == "attempt") {
    attempted_ = true;
  } else {
    throw Error(ErrorCode::CorruptLog, "unknown outbox op '" + kind + "'");
  }
}

void Outbox::append(const json& op) {
  log_.append(canonical_json(op));
  apply(op);
}

std::int64_t Outbox::queue_report(const ReportSubmission& submission, Timestamp now) {
  validate_submission(submission);
  if (unsent_count() >= capacity_) {
    throw Error(ErrorCode::OutboxFull, "outbox holds " + std::to_string(capacity_) + " unsent reports");
  }
  const std::int64_t seq = next_seq_;
  append({{"op", "queue"},
          {"seq", seq},
          {"type", submission.is_item() ? "item" : "person"},
          {"report", submission_to_json(submission)},
          {"created_at", now}});
  return seq;
}

std::vector<OutboxEntry> Outbox::entries() const {
  std::vector<OutboxEntry> out;
  for (const auto& [seq, e] : entries_) out.push_back(e);
  return out;
}

std::vector<OutboxEntry> Outbox::unsent() const {
  std::vector<OutboxEntry> out;
  for (const auto& [seq, e] : entries_) {
    if (!e.sent) out.push_back(e);
  }
  return out;
}

std::size_t Outbox::unsent_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const auto& kv) { return !kv.second.sent; }));
}

void Outbox::mark_sent(const std::vector<std::int64_t>& seqs) {
  if (seqs.empty()) return;
  append({{"op", "sent"}, {"seqs", seqs}});
}

void Outbox::renumber_unsent(std::int64_t first) {
  if (attempted_) throw Error(ErrorCode::InvalidArgument, "cannot renumber after contacting a server");
  append({{"op", "renumber"}, {"first", first}});
}

void Outbox::record_attempt() {
  if (!attempted_) append({{"op", "attempt"}});
}

struct ApiClient::Impl {
  httplib::Client client;
  Impl(const std::string& url, const std::string& token, std::chrono::milliseconds timeout) : client(url) {
    if (!token.empty()) client.set_bearer_token_auth(token);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
  }
};

namespace {

json answer(const httplib::Result& res, const std::string& path) {
  if (!res) throw Error(ErrorCode::ServerUnreachable, path + ": " + httplib::to_string(res.error()));
  if (res->status >= 200 && res->status < 300) return res->body.empty() ? json::object() : json::parse(res->body);
  ErrorCode code = res->status >= 500 ? ErrorCode::ServerUnreachable : ErrorCode::InvalidArgument;
  std::string message = path + ": server answered " + std::to_string(res->status);
  std::string detail;
  try {
    const json body = json::parse(res->body);
    if (auto c = error_code_from_string(body.value("code", "")); c && res->status < 500) code = *c;
    message = body.value("message", message);
    detail = body.value("detail", "");
  } catch (const json::exception&) {
  }
  if (res->status == 401 || res->status == 403) code = ErrorCode::AuthFailure;
  throw Error(code, message, detail);
}

}  // namespace

ApiClient::ApiClient(const std::string& base_url, const std::string& token, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(base_url, token, timeout)) {}

ApiClient::~ApiClient() = default;

json ApiClient::get(const std::string& path, const std::map<std::string, std::string>& params) {
  httplib::Params query(params.begin(), params.end());
  return answer(impl_->client.Get(path, query, httplib::Headers{}), path);
}

json ApiClient::post_json(const std::string& path, const json& body) {
  return answer(impl_->client.Post(path, body.dump(), "application/json"), path);
}

SyncAck HttpSyncTransport::post_batch(const SyncBatch& batch) {
  return sync_ack_from_json(client_.post_json("/api/v1/sync/batches", to_json(batch)));
}

SyncSummary sync_replay(Outbox& outbox, const std::string& kiosk_id, SyncTransport& transport,
                        const SyncOptions& options) {
  if (options.batch_size < 1 || options.batch_size > 100) {
    throw Error(ErrorCode::InvalidArgument, "batch size must be in 1..100");
  }
  SyncSummary summary;
  auto sleep = options.sleep ? options.sleep : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

  auto post = [&](const SyncBatch& batch) {
    auto backoff = options.initial_backoff;
    for (int attempt = 1;; ++attempt) {
      try {
        return transport.post_batch(batch);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ServerUnreachable || attempt >= options.max_attempts) throw;
      }
      ++summary.retries;
      sleep(backoff);
      backoff *= 2;
    }
  };

  if (!outbox.attempted()) {
    // A reinstalled kiosk starts counting from 1 again; an empty batch tells
    // it where the server's record of this kiosk ends.
    const SyncAck probe = post(make_sync_batch(kiosk_id, {}));
    summary.high_water = probe.high_water_seq;
    const auto pending = outbox.unsent();
    if (!pending.empty() && pending.front().seq <= probe.high_water_seq) {
      outbox.renumber_unsent(probe.high_water_seq + 1);
    }
    outbox.record_attempt();
  }

  const auto pending = outbox.unsent();
  for (std::size_t begin = 0; begin < pending.size(); begin += options.batch_size) {
    const std::size_t end = std::min(pending.size(), begin + options.batch_size);
    std::vector<SyncItem> items;
    std::vector<std::int64_t> seqs;
    for (std::size_t i = begin; i < end; ++i) {
      items.push_back({pending[i].seq, pending[i].type, pending[i].report});
      seqs.push_back(pending[i].seq);
    }
    const SyncAck ack = post(make_sync_batch(kiosk_id, std::move(items)));
    ++summary.batches;
    if (options.after_ack) options.after_ack(ack);
    outbox.mark_sent(seqs);
    summary.sent += static_cast<int>(seqs.size());
    summary.duplicates += ack.duplicates;
    summary.high_water = ack.high_water_seq;
  }
  return summary;
}

int cli_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ServerUnreachable: return 3;
    case ErrorCode::AuthFailure:
    case ErrorCode::Forbidden: return 4;
    case ErrorCode::CorruptLog:
    case ErrorCode::ModelFormat: return 5;
    case ErrorCode::MalformedHeader:
    case ErrorCode::TruncatedPayload:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::ImageTooSmall:
    case ErrorCode::TooFewVariations:
    case ErrorCode::TooFewChips:
    case ErrorCode::KOutOfRange:
    case ErrorCode::InsufficientGallery:
    case ErrorCode::ValidationError:
    case ErrorCode::EmptyEvidence:
    case ErrorCode::BadPage:
    case ErrorCode::EmptyQuery:
    case ErrorCode::UnbalancedQuote:
    case ErrorCode::NoFaceDetected:
    case ErrorCode::BadImage:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::NonAscendingSeq:
    case ErrorCode::PayloadTooLarge:
    case ErrorCode::InvalidArgument: return 2;
    default: return 1;
  }
}

}  // namespace mf
