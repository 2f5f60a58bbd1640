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
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfhajj/auth.hpp"
#include "mfhajj/payload.hpp"
#include "mfhajj/recognition.hpp"
#include "mfhajj/record_log.hpp"
#include "mfhajj/search.hpp"
#include "mfhajj/store.hpp"
#include "mfhajj/vision.hpp"

namespace mf {

struct ServiceConfig {
  std::string listen = "127.0.0.1:8080";
  std::filesystem::path data_dir = "mfdata";
  std::filesystem::path tokens_file;
  /// Default identify threshold. Unset means no threshold is applied.
  std::optional<double> threshold;
  /// Empty means <data_dir>/model.mfem.
  std::filesystem::path model_path;
  DetectorParams detector;
  int default_top_n = 5;
  std::size_t max_photo_bytes = kMaxPhotoBytes;
  bool sync_writes = true;
  std::size_t snapshot_every = 1000;
  RecoveryMode recovery = RecoveryMode::Strict;
};

/// Reads a JSON config file (any subset of the fields above; detector under
/// "detector"), then applies MF_LISTEN, MF_DATA_DIR, MF_TOKENS and
/// MF_THRESHOLD from the environment.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& path,
                                  const std::function<const char*(const char*)>& getenv_fn = nullptr);

/// "host:port" -> pair. Throws ValidationError.
std::pair<std::string, int> split_listen_address(const std::string& listen);

struct PhotoFace {
  FaceChip chip;
  FaceBox box;
};

struct IdentifyMatch {
  MatchResult match;
  std::optional<PersonRecord> person;
};

struct IdentifyResponse {
  std::vector<IdentifyMatch> matches;
  FaceBox face;
  std::uint64_t model_version = 0;
  double threshold = 0;
  double elapsed_ms = 0;
};
nlohmann::json to_json(const IdentifyResponse& r);

struct PersonSubmitResult {
  SubmitResult submit;
  bool face_detected = false;
  std::vector<Alert> alerts;
};

struct SyncItem {
  std::int64_t seq = 0;
  std::string type;  // item | person
  nlohmann::json report;
};

struct SyncBatch {
  std::string kiosk_id;
  std::vector<SyncItem> reports;
  std::string checksum;  // CRC-32C hex of the canonical "reports" array
};

/// JSON form: {"kiosk_id", "reports": [{"seq", "type", "report"}], "checksum"}.
nlohmann::json to_json(const SyncBatch& batch);
SyncBatch sync_batch_from_json(const nlohmann::json& j);
std::string sync_checksum(const nlohmann::json& reports);
/// Builds a batch and fills in its checksum.
SyncBatch make_sync_batch(std::string kiosk_id, std::vector<SyncItem> items);

struct SyncAck {
  std::string kiosk_id;
  std::int64_t high_water_seq = 0;
  int accepted = 0;
  int duplicates = 0;
  std::vector<std::string> report_ids;  // one per batch entry, in order
};
nlohmann::json to_json(const SyncAck& ack);
SyncAck sync_ack_from_json(const nlohmann::json& j);

/// The server: ties vision, recognition, registry, search, sync ingestion and
/// alerting together. All mutations go through one writer lock; identify
/// reads a published model/gallery snapshot without taking it.
class MfService {
 public:
  explicit MfService(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }
  Store& store() { return *store_; }
  const Store& store() const { return *store_; }
  const InvertedIndex& index() const { return index_; }

  // Model and gallery.
  std::shared_ptr<const EigenModel> model() const;
  std::shared_ptr<const Gallery> gallery() const;
  /// Persists the model and re-embeds every enrolled person with it.
  void install_model(const EigenModel& model);
  double threshold() const;
  void set_threshold(double threshold);

  /// decode -> preprocess -> detect -> largest box -> 64x64 chip.
  PhotoFace photo_to_chip(std::span<const std::uint8_t> photo) const;

  IdentifyResponse identify(std::span<const std::uint8_t> photo, std::optional<int> top_n = std::nullopt,
                            std::optional<double> threshold = std::nullopt) const;

  /// person.person_id may be empty (a UUID is assigned). Needs >= 3 photos.
  PersonRecord enroll_person(PersonRecord person, const std::vector<std::vector<std::uint8_t>>& photos);

  SubmitResult submit_item_report(ItemReport report, const std::optional<std::vector<std::uint8_t>>& photo);
  PersonSubmitResult submit_person_report(PersonReport report, std::span<const std::uint8_t> photo);
  /// Applies a parsed submission (the sync path and the HTTP path share it).
  PersonSubmitResult submit(const ReportSubmission& submission, const std::optional<Origin>& origin);

  ClaimResult file_claim(const std::string& report_id, Claim claim,
                         const std::optional<std::vector<std::uint8_t>>& evidence_photo);
  ResolveResult resolve_claim(const std::string& claim_id, ClaimDecision decision);
  ItemReport reject_item_report(const std::string& report_id);
  PersonReport decide_person_match(const std::string& report_id, bool confirm);
  PersonReport close_person_report(const std::string& report_id);

  SyncAck ingest_sync_batch(const Principal& who, const SyncBatch& batch);

  /// Raises PERSON_MATCH alerts for the report (see the registry for the
  /// state changes). Returns only newly raised alerts.
  std::vector<Alert> evaluate_person_matches(const std::string& report_id);

  Alert acknowledge_alert(const Principal& who, const std::string& alert_id);
  std::vector<Alert> alerts(std::optional<bool> acknowledged) const;

  struct SearchResult {
    SearchHit hit;
    Report report;
  };
  std::vector<SearchResult> search(std::string_view query, std::size_t limit) const;

  nlohmann::json health() const;

 private:
  struct Published {
    std::shared_ptr<const EigenModel> model;
    std::shared_ptr<const Gallery> gallery;
  };

  Published published() const;
  void publish(Published p);
  std::filesystem::path model_path() const;
  void rebuild_index();
  void rebuild_gallery();
  void index_report_locked(const Report& report);
  std::optional<Embedding> embed_photo(const EigenModel& model, const std::string& photo_ref) const;
  std::vector<Alert> evaluate_locked(const std::string& report_id);
  void append_gallery_cache(const std::string& person_id, const std::vector<Embedding>& embeddings);

  ServiceConfig config_;
  std::unique_ptr<Store> store_;
  InvertedIndex index_;
  std::mutex write_mu_;
  mutable std::mutex publish_mu_;
  Published published_;
  double threshold_;
  std::unique_ptr<RecordLog> gallery_cache_;
};

}  // namespace mf
