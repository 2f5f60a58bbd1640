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

#include "mfhajj/service.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "mfhajj/error.hpp"
#include "mfhajj/image.hpp"

namespace mf {

using nlohmann::json;

namespace {

constexpr const char* kGalleryCache = "gallery.log";

json box_json(const FaceBox& b) {
  return {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}, {"score", b.score}};
}

IndexDocument index_document(const Report& report) {
  IndexDocument doc;
  std::visit(
      [&](const auto& r) {
        doc.report_id = r.report_id;
        doc.text_fields = {r.description, r.location};
        doc.facets["kind"] = std::string(to_string(r.kind));
        doc.facets["status"] = std::string(to_string(r.status));
        doc.facets["location"] = r.location;
        doc.timestamp = r.reported_at;
      },
      report);
  if (const auto* item = std::get_if<ItemReport>(&report)) {
    doc.facets["category"] = std::string(to_string(item->category));
  } else {
    doc.facets["category"] = "person";
  }
  return doc;
}

}  // namespace

std::pair<std::string, int> split_listen_address(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos || colon + 1 == listen.size()) {
    throw Error(ErrorCode::ValidationError, "listen address must be host:port");
  }
  int port = 0;
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ValidationError, "bad port in '" + listen + "'");
  }
  if (port < 0 || port > 65535) throw Error(ErrorCode::ValidationError, "bad port in '" + listen + "'");
  std::string host = listen.substr(0, colon);
  return {host.empty() ? "0.0.0.0" : host, port};
}

ServiceConfig load_service_config(const std::optional<std::filesystem::path>& path,
                                  const std::function<const char*(const char*)>& getenv_fn) {
  ServiceConfig c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path->string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ValidationError, "bad config: " + std::string(e.what()));
    }
    const auto base = path->parent_path();
    auto rel = [&](const std::string& p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    c.listen = j.value("listen", c.listen);
    if (j.contains("data_dir")) c.data_dir = rel(j["data_dir"].get<std::string>());
    if (j.contains("tokens_file")) c.tokens_file = rel(j["tokens_file"].get<std::string>());
    if (j.contains("model_path")) c.model_path = rel(j["model_path"].get<std::string>());
    if (j.contains("threshold")) c.threshold = j["threshold"].get<double>();
    c.default_top_n = j.value("default_top_n", c.default_top_n);
    c.max_photo_bytes = j.value("max_photo_bytes", c.max_photo_bytes);
    c.sync_writes = j.value("sync_writes", c.sync_writes);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    if (j.contains("recovery")) {
      const std::string mode = to_lower_ascii(j["recovery"].get<std::string>());
      if (mode == "strict") {
        c.recovery = RecoveryMode::Strict;
      } else if (mode == "truncate") {
        c.recovery = RecoveryMode::Truncate;
      } else {
        throw Error(ErrorCode::ValidationError, "recovery must be strict or truncate");
      }
    }
    if (j.contains("detector")) {
      const auto& d = j["detector"];
      c.detector.scales = d.value("scales", c.detector.scales);
      c.detector.edge_percentile = d.value("edge_percentile", c.detector.edge_percentile);
      c.detector.score_threshold = d.value("score_threshold", c.detector.score_threshold);
      c.detector.nms_overlap = d.value("nms_overlap", c.detector.nms_overlap);
    }
  }
  auto env = getenv_fn ? getenv_fn : [](const char* name) -> const char* { return std::getenv(name); };
  if (const char* v = env("MF_LISTEN"); v && *v) c.listen = v;
  if (const char* v = env("MF_DATA_DIR"); v && *v) c.data_dir = v;
  if (const char* v = env("MF_TOKENS"); v && *v) c.tokens_file = v;
  if (const char* v = env("MF_THRESHOLD"); v && *v) {
    try {
      c.threshold = std::stod(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ValidationError, std::string("MF_THRESHOLD is not a number: ") + v);
    }
  }
  if (c.threshold && !(*c.threshold > 0)) throw Error(ErrorCode::ValidationError, "threshold must be > 0");
  c.detector.validate();
  return c;
}

json to_json(const IdentifyResponse& r) {
  json matches = json::array();
  for (const auto& m : r.matches) {
    json j = {{"person_id", m.match.person_id}, {"distance", m.match.distance}, {"rank", m.match.rank}};
    if (m.person) {
      j["full_name"] = m.person->full_name;
      j["nationality"] = m.person->nationality;
      j["photo_refs"] = m.person->photo_refs;
      if (m.person->group_id) j["group_id"] = *m.person->group_id;
    }
    matches.push_back(std::move(j));
  }
  return {{"matches", matches},
          {"face", box_json(r.face)},
          {"model_version", r.model_version},
          {"threshold", r.threshold},
          {"elapsed_ms", r.elapsed_ms}};
}

json to_json(const SyncBatch& batch) {
  json reports = json::array();
  for (const auto& item : batch.reports) {
    reports.push_back({{"seq", item.seq}, {"type", item.type}, {"report", item.report}});
  }
  return {{"kiosk_id", batch.kiosk_id}, {"reports", reports}, {"checksum", batch.checksum}};
}

SyncBatch sync_batch_from_json(const json& j) {
  try {
    SyncBatch b;
    b.kiosk_id = j.at("kiosk_id").get<std::string>();
    b.checksum = j.value("checksum", "");
    for (const auto& r : j.at("reports")) {
      b.reports.push_back({r.at("seq").get<std::int64_t>(), r.at("type").get<std::string>(), r.at("report")});
    }
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, "bad sync batch: " + std::string(e.what()));
  }
}

std::string sync_checksum(const json& reports) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", crc32c(canonical_json(reports)));
  return buf;
}

SyncBatch make_sync_batch(std::string kiosk_id, std::vector<SyncItem> items) {
  SyncBatch b{std::move(kiosk_id), std::move(items), {}};
  b.checksum = sync_checksum(to_json(b).at("reports"));
  return b;
}

json to_json(const SyncAck& ack) {
  return {{"kiosk_id", ack.kiosk_id},
          {"high_water_seq", ack.high_water_seq},
          {"accepted", ack.accepted},
          {"duplicates", ack.duplicates},
          {"report_ids", ack.report_ids}};
}

SyncAck sync_ack_from_json(const json& j) {
  SyncAck a;
  a.kiosk_id = j.at("kiosk_id").get<std::string>();
  a.high_water_seq = j.at("high_water_seq").get<std::int64_t>();
  a.accepted = j.at("accepted").get<int>();
  a.duplicates = j.at("duplicates").get<int>();
  a.report_ids = j.value("report_ids", std::vector<std::string>{});
  return a;
}

MfService::MfService(ServiceConfig config)
    : config_(std::move(config)),
      threshold_(config_.threshold.value_or(std::numeric_limits<double>::max())) {
  config_.detector.validate();
  StoreOptions opts;
  opts.sync_writes = config_.sync_writes;
  opts.snapshot_every = config_.snapshot_every;
  opts.recovery = config_.recovery;
  store_ = std::make_unique<Store>(config_.data_dir, opts);
  if (std::filesystem::exists(model_path())) {
    published_.model = std::make_shared<const EigenModel>(load_model(model_path()));
  }
  published_.gallery = std::make_shared<const Gallery>();
  rebuild_gallery();
  rebuild_index();
}

std::filesystem::path MfService::model_path() const {
  return config_.model_path.empty() ? config_.data_dir / "model.mfem" : config_.model_path;
}

MfService::Published MfService::published() const {
  std::lock_guard lock(publish_mu_);
  return published_;
}

void MfService::publish(Published p) {
  std::lock_guard lock(publish_mu_);
  published_ = std::move(p);
}

std::shared_ptr<const EigenModel> MfService::model() const { return published().model; }
std::shared_ptr<const Gallery> MfService::gallery() const { return published().gallery; }

double MfService::threshold() const {
  std::lock_guard lock(publish_mu_);
  return threshold_;
}

void MfService::set_threshold(double threshold) {
  if (!(threshold > 0)) throw Error(ErrorCode::InvalidArgument, "threshold must be > 0");
  std::lock_guard lock(publish_mu_);
  threshold_ = threshold;
}

void MfService::rebuild_index() {
  index_.clear();
  for (const auto& r : store_->all_reports()) index_.index_report(index_document(r));
}

void MfService::index_report_locked(const Report& report) { index_.reindex_report(index_document(report)); }

std::optional<Embedding> MfService::embed_photo(const EigenModel& model, const std::string& photo_ref) const {
  auto bytes = store_->read_blob(photo_ref);
  if (!bytes) return std::nullopt;
  try {
    return embed(model, photo_to_chip(*bytes).chip);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void MfService::append_gallery_cache(const std::string& person_id, const std::vector<Embedding>& embeddings) {
  if (!gallery_cache_) {
    gallery_cache_ = std::make_unique<RecordLog>(config_.data_dir / kGalleryCache, config_.sync_writes);
  }
  json j = {{"person_id", person_id}, {"embeddings", embeddings}};
  gallery_cache_->append(canonical_json(j));
}

void MfService::rebuild_gallery() {
  auto pub = published();
  if (!pub.model) return;
  const EigenModel& model = *pub.model;

  // The cache holds embeddings computed at enrollment; anything missing or
  // from another model version is recomputed from the stored photos.
  std::map<std::string, std::vector<Embedding>> cached;
  const auto cache_path = config_.data_dir / kGalleryCache;
  ReplayResult replay = replay_records(cache_path);
  for (const auto& rec : replay.records) {
    try {
      json j = json::parse(rec.payload);
      auto embs = j.at("embeddings").get<std::vector<Embedding>>();
      if (!embs.empty() && embs.front().model_version == model.version) {
        cached[j.at("person_id").get<std::string>()] = std::move(embs);
      }
    } catch (const std::exception&) {
      break;
    }
  }
  if (replay.corrupt || replay.torn_tail) {
    RecordLog(cache_path, config_.sync_writes).truncate(replay.valid_bytes);
  }

  Gallery g;
  for (const auto& person : store_->persons()) {
    std::vector<Embedding> embs;
    if (auto it = cached.find(person.person_id); it != cached.end()) {
      embs = it->second;
    } else {
      for (const auto& ref : person.photo_refs) {
        if (auto e = embed_photo(model, ref)) embs.push_back(std::move(*e));
      }
      if (embs.size() < static_cast<std::size_t>(kMinImagesPerPerson)) {
        std::fprintf(stderr, "warning: person %s has fewer than 3 usable photos; not in gallery\n",
                     person.person_id.c_str());
        continue;
      }
      append_gallery_cache(person.person_id, embs);
    }
    g = g.with_person(person.person_id, std::move(embs));
  }
  publish({pub.model, std::make_shared<const Gallery>(std::move(g))});
}

void MfService::install_model(const EigenModel& model) {
  std::lock_guard lock(write_mu_);
  save_model(model_path(), model);
  auto shared = std::make_shared<const EigenModel>(model);
  publish({shared, std::make_shared<const Gallery>()});
  rebuild_gallery();
  for (const auto& r : store_->all_reports()) {
    const auto* p = std::get_if<PersonReport>(&r);
    if (!p || (p->embedding && p->embedding->model_version == model.version)) continue;
    if (auto e = embed_photo(model, p->photo_ref)) store_->set_person_embedding(p->report_id, *e);
  }
}

PhotoFace MfService::photo_to_chip(std::span<const std::uint8_t> photo) const {
  if (photo.size() > config_.max_photo_bytes) throw Error(ErrorCode::PayloadTooLarge, "photo exceeds the size limit");
  if (photo.empty()) throw Error(ErrorCode::BadImage, "empty photo");
  ImageBuffer image;
  try {
    image = decode_image(photo);
  } catch (const Error& e) {
    throw Error(ErrorCode::BadImage, e.what(), std::string(to_string(e.code())));
  }
  GrayImage gray = preprocess(image);
  std::vector<FaceBox> boxes;
  try {
    boxes = detect_faces(gray, config_.detector);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ImageTooSmall) throw;
    throw Error(ErrorCode::NoFaceDetected, "image is smaller than the smallest face template");
  }
  const FaceBox box = largest_face(boxes);
  return {crop_normalize(gray, box), box};
}

IdentifyResponse MfService::identify(std::span<const std::uint8_t> photo, std::optional<int> top_n,
                                     std::optional<double> threshold) const {
  const auto start = std::chrono::steady_clock::now();
  const Published pub = published();
  if (!pub.model) throw Error(ErrorCode::ModelUnavailable, "no recognition model is installed");
  const int n = top_n.value_or(config_.default_top_n);
  const double theta = threshold.value_or(this->threshold());
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "top_n must be >= 1");
  if (!(theta > 0)) throw Error(ErrorCode::InvalidArgument, "threshold must be > 0");

  PhotoFace face = photo_to_chip(photo);
  const Embedding probe = embed(*pub.model, face.chip);
  IdentifyResponse out;
  for (auto& m : mf::identify(*pub.gallery, probe, n, theta)) {
    out.matches.push_back({m, store_->get_person(m.person_id)});
  }
  out.face = face.box;
  out.model_version = pub.model->version;
  out.threshold = theta;
  out.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

PersonRecord MfService::enroll_person(PersonRecord person, const std::vector<std::vector<std::uint8_t>>& photos) {
  if (photos.size() < static_cast<std::size_t>(kMinImagesPerPerson)) {
    throw Error(ErrorCode::InsufficientGallery, "enrollment needs at least 3 photos");
  }
  if (person.full_name.empty()) throw Error(ErrorCode::ValidationError, "full_name is required");
  std::lock_guard lock(write_mu_);
  const Published pub = published();
  if (!pub.model) throw Error(ErrorCode::ModelUnavailable, "no recognition model is installed");
  if (person.person_id.empty()) person.person_id = random_uuid();
  if (store_->get_person(person.person_id)) throw Error(ErrorCode::DuplicatePerson, person.person_id);

  std::vector<FaceChip> chips;
  for (const auto& photo : photos) chips.push_back(photo_to_chip(photo).chip);
  Gallery next = enroll(*pub.gallery, person.person_id, chips, *pub.model);

  person.photo_refs.clear();
  for (const auto& photo : photos) person.photo_refs.push_back(store_->put_blob(photo));
  store_->add_person(person);
  append_gallery_cache(person.person_id, next.embeddings(person.person_id));
  publish({pub.model, std::make_shared<const Gallery>(std::move(next))});
  return *store_->get_person(person.person_id);
}

SubmitResult MfService::submit_item_report(ItemReport report, const std::optional<std::vector<std::uint8_t>>& photo) {
  return submit({std::move(report), photo}, std::nullopt).submit;
}

PersonSubmitResult MfService::submit_person_report(PersonReport report, std::span<const std::uint8_t> photo) {
  return submit({std::move(report), std::vector<std::uint8_t>(photo.begin(), photo.end())}, std::nullopt);
}

PersonSubmitResult MfService::submit(const ReportSubmission& submission, const std::optional<Origin>& origin) {
  validate_submission(submission);
  if (submission.photo && submission.photo->size() > config_.max_photo_bytes) {
    throw Error(ErrorCode::PayloadTooLarge, "photo exceeds the size limit");
  }
  std::lock_guard lock(write_mu_);
  PersonSubmitResult out;
  if (const auto* item = std::get_if<ItemReport>(&submission.report)) {
    ItemReport r = *item;
    r.origin = origin;
    r.photo_ref.reset();
    if (submission.photo && !submission.photo->empty()) r.photo_ref = store_->put_blob(*submission.photo);
    out.submit = store_->submit_item_report(std::move(r));
    if (!out.submit.duplicate) index_report_locked(*store_->get_report(out.submit.report_id));
    return out;
  }

  PersonReport r = std::get<PersonReport>(submission.report);
  try {
    decode_image(*submission.photo);
  } catch (const Error& e) {
    throw Error(ErrorCode::BadImage, e.what(), std::string(to_string(e.code())));
  }
  r.origin = origin;
  r.embedding.reset();
  r.photo_ref = store_->put_blob(*submission.photo);
  out.submit = store_->submit_person_report(std::move(r));
  if (out.submit.duplicate) return out;

  const std::string& id = out.submit.report_id;
  if (auto model = published().model) {
    try {
      store_->set_person_embedding(id, embed(*model, photo_to_chip(*submission.photo).chip));
      out.face_detected = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFaceDetected && e.code() != ErrorCode::BadImage) throw;
    }
  }
  index_report_locked(*store_->get_report(id));
  if (out.face_detected) out.alerts = evaluate_locked(id);
  return out;
}

std::vector<Alert> MfService::evaluate_person_matches(const std::string& report_id) {
  std::lock_guard lock(write_mu_);
  return evaluate_locked(report_id);
}

std::vector<Alert> MfService::evaluate_locked(const std::string& report_id) {
  const Published pub = published();
  std::vector<Alert> raised;
  if (!pub.model || pub.gallery->empty()) return raised;
  const auto report = store_->get_person_report(report_id);
  if (!report || !report->embedding || report->embedding->model_version != pub.model->version) return raised;
  const Gallery& gallery = *pub.gallery;
  const double theta = threshold();

  auto propose = [&](const std::string& missing, const std::string& found, const std::string& person, double d) {
    if (auto alert = store_->propose_person_match(missing, found, person, d)) {
      raised.push_back(*alert);
      index_report_locked(*store_->get_report(missing));
      index_report_locked(*store_->get_report(found));
    }
  };

  if (report->kind != PersonReportKind::Missing) {
    if (report->status != PersonReportStatus::Open && report->status != PersonReportStatus::MatchProposed) {
      return raised;
    }
    for (const auto& r : store_->all_reports()) {
      const auto* m = std::get_if<PersonReport>(&r);
      if (!m || m->kind != PersonReportKind::Missing || m->status != PersonReportStatus::Open) continue;
      if (!m->subject_person_id || !gallery.contains(*m->subject_person_id)) continue;
      const double d = gallery.person_distance(*m->subject_person_id, *report->embedding);
      if (d <= theta) propose(m->report_id, report_id, *m->subject_person_id, d);
    }
  } else {
    if (report->status != PersonReportStatus::Open || !report->subject_person_id ||
        !gallery.contains(*report->subject_person_id)) {
      return raised;
    }
    const std::string& person = *report->subject_person_id;
    for (const auto& r : store_->all_reports()) {
      const auto* f = std::get_if<PersonReport>(&r);
      if (!f || f->kind == PersonReportKind::Missing || f->status != PersonReportStatus::Open) continue;
      if (!f->embedding || f->embedding->model_version != pub.model->version) continue;
      const double d = gallery.person_distance(person, *f->embedding);
      if (d <= theta) propose(report_id, f->report_id, person, d);
    }
  }
  return raised;
}

ClaimResult MfService::file_claim(const std::string& report_id, Claim claim,
                                  const std::optional<std::vector<std::uint8_t>>& evidence_photo) {
  std::lock_guard lock(write_mu_);
  if (!store_->get_report(report_id)) throw Error(ErrorCode::ReportNotFound, "no report " + report_id);
  claim.evidence_photo_ref.reset();
  if (evidence_photo && !evidence_photo->empty()) {
    if (evidence_photo->size() > config_.max_photo_bytes) {
      throw Error(ErrorCode::PayloadTooLarge, "photo exceeds the size limit");
    }
    claim.evidence_photo_ref = store_->put_blob(*evidence_photo);
  }
  ClaimResult out = store_->file_claim(report_id, std::move(claim));
  index_report_locked(*store_->get_report(report_id));
  return out;
}

ResolveResult MfService::resolve_claim(const std::string& claim_id, ClaimDecision decision) {
  std::lock_guard lock(write_mu_);
  ResolveResult out = store_->resolve_claim(claim_id, decision);
  index_report_locked(out.report);
  return out;
}

ItemReport MfService::reject_item_report(const std::string& report_id) {
  std::lock_guard lock(write_mu_);
  ItemReport r = store_->reject_item_report(report_id);
  index_report_locked(r);
  return r;
}

PersonReport MfService::decide_person_match(const std::string& report_id, bool confirm) {
  std::lock_guard lock(write_mu_);
  PersonReport r = store_->decide_person_match(report_id, confirm);
  index_report_locked(r);
  return r;
}

PersonReport MfService::close_person_report(const std::string& report_id) {
  std::lock_guard lock(write_mu_);
  PersonReport r = store_->close_person_report(report_id);
  index_report_locked(r);
  return r;
}

SyncAck MfService::ingest_sync_batch(const Principal& who, const SyncBatch& batch) {
  require_role(who, {Role::Kiosk});
  if (!who.kiosk_id || *who.kiosk_id != batch.kiosk_id) {
    throw Error(ErrorCode::AuthFailure, "credential is not bound to kiosk " + batch.kiosk_id, "forbidden");
  }
  const std::string expected = sync_checksum(to_json(batch).at("reports"));
  if (to_lower_ascii(batch.checksum) != expected) {
    throw Error(ErrorCode::ChecksumMismatch, "batch checksum does not match its reports", expected);
  }
  std::vector<ReportSubmission> parsed;
  std::int64_t previous = 0;
  for (std::size_t i = 0; i < batch.reports.size(); ++i) {
    const auto& item = batch.reports[i];
    if (item.seq < 1) throw Error(ErrorCode::ValidationError, "reports[" + std::to_string(i) + "]: seq must be >= 1");
    if (item.seq <= previous) {
      throw Error(ErrorCode::NonAscendingSeq, "seq " + std::to_string(item.seq) + " follows " + std::to_string(previous));
    }
    previous = item.seq;
    try {
      parsed.push_back(parse_submission(item.report, item.type));
      validate_submission(parsed.back());
    } catch (const Error& e) {
      throw Error(e.code(), "reports[" + std::to_string(i) + "]: " + e.what(), e.detail());
    }
  }

  SyncAck ack;
  ack.kiosk_id = batch.kiosk_id;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const auto result = submit(parsed[i], Origin{batch.kiosk_id, batch.reports[i].seq}).submit;
    (result.duplicate ? ack.duplicates : ack.accepted) += 1;
    ack.report_ids.push_back(result.report_id);
  }
  ack.high_water_seq = store_->high_water(batch.kiosk_id);
  return ack;
}

Alert MfService::acknowledge_alert(const Principal& who, const std::string& alert_id) {
  require_role(who, {Role::Admin});
  std::lock_guard lock(write_mu_);
  return store_->acknowledge_alert(alert_id, who.name.empty() ? std::string("admin") : who.name);
}

std::vector<Alert> MfService::alerts(std::optional<bool> acknowledged) const { return store_->alerts(acknowledged); }

std::vector<MfService::SearchResult> MfService::search(std::string_view query, std::size_t limit) const {
  std::vector<SearchResult> out;
  for (auto& hit : index_.search(query, limit)) {
    if (auto r = store_->get_report(hit.report_id)) out.push_back({std::move(hit), std::move(*r)});
  }
  return out;
}

json MfService::health() const {
  const Published pub = published();
  json j = {{"status", "ok"},
            {"persons", pub.gallery ? pub.gallery->size() : 0},
            {"reports", index_.size()},
            {"commits", store_->commit_count()}};
  if (pub.model) {
    j["model_version"] = pub.model->version;
    j["k"] = pub.model->k;
  } else {
    j["model_version"] = nullptr;
  }
  const double theta = threshold();
  j["threshold"] = theta == std::numeric_limits<double>::max() ? json(nullptr) : json(theta);
  return j;
}

}  // namespace mf
