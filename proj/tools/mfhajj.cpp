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

// mfhajj: kiosk simulator and administrator toolbox.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfhajj/error.hpp"
#include "mfhajj/evaluation.hpp"
#include "mfhajj/http_api.hpp"
#include "mfhajj/kiosk.hpp"
#include "mfhajj/recognition.hpp"
#include "mfhajj/record_log.hpp"
#include "mfhajj/service.hpp"
#include "mfhajj/synthetic.hpp"
#include "mfhajj/util.hpp"
#ifdef MFHAJJ_HAVE_JPEG
#include "mfhajj/jpeg.hpp"
#endif

namespace {

using nlohmann::json;
using mf::Error;
using mf::ErrorCode;

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

// Where server-side commands run: a remote server, or a data directory opened
// in this process.
struct Target {
  std::string server;
  std::string token;
  std::string config;
  std::string data_dir;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--server", server, "Server base URL, e.g. http://127.0.0.1:8080")->envname("MF_SERVER");
    cmd->add_option("--token", token, "Bearer token")->envname("MF_TOKEN");
    cmd->add_option("--config", config, "Service config file (local mode)");
    cmd->add_option("--data-dir", data_dir, "Data directory (local mode)");
  }
  bool remote() const { return !server.empty(); }
  mf::ServiceConfig service_config() const {
    mf::ServiceConfig c =
        mf::load_service_config(config.empty() ? std::nullopt : std::optional<std::filesystem::path>(config));
    if (!data_dir.empty()) c.data_dir = data_dir;
    return c;
  }
};

json strip_embedding(json j) {
  if (j.contains("embedding")) {
    j.erase("embedding");
    j["has_embedding"] = true;
  }
  return j;
}

// --- kiosk ---------------------------------------------------------------

struct KioskArgs {
  std::string outbox = "outbox";
  std::size_t capacity = mf::Outbox::kDefaultCapacity;
};

struct QueueArgs {
  std::string kind;
  std::string category = "other";
  std::string description;
  std::string location;
  std::string claimed_time;
  std::string subject_person_id;
  std::string photo;
};

int queue(const KioskArgs& k, const QueueArgs& q, const char* type) {
  json payload = {{"kind", q.kind}, {"description", q.description}, {"location", q.location}};
  if (std::string(type) == "item") payload["category"] = q.category;
  if (!q.claimed_time.empty()) payload["claimed_time"] = q.claimed_time;
  if (!q.subject_person_id.empty()) payload["subject_person_id"] = q.subject_person_id;
  mf::ReportSubmission sub = mf::parse_submission(payload, type);
  if (!q.photo.empty()) {
    auto bytes = read_bytes(q.photo);
    if (bytes.size() > mf::kMaxPhotoBytes) throw Error(ErrorCode::PayloadTooLarge, "photo exceeds the size limit");
    sub.photo = std::move(bytes);
  }
  mf::Outbox outbox(k.outbox, k.capacity);
  const auto seq = outbox.queue_report(sub);
  print({{"seq", seq}, {"unsent", outbox.unsent_count()}});
  return 0;
}

struct SyncArgs {
  std::string server;
  std::string token;
  std::string kiosk_id;
  std::size_t batch_size = 100;
  int timeout_ms = 10000;
};

int sync(const KioskArgs& k, const SyncArgs& s) {
  mf::Outbox outbox(k.outbox, k.capacity);
  mf::HttpSyncTransport transport(s.server, s.token, std::chrono::milliseconds(s.timeout_ms));
  mf::SyncOptions options;
  options.batch_size = s.batch_size;
  const auto summary = mf::sync_replay(outbox, s.kiosk_id, transport, options);
  print({{"sent", summary.sent},
         {"duplicates", summary.duplicates},
         {"high_water", summary.high_water},
         {"batches", summary.batches},
         {"retries", summary.retries}});
  return 0;
}

int outbox_status(const KioskArgs& k) {
  mf::Outbox outbox(k.outbox, k.capacity);
  json entries = json::array();
  for (const auto& e : outbox.entries()) {
    entries.push_back({{"seq", e.seq}, {"type", e.type}, {"sent", e.sent}, {"created_at", mf::format_timestamp(e.created_at)}});
  }
  print({{"next_seq", outbox.next_seq()}, {"unsent", outbox.unsent_count()}, {"entries", entries}});
  return 0;
}

// --- admin ---------------------------------------------------------------

struct GenArgs {
  int identities = 50;
  int variations = 4;
  std::uint64_t seed = 7;
  std::string out;
};

int gen_dataset(const GenArgs& g) {
  const auto m = mf::generate_dataset(g.out, g.identities, g.variations, g.seed);
  print({{"identities", m.identities}, {"variations", m.variations}, {"seed", m.seed}, {"out", g.out}});
  return 0;
}

struct TrainArgs {
  std::string data;
  int k = 32;
  std::string out;
  int per_identity = 3;
  std::uint64_t version = 0;
};

std::vector<mf::FaceChip> dataset_chips(const std::filesystem::path& root, const mf::DatasetEntry& entry,
                                        int per_identity, const mf::DetectorParams& params, int& failures) {
  std::vector<mf::FaceChip> chips;
  const int n = per_identity <= 0 ? static_cast<int>(entry.files.size())
                                  : std::min(per_identity, static_cast<int>(entry.files.size()));
  for (int i = 0; i < n; ++i) {
    try {
      chips.push_back(mf::chip_from_image(mf::read_image_file((root / entry.files[i]).string()), params));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFaceDetected) throw;
      ++failures;
    }
  }
  return chips;
}

int train(const TrainArgs& t) {
  const auto manifest = mf::load_dataset_manifest(t.data);
  std::vector<mf::FaceChip> chips;
  int failures = 0;
  for (const auto& entry : manifest.entries) {
    auto c = dataset_chips(t.data, entry, t.per_identity, {}, failures);
    chips.insert(chips.end(), c.begin(), c.end());
  }
  mf::TrainOptions options;
  options.version = t.version != 0 ? t.version : static_cast<std::uint64_t>(mf::now_utc());
  const auto model = mf::train_eigenmodel(chips, t.k, options);
  if (const auto dir = std::filesystem::path(t.out).parent_path(); !dir.empty()) std::filesystem::create_directories(dir);
  mf::save_model(t.out, model);
  print({{"out", t.out},
         {"version", model.version},
         {"k", model.k},
         {"samples", chips.size()},
         {"detection_failures", failures},
         {"orthonormality_error", mf::orthonormality_error(model)}});
  return 0;
}

struct CalibrateArgs {
  std::string data;
  std::string model;
  int per_identity = 3;
  std::string write_config;
};

int calibrate(const CalibrateArgs& c, const Target& target) {
  mf::Calibration cal;
  if (!c.data.empty()) {
    if (c.model.empty()) throw Error(ErrorCode::ValidationError, "--data needs --model");
    const auto model = mf::load_model(c.model);
    const auto manifest = mf::load_dataset_manifest(c.data);
    mf::Gallery gallery;
    int failures = 0;
    for (const auto& entry : manifest.entries) {
      auto chips = dataset_chips(c.data, entry, c.per_identity, {}, failures);
      if (static_cast<int>(chips.size()) >= mf::kMinImagesPerPerson) gallery = mf::enroll(gallery, entry.identity, chips, model);
    }
    cal = mf::calibrate_threshold(gallery);
  } else {
    mf::MfService service(target.service_config());
    const auto gallery = service.gallery();
    if (!gallery) throw Error(ErrorCode::ModelUnavailable, "no recognition model is installed");
    cal = mf::calibrate_threshold(*gallery);
  }
  if (!c.write_config.empty()) {
    json config = json::object();
    if (std::filesystem::exists(c.write_config)) {
      std::ifstream in(c.write_config);
      config = json::parse(in);
    }
    config["threshold"] = cal.threshold;
    mf::write_file_atomic(c.write_config, config.dump(2) + "\n");
  }
  print({{"threshold", cal.threshold},
         {"genuine_median", cal.genuine_median},
         {"impostor_median", cal.impostor_median},
         {"genuine_count", cal.genuine_count},
         {"impostor_count", cal.impostor_count}});
  return 0;
}

struct EnrollArgs {
  std::string person_id;
  std::string name;
  std::string nationality;
  std::string group;
  std::vector<std::string> photos;
  std::string dataset;
  int per_identity = 3;
};

int enroll(const EnrollArgs& e, const Target& target) {
  struct Pending {
    mf::PersonRecord person;
    std::vector<std::vector<std::uint8_t>> photos;
  };
  std::vector<Pending> pending;
  if (!e.dataset.empty()) {
    const auto manifest = mf::load_dataset_manifest(e.dataset);
    for (const auto& entry : manifest.entries) {
      Pending p;
      p.person.person_id = entry.identity;
      p.person.full_name = entry.identity;
      const int n = std::min(e.per_identity, static_cast<int>(entry.files.size()));
      for (int i = 0; i < n; ++i) p.photos.push_back(read_bytes((std::filesystem::path(e.dataset) / entry.files[i]).string()));
      pending.push_back(std::move(p));
    }
  } else {
    Pending p;
    p.person.person_id = e.person_id;
    p.person.full_name = e.name;
    p.person.nationality = e.nationality;
    if (!e.group.empty()) p.person.group_id = e.group;
    for (const auto& f : e.photos) p.photos.push_back(read_bytes(f));
    pending.push_back(std::move(p));
  }

  json out = json::array();
  if (target.remote()) {
    mf::ApiClient client(target.server, target.token, std::chrono::seconds(60));
    for (const auto& p : pending) {
      json body = {{"person_id", p.person.person_id}, {"full_name", p.person.full_name}, {"nationality", p.person.nationality}};
      if (p.person.group_id) body["group_id"] = *p.person.group_id;
      json photos = json::array();
      for (const auto& b : p.photos) photos.push_back(mf::base64_encode(b));
      body["photos_b64"] = photos;
      out.push_back(client.post_json("/api/v1/persons", body));
    }
  } else {
    mf::MfService service(target.service_config());
    for (auto& p : pending) out.push_back(json(service.enroll_person(p.person, p.photos)));
  }
  print(out.size() == 1 ? out[0] : json{{"enrolled", out.size()}});
  return 0;
}

struct QueryPhotoArgs {
  std::string photo;
  std::optional<int> top_n;
  std::optional<double> threshold;
};

int query_photo(const QueryPhotoArgs& q, const Target& target) {
  const auto photo = read_bytes(q.photo);
  if (target.remote()) {
    mf::ApiClient client(target.server, target.token, std::chrono::seconds(30));
    json body = {{"photo_b64", mf::base64_encode(photo)}};
    if (q.top_n) body["top_n"] = *q.top_n;
    if (q.threshold) body["threshold"] = *q.threshold;
    print(client.post_json("/api/v1/identify", body));
  } else {
    mf::MfService service(target.service_config());
    print(mf::to_json(service.identify(photo, q.top_n, q.threshold)));
  }
  return 0;
}

struct SearchArgs {
  std::string query;
  std::size_t limit = 20;
};

int search(const SearchArgs& s, const Target& target) {
  if (target.remote()) {
    mf::ApiClient client(target.server, target.token);
    print(client.get("/api/v1/reports", {{"query", s.query}, {"limit", std::to_string(s.limit)}}));
  } else {
    mf::MfService service(target.service_config());
    json hits = json::array();
    for (const auto& r : service.search(s.query, s.limit)) {
      hits.push_back({{"report_id", r.hit.report_id}, {"score", r.hit.score}, {"report", strip_embedding(mf::report_to_json(r.report))}});
    }
    print({{"results", hits}});
  }
  return 0;
}

struct ServeArgs {
  std::string listen;
  std::string tokens;
};

int serve(const ServeArgs& s, const Target& target) {
  mf::ServiceConfig config = target.service_config();
  if (!s.listen.empty()) config.listen = s.listen;
  if (!s.tokens.empty()) config.tokens_file = s.tokens;
  if (config.tokens_file.empty()) throw Error(ErrorCode::ValidationError, "a tokens file is required (--tokens or MF_TOKENS)");
  const auto [host, port] = mf::split_listen_address(config.listen);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  mf::MfService service(config);
  mf::HttpApi api(service, mf::Credentials::load(config.tokens_file));
  const int bound = api.bind(host, port);
  std::cerr << "listening on " << host << ":" << bound << " data " << config.data_dir.string() << "\n";
  std::thread server([&api] { api.serve(); });
  int received = 0;
  sigwait(&signals, &received);
  std::cerr << "shutting down\n";
  api.stop();
  server.join();
  return 0;
}

struct EvaluateArgs {
  std::string data;
  int k = 32;
  int enroll = 3;
};

int evaluate(const EvaluateArgs& a) {
  mf::EvaluationOptions options;
  options.k = a.k;
  options.enroll = a.enroll;
  const auto r = mf::evaluate_identification(a.data, options);
  print({{"identities", r.identities},
         {"probes", r.probes},
         {"correct", r.correct},
         {"correct_unthresholded", r.correct_unthresholded},
         {"rank1", r.rank1},
         {"k", r.k},
         {"threshold", r.calibration.threshold},
         {"genuine_median", r.calibration.genuine_median},
         {"impostor_median", r.calibration.impostor_median},
         {"detection_failures", r.detection_failures},
         {"orthonormality_error", r.orthonormality_error},
         {"seconds_total", r.seconds_total}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef MFHAJJ_HAVE_JPEG
  mf::install_jpeg_decoder();
#endif
  CLI::App app{"Missing-and-found kiosk client and administrator tools"};
  app.require_subcommand(1);
  int status = 0;

  auto* kiosk = app.add_subcommand("kiosk", "Offline report queue and sync")->require_subcommand(1);
  KioskArgs kargs;
  kiosk->add_option("--outbox", kargs.outbox, "Outbox directory")->envname("MF_OUTBOX");
  kiosk->add_option("--capacity", kargs.capacity, "Maximum unsent reports");

  QueueArgs qitem;
  qitem.kind = "FOUND";
  auto* queue_item = kiosk->add_subcommand("queue-item", "Queue a found or lost item report");
  queue_item->add_option("--kind", qitem.kind, "FOUND or LOST");
  queue_item->add_option("--category", qitem.category, "watch, wallet, phone, bag, document, jewelry, other ...");
  queue_item->add_option("--description", qitem.description);
  queue_item->add_option("--location", qitem.location);
  queue_item->add_option("--claimed-time", qitem.claimed_time, "Client clock, ISO 8601");
  queue_item->add_option("--photo", qitem.photo, "PGM, PPM or JPEG file");
  queue_item->callback([&] { status = queue(kargs, qitem, "item"); });

  QueueArgs qperson;
  qperson.kind = "MISSING";
  auto* queue_person = kiosk->add_subcommand("queue-person", "Queue a missing or found person report");
  queue_person->add_option("--kind", qperson.kind, "MISSING, FOUND_ALIVE or DECEASED");
  queue_person->add_option("--photo", qperson.photo)->required();
  queue_person->add_option("--description", qperson.description);
  queue_person->add_option("--location", qperson.location);
  queue_person->add_option("--subject-person-id", qperson.subject_person_id, "Enrolled pilgrim the report is about");
  queue_person->add_option("--claimed-time", qperson.claimed_time);
  queue_person->callback([&] { status = queue(kargs, qperson, "person"); });

  SyncArgs sargs;
  auto* sync_cmd = kiosk->add_subcommand("sync", "Deliver unsent reports to the server");
  sync_cmd->add_option("--server", sargs.server)->envname("MF_SERVER")->required();
  sync_cmd->add_option("--token", sargs.token)->envname("MF_TOKEN")->required();
  sync_cmd->add_option("--kiosk-id", sargs.kiosk_id)->envname("MF_KIOSK_ID")->required();
  sync_cmd->add_option("--batch-size", sargs.batch_size)->check(CLI::Range(1, 100));
  sync_cmd->add_option("--timeout-ms", sargs.timeout_ms);
  sync_cmd->callback([&] { status = sync(kargs, sargs); });

  kiosk->add_subcommand("status", "Show the outbox")->callback([&] { status = outbox_status(kargs); });

  auto* admin = app.add_subcommand("admin", "Administration")->require_subcommand(1);

  GenArgs gargs;
  auto* gen = admin->add_subcommand("gen-dataset", "Write a synthetic face dataset");
  gen->add_option("--identities", gargs.identities)->check(CLI::PositiveNumber);
  gen->add_option("--variations", gargs.variations);
  gen->add_option("--seed", gargs.seed);
  gen->add_option("--out", gargs.out)->required();
  gen->callback([&] { status = gen_dataset(gargs); });

  TrainArgs targs;
  auto* train_cmd = admin->add_subcommand("train", "Train an eigenface model from a dataset");
  train_cmd->add_option("--data", targs.data)->required();
  train_cmd->add_option("--k", targs.k);
  train_cmd->add_option("--out", targs.out)->required();
  train_cmd->add_option("--per-identity", targs.per_identity, "Leading images per identity; 0 uses all");
  train_cmd->add_option("--version", targs.version, "Model version; defaults to the current time");
  train_cmd->callback([&] { status = train(targs); });

  CalibrateArgs cargs;
  Target ctarget;
  auto* cal = admin->add_subcommand("calibrate-threshold", "Midpoint of genuine and impostor distance medians");
  cal->add_option("--data", cargs.data, "Dataset to enroll (with --model); otherwise the service gallery");
  cal->add_option("--model", cargs.model);
  cal->add_option("--per-identity", cargs.per_identity);
  cal->add_option("--write-config", cargs.write_config, "Store the threshold in this config file");
  cal->add_option("--config", ctarget.config);
  cal->add_option("--data-dir", ctarget.data_dir);
  cal->callback([&] { status = calibrate(cargs, ctarget); });

  EnrollArgs eargs;
  Target etarget;
  auto* enroll_cmd = admin->add_subcommand("enroll", "Enroll a person, or every identity of a dataset");
  enroll_cmd->add_option("--person-id", eargs.person_id);
  enroll_cmd->add_option("--name", eargs.name);
  enroll_cmd->add_option("--nationality", eargs.nationality);
  enroll_cmd->add_option("--group", eargs.group);
  enroll_cmd->add_option("--photo", eargs.photos, "At least three");
  enroll_cmd->add_option("--dataset", eargs.dataset);
  enroll_cmd->add_option("--per-identity", eargs.per_identity);
  etarget.add_options(enroll_cmd);
  enroll_cmd->callback([&] { status = enroll(eargs, etarget); });

  ServeArgs vargs;
  Target vtarget;
  auto* serve_cmd = admin->add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", vtarget.config)->envname("MF_CONFIG");
  serve_cmd->add_option("--data-dir", vtarget.data_dir);
  serve_cmd->add_option("--listen", vargs.listen, "host:port");
  serve_cmd->add_option("--tokens", vargs.tokens);
  serve_cmd->callback([&] { status = serve(vargs, vtarget); });

  QueryPhotoArgs pargs;
  Target ptarget;
  auto* query_cmd = admin->add_subcommand("query-photo", "Identify the face in a photo");
  query_cmd->add_option("--photo", pargs.photo)->required();
  query_cmd->add_option("--top-n", pargs.top_n);
  query_cmd->add_option("--threshold", pargs.threshold);
  ptarget.add_options(query_cmd);
  query_cmd->callback([&] { status = query_photo(pargs, ptarget); });

  SearchArgs xargs;
  Target xtarget;
  auto* search_cmd = admin->add_subcommand("search", "Search reports with the query grammar");
  search_cmd->add_option("query", xargs.query)->required();
  search_cmd->add_option("--limit", xargs.limit);
  xtarget.add_options(search_cmd);
  search_cmd->callback([&] { status = search(xargs, xtarget); });

  EvaluateArgs aargs;
  auto* eval_cmd = admin->add_subcommand("evaluate", "Enroll/probe identification run over a dataset");
  eval_cmd->add_option("--data", aargs.data)->required();
  eval_cmd->add_option("--k", aargs.k);
  eval_cmd->add_option("--enroll", aargs.enroll);
  eval_cmd->callback([&] { status = evaluate(aargs); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << mf::to_string(e.code()) << ": " << e.what() << "\n";
    return mf::cli_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}
