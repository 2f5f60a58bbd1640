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

#include "mfhajj/http_api.hpp"

#include <httplib.h>

#include <functional>

namespace mf {

using nlohmann::json;

namespace {

using Bytes = std::vector<std::uint8_t>;

constexpr std::size_t kMaxRequestBytes = 64u << 20;

Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

bool is_multipart(const httplib::Request& req) { return req.is_multipart_form_data(); }

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, "request body is not JSON: " + std::string(e.what()));
  }
}

std::optional<Bytes> photo_from(const httplib::Request& req, const json& body, const char* field,
                                const char* b64_field) {
  if (is_multipart(req)) {
    if (!req.has_file(field)) return std::nullopt;
    return to_bytes(req.get_file_value(field).content);
  }
  if (body.contains(b64_field) && body[b64_field].is_string()) return base64_decode(body[b64_field].get<std::string>());
  return std::nullopt;
}

/// The fields of a form or JSON body as one JSON object of strings.
json fields_of(const httplib::Request& req) {
  if (!is_multipart(req)) return body_json(req);
  json j = json::object();
  for (const auto& [name, part] : req.files) {
    if (part.filename.empty()) j[name] = part.content;
  }
  return j;
}

template <typename T>
std::optional<T> number_param(const httplib::Request& req, const json& fields, const char* name) {
  std::string text;
  if (req.has_param(name)) {
    text = req.get_param_value(name);
  } else if (fields.contains(name)) {
    if (fields[name].is_number()) return fields[name].get<T>();
    if (fields[name].is_string()) text = fields[name].get<std::string>();
  }
  if (text.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_integral_v<T>) {
      v = static_cast<T>(std::stoll(text, &used));
    } else {
      v = static_cast<T>(std::stod(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ValidationError, std::string(name) + " is not a number");
  }
}

json public_view(const Report& r) {
  json j = report_to_json(r);
  if (j.contains("embedding")) {
    j.erase("embedding");
    j["has_embedding"] = true;
  } else if (std::holds_alternative<PersonReport>(r)) {
    j["has_embedding"] = false;
  }
  return j;
}

bool sees_person_reports(const Principal& who) { return who.role == Role::Staff || who.role == Role::Admin; }

}  // namespace

int http_status(const Error& error) {
  switch (error.code()) {
    case ErrorCode::AuthFailure: return error.detail() == "forbidden" ? 403 : 401;
    case ErrorCode::Forbidden: return 403;
    case ErrorCode::ReportNotFound:
    case ErrorCode::ClaimNotFound:
    case ErrorCode::AlertNotFound:
    case ErrorCode::PersonNotFound:
    case ErrorCode::NotFound:
    case ErrorCode::NotIndexed: return 404;
    case ErrorCode::DuplicatePerson:
    case ErrorCode::DuplicateOrigin:
    case ErrorCode::ReportNotClaimable:
    case ErrorCode::AlreadyDecided:
    case ErrorCode::AlreadyAcknowledged:
    case ErrorCode::InvalidTransition:
    case ErrorCode::EmptyGallery:
    case ErrorCode::DuplicateDocument:
    case ErrorCode::ModelVersionMismatch: return 409;
    case ErrorCode::PayloadTooLarge: return 413;
    case ErrorCode::NoFaceDetected: return 422;
    case ErrorCode::ModelUnavailable:
    case ErrorCode::DegenerateModel: return 503;
    case ErrorCode::CorruptLog:
    case ErrorCode::IoError:
    case ErrorCode::ModelFormat:
    case ErrorCode::OutboxFull:
    case ErrorCode::ServerUnreachable: return 500;
    default: return 400;
  }
}

struct HttpApi::Impl {
  MfService& service;
  Credentials credentials;
  httplib::Server server;

  Impl(MfService& s, Credentials c) : service(s), credentials(std::move(c)) { routes(); }

  Principal principal(const httplib::Request& req) const {
    const std::string header = req.get_header_value("Authorization");
    if (header.empty()) return Principal{"anonymous", Role::Public, std::nullopt};
    constexpr std::string_view kBearer = "Bearer ";
    if (header.rfind(kBearer, 0) != 0) throw Error(ErrorCode::AuthFailure, "expected a Bearer token");
    auto who = credentials.authenticate(std::string_view(header).substr(kBearer.size()));
    if (!who) throw Error(ErrorCode::AuthFailure, "unknown token");
    return *who;
  }

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void reply_error(httplib::Response& res, const Error& e) {
    json body = {{"code", to_string(e.code())}, {"message", e.what()}};
    if (!e.detail().empty()) body["detail"] = e.detail();
    reply(res, http_status(e), body);
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&, const Principal&)>;

  httplib::Server::Handler wrap(Handler h) {
    return [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res, principal(req));
      } catch (const Error& e) {
        reply_error(res, e);
      } catch (const json::exception& e) {
        reply_error(res, Error(ErrorCode::ValidationError, std::string("bad request: ") + e.what()));
      } catch (const std::exception& e) {
        reply_error(res, Error(ErrorCode::IoError, std::string("internal error: ") + e.what()));
      }
    };
  }

  void routes() {
    server.set_payload_max_length(kMaxRequestBytes);
    const std::string v1 = "/api/v1";

    server.Get(v1 + "/healthz", wrap([this](auto&, auto& res, auto&) { reply(res, 200, service.health()); }));

    server.Post(v1 + "/identify", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Staff, Role::Admin});
      // Besides multipart and JSON, a bare image body is accepted.
      const bool raw = !is_multipart(req) && !req.body.empty() &&
                       req.get_header_value("Content-Type").rfind("application/json", 0) != 0;
      const json fields = raw ? json::object() : fields_of(req);
      auto photo = raw ? std::optional<Bytes>(to_bytes(req.body)) : photo_from(req, fields, "photo", "photo_b64");
      if (!photo) throw Error(ErrorCode::BadImage, "photo is required");
      auto top_n = number_param<int>(req, fields, "top_n");
      auto threshold = number_param<double>(req, fields, "threshold");
      reply(res, 200, to_json(service.identify(*photo, top_n, threshold)));
    }));

    server.Post(v1 + "/persons", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Admin});
      const json fields = fields_of(req);
      PersonRecord p;
      p.person_id = fields.value("person_id", "");
      p.full_name = fields.value("full_name", "");
      p.nationality = fields.value("nationality", "");
      if (const std::string g = fields.value("group_id", ""); !g.empty()) p.group_id = g;
      std::vector<Bytes> photos;
      if (is_multipart(req)) {
        for (const auto& part : req.get_file_values("photos")) photos.push_back(to_bytes(part.content));
      } else {
        for (const auto& b : fields.value("photos_b64", std::vector<std::string>{})) photos.push_back(base64_decode(b));
      }
      reply(res, 201, json(service.enroll_person(std::move(p), photos)));
    }));

    server.Get(v1 + "/persons/:id", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Staff, Role::Admin});
      auto p = service.store().get_person(req.path_params.at("id"));
      if (!p) throw Error(ErrorCode::PersonNotFound, "no person " + req.path_params.at("id"));
      reply(res, 200, json(*p));
    }));

    server.Post(v1 + "/reports/items", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      const json fields = fields_of(req);
      ReportSubmission sub = parse_submission(fields, "item");
      sub.photo = photo_from(req, fields, "photo", "photo_b64");
      if (who.role == Role::Public && std::get<ItemReport>(sub.report).kind != ItemKind::Lost) {
        throw Error(ErrorCode::AuthFailure, "the public role may only report LOST items", "forbidden");
      }
      auto result = service.submit(sub, std::nullopt).submit;
      reply(res, result.duplicate ? 200 : 201,
            {{"report_id", result.report_id},
             {"duplicate", result.duplicate},
             {"report", public_view(*service.store().get_report(result.report_id))}});
    }));

    server.Post(v1 + "/reports/persons", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Kiosk, Role::Staff, Role::Admin});
      const json fields = fields_of(req);
      ReportSubmission sub = parse_submission(fields, "person");
      sub.photo = photo_from(req, fields, "photo", "photo_b64");
      auto result = service.submit(sub, std::nullopt);
      json alerts = json::array();
      for (const auto& a : result.alerts) alerts.push_back(a);
      reply(res, result.submit.duplicate ? 200 : 201,
            {{"report_id", result.submit.report_id},
             {"duplicate", result.submit.duplicate},
             {"face_detected", result.face_detected},
             {"alerts", alerts},
             {"report", public_view(*service.store().get_report(result.submit.report_id))}});
    }));

    server.Get(v1 + "/reports", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      const bool all = sees_person_reports(who);
      json out = json::array();
      if (req.has_param("query")) {
        const auto limit = number_param<int>(req, json::object(), "limit").value_or(20);
        if (limit < 1 || limit > 500) throw Error(ErrorCode::BadPage, "limit must be in 1..500");
        for (const auto& r : service.search(req.get_param_value("query"), static_cast<std::size_t>(limit))) {
          if (!all && !std::holds_alternative<ItemReport>(r.report)) continue;
          json j = public_view(r.report);
          j["score"] = r.hit.score;
          out.push_back(std::move(j));
        }
        reply(res, 200, {{"results", out}});
        return;
      }
      ReportFilter filter;
      auto param = [&](const char* name) -> std::optional<std::string> {
        if (!req.has_param(name) || req.get_param_value(name).empty()) return std::nullopt;
        return req.get_param_value(name);
      };
      filter.type = param("type");
      if (!all) filter.type = "item";
      filter.kind = param("kind");
      filter.status = param("status");
      if (auto s = param("since")) filter.since = parse_timestamp(*s);
      if (auto u = param("until")) filter.until = parse_timestamp(*u);
      Page page;
      page.number = number_param<int>(req, json::object(), "page").value_or(1);
      page.size = number_param<int>(req, json::object(), "page_size").value_or(50);
      for (const auto& r : service.store().list_reports(filter, page)) out.push_back(public_view(r));
      reply(res, 200, {{"results", out}, {"page", page.number}, {"page_size", page.size}});
    }));

    server.Get(v1 + "/reports/:id", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      const std::string id = req.path_params.at("id");
      auto r = service.store().get_report(id);
      if (!r || (!sees_person_reports(who) && !std::holds_alternative<ItemReport>(*r))) {
        throw Error(ErrorCode::ReportNotFound, "no report " + id);
      }
      json j = public_view(*r);
      if (sees_person_reports(who)) {
        json claims = json::array();
        for (const auto& c : service.store().claims_for(id)) claims.push_back(c);
        j["claims"] = claims;
      }
      reply(res, 200, j);
    }));

    server.Post(v1 + "/reports/:id/claims", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal&) {
      const json fields = fields_of(req);
      Claim c;
      c.claimant_name = fields.value("claimant_name", "");
      c.evidence_text = fields.value("evidence_text", "");
      auto photo = photo_from(req, fields, "evidence_photo", "evidence_photo_b64");
      auto result = service.file_claim(req.path_params.at("id"), std::move(c), photo);
      reply(res, 201,
            {{"claim_id", result.claim_id},
             {"alert_id", result.alert.alert_id},
             {"claim", *service.store().get_claim(result.claim_id)}});
    }));

    server.Post(v1 + "/reports/:id/match-decision",
                wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
                  require_role(who, {Role::Staff, Role::Admin});
                  const std::string d = to_lower_ascii(body_json(req).value("decision", ""));
                  if (d != "confirm" && d != "reject") {
                    throw Error(ErrorCode::ValidationError, "decision must be CONFIRM or REJECT");
                  }
                  auto r = service.decide_person_match(req.path_params.at("id"), d == "confirm");
                  reply(res, 200, public_view(r));
                }));

    server.Post(v1 + "/reports/:id/status", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Admin});
      const std::string s = to_lower_ascii(body_json(req).value("status", ""));
      const std::string id = req.path_params.at("id");
      if (s == "rejected") {
        reply(res, 200, public_view(service.reject_item_report(id)));
      } else if (s == "closed") {
        reply(res, 200, public_view(service.close_person_report(id)));
      } else {
        throw Error(ErrorCode::ValidationError, "status must be REJECTED or CLOSED");
      }
    }));

    server.Post(v1 + "/claims/:id/decision", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Admin});
      const auto decision = parse_claim_decision(body_json(req).value("decision", ""));
      auto result = service.resolve_claim(req.path_params.at("id"), decision);
      reply(res, 200, {{"claim", result.claim}, {"report", result.report}});
    }));

    server.Post(v1 + "/sync/batches", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Kiosk});
      reply(res, 200, to_json(service.ingest_sync_batch(who, sync_batch_from_json(body_json(req)))));
    }));

    server.Get(v1 + "/alerts", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Staff, Role::Admin});
      std::optional<bool> ack;
      if (req.has_param("ack")) {
        const std::string v = to_lower_ascii(req.get_param_value("ack"));
        if (v != "true" && v != "false") throw Error(ErrorCode::ValidationError, "ack must be true or false");
        ack = v == "true";
      }
      json out = json::array();
      for (const auto& a : service.alerts(ack)) out.push_back(a);
      reply(res, 200, {{"alerts", out}});
    }));

    server.Post(v1 + "/alerts/:id/ack", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      reply(res, 200, json(service.acknowledge_alert(who, req.path_params.at("id"))));
    }));

    server.Get(v1 + "/blobs/:hash", wrap([this](const httplib::Request& req, httplib::Response& res, const Principal& who) {
      require_role(who, {Role::Staff, Role::Admin});
      auto bytes = service.store().read_blob(req.path_params.at("hash"));
      if (!bytes) throw Error(ErrorCode::NotFound, "no blob " + req.path_params.at("hash"));
      res.status = 200;
      res.set_content(std::string(bytes->begin(), bytes->end()), "application/octet-stream");
    }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 413) {
        reply_error(res, Error(ErrorCode::PayloadTooLarge, "request body too large"));
        res.status = 413;
      } else if (res.status == 404) {
        reply_error(res, Error(ErrorCode::NotFound, "no such endpoint"));
      }
    });
  }
};

HttpApi::HttpApi(MfService& service, Credentials credentials)
    : impl_(std::make_unique<Impl>(service, std::move(credentials))) {}

HttpApi::~HttpApi() { stop(); }

void HttpApi::listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
}

int HttpApi::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw Error(ErrorCode::IoError, "cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpApi::serve() { impl_->server.listen_after_bind(); }

void HttpApi::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace mf
