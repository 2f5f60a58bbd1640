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

#include <memory>
#include <string>

#include "mfhajj/auth.hpp"
#include "mfhajj/error.hpp"
#include "mfhajj/service.hpp"

namespace mf {

/// HTTP status for an error code (the body is {code, message, detail?}).
int http_status(const Error& error);

/// The /api/v1 surface over an MfService.
///
///   POST /identify                 staff, admin   multipart photo, top_n, threshold
///   POST /persons                  admin          multipart full_name, nationality, group_id, photos
///   GET  /persons/{id}             staff, admin
///   POST /reports/items            any (public: LOST only)
///   POST /reports/persons          kiosk, staff, admin
///   GET  /reports                  any            ?query=&limit= or ?type=&kind=&status=&since=&until=&page=&page_size=
///   GET  /reports/{id}             any (public, kiosk: items only)
///   POST /reports/{id}/claims      any
///   POST /reports/{id}/match-decision  staff, admin  {"decision": "CONFIRM"|"REJECT"}
///   POST /reports/{id}/status      admin          {"status": "REJECTED"|"CLOSED"}
///   POST /claims/{id}/decision     admin          {"decision": "ACCEPTED"|"DENIED"}
///   POST /sync/batches             kiosk
///   GET  /alerts?ack=false         staff, admin
///   POST /alerts/{id}/ack          admin
///   GET  /blobs/{sha256}           staff, admin
///   GET  /healthz                  none
///
/// Requests without an Authorization header act as the public role.
class HttpApi {
 public:
  HttpApi(MfService& service, Credentials credentials);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// Binds and serves until stop(). Port 0 picks a free port.
  void listen(const std::string& host, int port);
  /// Binds only; returns the port. Follow with serve().
  int bind(const std::string& host, int port);
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mf
