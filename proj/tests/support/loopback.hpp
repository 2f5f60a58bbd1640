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

#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "mfhajj/auth.hpp"
#include "mfhajj/http_api.hpp"

namespace mftest {

/// Serves an HttpApi on 127.0.0.1 with a free port for the object's lifetime.
class LoopbackServer {
 public:
  LoopbackServer(mf::MfService& service, mf::Credentials credentials) : api_(service, std::move(credentials)) {
    port_ = api_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { api_.serve(); });
    api_.wait_until_ready();
  }
  ~LoopbackServer() {
    api_.stop();
    thread_.join();
  }
  LoopbackServer(const LoopbackServer&) = delete;
  LoopbackServer& operator=(const LoopbackServer&) = delete;

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  mf::HttpApi api_;
  int port_ = 0;
  std::thread thread_;
};

/// admin "adm", staff "stf", kiosks "k1" and "k2" bound to kiosk ids k1, k2.
inline mf::Credentials test_credentials() {
  return mf::Credentials::from_json(nlohmann::json::parse(R"({"tokens": [
      {"token": "adm", "name": "admin-1", "role": "admin"},
      {"token": "stf", "name": "desk-1", "role": "staff"},
      {"token": "k1", "name": "k1", "role": "kiosk"},
      {"token": "k2", "name": "k2", "role": "kiosk"}]})"));
}

}  // namespace mftest
