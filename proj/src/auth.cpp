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

#include "mfhajj/auth.hpp"

#include <algorithm>
#include <fstream>

#include "mfhajj/error.hpp"
#include "mfhajj/util.hpp"

namespace mf {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Public: return "public";
    case Role::Kiosk: return "kiosk";
    case Role::Staff: return "staff";
    case Role::Admin: return "admin";
  }
  return "?";
}

Role parse_role(std::string_view s) {
  const std::string r = to_lower_ascii(s);
  if (r == "public") return Role::Public;
  if (r == "kiosk") return Role::Kiosk;
  if (r == "staff") return Role::Staff;
  if (r == "admin") return Role::Admin;
  throw Error(ErrorCode::ValidationError, "unknown role '" + std::string(s) + "'");
}

Credentials Credentials::from_json(const nlohmann::json& j) {
  Credentials c;
  for (const auto& t : j.at("tokens")) {
    Principal p;
    p.name = t.value("name", "");
    p.role = parse_role(t.at("role").get<std::string>());
    if (t.contains("kiosk_id")) p.kiosk_id = t.at("kiosk_id").get<std::string>();
    if (p.role == Role::Kiosk && !p.kiosk_id) p.kiosk_id = p.name;
    c.add(t.at("token").get<std::string>(), std::move(p));
  }
  return c;
}

Credentials Credentials::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read credentials file " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, "bad credentials file: " + std::string(e.what()));
  }
}

void Credentials::add(const std::string& token, Principal principal) {
  if (token.empty()) throw Error(ErrorCode::ValidationError, "empty token");
  tokens_[token] = std::move(principal);
}

std::optional<Principal> Credentials::authenticate(std::string_view token) const {
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

void require_role(const Principal& who, std::initializer_list<Role> allowed) {
  if (std::find(allowed.begin(), allowed.end(), who.role) == allowed.end()) {
    throw Error(ErrorCode::AuthFailure, "role " + std::string(to_string(who.role)) + " may not do this", "forbidden");
  }
}

}  // namespace mf
