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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace mf {

enum class Role { Public = 0, Kiosk = 1, Staff = 2, Admin = 3 };

std::string_view to_string(Role role);
Role parse_role(std::string_view s);

struct Principal {
  std::string name;
  Role role = Role::Public;
  std::optional<std::string> kiosk_id;  // kiosk tokens only
};

/// Static bearer tokens:
///
///   {"tokens": [{"token": "...", "name": "desk-1", "role": "staff"},
///               {"token": "...", "name": "k7", "role": "kiosk", "kiosk_id": "k7"}]}
class Credentials {
 public:
  Credentials() = default;
  static Credentials from_json(const nlohmann::json& j);
  static Credentials load(const std::filesystem::path& path);

  void add(const std::string& token, Principal principal);
  std::optional<Principal> authenticate(std::string_view token) const;

 private:
  std::map<std::string, Principal, std::less<>> tokens_;
};

/// Throws AuthFailure when the role is not one of the allowed ones.
void require_role(const Principal& who, std::initializer_list<Role> allowed);

}  // namespace mf
