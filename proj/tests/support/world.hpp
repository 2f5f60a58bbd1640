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
#include <vector>

#include "fixtures.hpp"
#include "mfhajj/evaluation.hpp"
#include "mfhajj/service.hpp"

namespace mftest {

/// Installs a model trained on identities [0, identities) of a synthetic
/// dataset, enrolls each of them with its first three images as person
/// "p<i>", and sets the calibrated threshold. Returns the person ids.
inline std::vector<std::string> populate(mf::MfService& service, std::uint64_t seed, int identities, int k) {
  service.install_model(synthetic_model(seed, identities, 3, k));
  std::vector<std::string> ids;
  for (int i = 0; i < identities; ++i) {
    auto photos = identity_photos(seed, i, 3);
    mf::PersonRecord p;
    p.person_id = "p" + std::to_string(i);
    p.full_name = "Pilgrim " + std::to_string(i);
    p.nationality = "SA";
    ids.push_back(service.enroll_person(p, photos).person_id);
  }
  service.set_threshold(mf::calibrate_threshold(*service.gallery()).threshold);
  return ids;
}

/// The held-out fourth image of identity i.
inline std::vector<std::uint8_t> probe_photo(std::uint64_t seed, int i) { return identity_photos(seed, i, 4).back(); }

}  // namespace mftest
