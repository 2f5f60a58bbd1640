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
#include <cstdlib>
#include <filesystem>
#include <string>
#include <system_error>
#include <vector>

#include "mfhajj/image.hpp"
#include "mfhajj/recognition.hpp"
#include "mfhajj/service.hpp"
#include "mfhajj/synthetic.hpp"
#include "mfhajj/vision.hpp"

namespace mftest {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "mfhajj-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::uint8_t> pnm_bytes(const mf::ImageBuffer& image) { return mf::encode_pnm(image); }

inline std::vector<std::uint8_t> blank_photo(int w = 96, int h = 120, std::uint8_t value = 128) {
  mf::ImageBuffer img{w, h, 1, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, value)};
  return pnm_bytes(img);
}

/// Identity i's images for a dataset seed, PNM-encoded.
inline std::vector<std::vector<std::uint8_t>> identity_photos(std::uint64_t dataset_seed, int i, int variations) {
  std::vector<std::vector<std::uint8_t>> out;
  for (const auto& img : mf::generate_synthetic_identity(mf::identity_seed(dataset_seed, i), variations)) {
    out.push_back(pnm_bytes(img));
  }
  return out;
}

/// Eigenmodel trained on the first `per_identity` images of `identities`
/// synthetic identities.
inline mf::EigenModel synthetic_model(std::uint64_t dataset_seed, int identities, int per_identity, int k,
                                      std::uint64_t version = 1) {
  std::vector<mf::FaceChip> chips;
  for (int i = 0; i < identities; ++i) {
    const auto images = mf::generate_synthetic_identity(mf::identity_seed(dataset_seed, i), per_identity);
    for (const auto& img : images) {
      const auto gray = mf::preprocess(img);
      chips.push_back(mf::crop_normalize(gray, mf::largest_face(mf::detect_faces(gray))));
    }
  }
  mf::TrainOptions options;
  options.version = version;
  return mf::train_eigenmodel(chips, k, options);
}

inline mf::ServiceConfig quick_config(const std::filesystem::path& dir) {
  mf::ServiceConfig c;
  c.data_dir = dir;
  c.sync_writes = false;
  c.snapshot_every = 0;
  return c;
}

}  // namespace mftest
