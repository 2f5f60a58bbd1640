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
#include <string>
#include <vector>

#include "mfhajj/image.hpp"
#include "mfhajj/vision.hpp"

namespace mf {

inline constexpr int kSyntheticWidth = 96;
inline constexpr int kSyntheticHeight = 120;

/// Identity-defining parameters of a synthetic face. Everything is in pixels
/// relative to the head centre unless noted.
struct FaceGeometry {
  double head_w = 0, head_h = 0;
  double skin_r = 0, skin_g = 0, skin_b = 0;  // 0..255
  double hair_fraction = 0;                   // of head height covered by hair
  double hair_luma = 0;
  double eye_dx = 0, eye_y = 0, eye_w = 0, eye_h = 0;
  double brow_gap = 0, brow_thickness = 0;
  double nose_len = 0;
  double mouth_y = 0, mouth_w = 0, mouth_h = 0;
  double background = 0;  // luma of the backdrop
  bool beard = false;
  double beard_luma = 0;
  /// Smooth shading bumps over the face: (x, y) in head-normalised units
  /// [-1,1], radius in the same units, signed relative amplitude.
  struct Bump {
    double x = 0, y = 0, radius = 0, amplitude = 0;
    bool operator==(const Bump&) const = default;
  };
  std::vector<Bump> relief;

  bool operator==(const FaceGeometry&) const = default;
};

FaceGeometry draw_face_geometry(std::uint64_t seed);

/// Per-image nuisance parameters.
struct Variation {
  double shift_x = 0, shift_y = 0;        // within +/-4 px
  double gradient_x = 0, gradient_y = 0;  // relative brightness slope across the frame
  double noise_sigma = 0;                 // <= 0.05 on the [0,1] scale
  bool glasses = false;
  bool eyes_closed = false;
  double smile = 1.0;      // mouth height multiplier
  double gaze_shift = 0;   // horizontal feature offset standing in for head turn
};

ImageBuffer render_face(const FaceGeometry& face, const Variation& variation, std::uint64_t noise_seed);

/// Deterministic per seed. Throws TooFewVariations when n_variations < 3.
std::vector<ImageBuffer> generate_synthetic_identity(std::uint64_t seed, int n_variations);

/// Child seed for identity `index` of a dataset generated with `dataset_seed`.
std::uint64_t identity_seed(std::uint64_t dataset_seed, int index);

struct DatasetEntry {
  std::string identity;               // directory name, e.g. "identity_0007"
  std::uint64_t seed = 0;
  std::vector<std::string> files;     // relative to the dataset root
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  int identities = 0;
  int variations = 0;
  std::vector<DatasetEntry> entries;
};

/// Writes identity_NNNN/var_MM.ppm files plus manifest.json under `root`.
DatasetManifest generate_dataset(const std::filesystem::path& root, int identities, int variations,
                                 std::uint64_t seed);
DatasetManifest load_dataset_manifest(const std::filesystem::path& root);

}  // namespace mf
