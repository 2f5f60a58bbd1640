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
#include <vector>

#include "mfhajj/image.hpp"

namespace mf {

inline constexpr int kChipSide = 64;
inline constexpr int kChipSize = kChipSide * kChipSide;

/// Minimum number of images per enrolled individual.
inline constexpr int kMinImagesPerPerson = 3;

/// Head outline height:width ratio used by the detector template.
inline constexpr double kHeadAspect = 1.3;

struct FaceBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  double score = 0.0;

  long area() const { return static_cast<long>(w) * h; }
  bool operator==(const FaceBox&) const = default;
};

double intersection_over_union(const FaceBox& a, const FaceBox& b);

/// Canonical 64x64 face crop.
struct FaceChip {
  std::vector<double> pixels = std::vector<double>(kChipSize, 0.0);
  bool zero_mean_unit_norm = false;

  bool operator==(const FaceChip&) const = default;
};

struct DetectorParams {
  std::vector<int> scales{40, 46, 52, 58, 64, 70};  // template widths, ascending
  double edge_percentile = 70.0;
  double score_threshold = 0.30;
  double nms_overlap = 0.30;

  void validate() const;
};

/// Luma conversion only (no equalisation); 8-bit samples scaled to [0,1].
GrayImage to_luma(const ImageBuffer& image);

/// Luma byte per pixel, rounded 0.299 R + 0.587 G + 0.114 B.
std::vector<std::uint8_t> luma_bytes(const ImageBuffer& image);

/// Histogram equalisation over 256 bins: v -> cdf(v) / N. An image with a
/// single occupied bin maps to that bin's value / 255.
GrayImage equalize(const std::vector<std::uint8_t>& luma, int width, int height);

/// Luma + equalisation. Total for any valid buffer.
GrayImage preprocess(const ImageBuffer& image);

/// Sobel gradient magnitude; the one-pixel border is zero.
GrayImage sobel_magnitude(const GrayImage& image);

/// Binary edge map. The threshold is the p-th percentile of the nonzero
/// magnitudes taken as sorted[floor(p/100 * n)]; pixels at or above it are
/// edges. p = 100 selects nothing.
GrayImage edge_map(const GrayImage& image, double edge_percentile);

/// Pixel offsets of the elliptical annulus head outline for a template of
/// the given width. Height is round(1.3 * width); the ring is 2 px thick at
/// width 64 and scales proportionally.
struct HeadTemplate {
  int width = 0;
  int height = 0;
  std::vector<std::pair<int, int>> offsets;  // (dx, dy)
};
HeadTemplate head_template(int width);

/// Silhouette detector: correlates the edge map with head-outline templates
/// at every scale, keeps 3x3 local maxima above the score threshold, then
/// applies greedy NMS. Sorted by score desc, then y, x, width.
std::vector<FaceBox> detect_faces(const GrayImage& image, const DetectorParams& params = {});

/// Largest box by area, ties by score then position. Precondition: non-empty.
const FaceBox& largest_face(const std::vector<FaceBox>& boxes);

/// Bilinear sample at continuous coordinates; pixel centres sit on integers.
/// Coordinates are clamped to the image.
double sample_bilinear(const GrayImage& image, double x, double y);

/// Bilinear resample of the box region to 64x64.
FaceChip crop_normalize(const GrayImage& image, const FaceBox& box);

/// Returns a copy with zero mean and unit L2 norm (constant chips stay zero).
FaceChip normalize_contrast(const FaceChip& chip);

}  // namespace mf
