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

#include "mfhajj/vision.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "mfhajj/error.hpp"

namespace mf {

double intersection_over_union(const FaceBox& a, const FaceBox& b) {
  int ix0 = std::max(a.x, b.x);
  int iy0 = std::max(a.y, b.y);
  int ix1 = std::min(a.x + a.w, b.x + b.w);
  int iy1 = std::min(a.y + a.h, b.y + b.h);
  if (ix1 <= ix0 || iy1 <= iy0) return 0.0;
  double inter = static_cast<double>(ix1 - ix0) * (iy1 - iy0);
  double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
  return inter / uni;
}

void DetectorParams::validate() const {
  if (scales.empty()) throw Error(ErrorCode::InvalidArgument, "detector needs at least one scale");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 16) throw Error(ErrorCode::InvalidArgument, "detector scales must be >= 16 px");
    if (i > 0 && scales[i] <= scales[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "detector scales must be strictly ascending");
    }
  }
  if (!(edge_percentile > 0.0 && edge_percentile < 100.0)) {
    throw Error(ErrorCode::InvalidArgument, "edge_percentile must lie in (0,100)");
  }
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "score_threshold must lie in [0,1]");
  }
  if (!(nms_overlap >= 0.0 && nms_overlap <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "nms_overlap must lie in [0,1]");
  }
}

std::vector<std::uint8_t> luma_bytes(const ImageBuffer& image) {
  image.validate();
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  std::vector<std::uint8_t> out(n);
  if (image.channels == 1) {
    std::copy(image.pixels.begin(), image.pixels.end(), out.begin());
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = &image.pixels[i * 3];
    double y = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
  }
  return out;
}

GrayImage to_luma(const ImageBuffer& image) {
  image.validate();
  GrayImage out(image.width, image.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    if (image.channels == 1) {
      out.pixels[i] = image.pixels[i] / 255.0;
    } else {
      const std::uint8_t* p = &image.pixels[i * 3];
      out.pixels[i] = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }
  }
  return out;
}

GrayImage equalize(const std::vector<std::uint8_t>& luma, int width, int height) {
  std::array<std::size_t, 256> hist{};
  for (auto v : luma) ++hist[v];
  GrayImage out(width, height);
  const std::size_t occupied =
      static_cast<std::size_t>(std::count_if(hist.begin(), hist.end(), [](auto c) { return c > 0; }));
  if (occupied <= 1) {
    for (std::size_t i = 0; i < luma.size(); ++i) out.pixels[i] = luma[i] / 255.0;
    return out;
  }
  std::array<double, 256> map{};
  std::size_t running = 0;
  const double total = static_cast<double>(luma.size());
  for (int v = 0; v < 256; ++v) {
    running += hist[v];
    map[v] = static_cast<double>(running) / total;
  }
  for (std::size_t i = 0; i < luma.size(); ++i) out.pixels[i] = map[luma[i]];
  return out;
}

GrayImage preprocess(const ImageBuffer& image) {
  return equalize(luma_bytes(image), image.width, image.height);
}

GrayImage sobel_magnitude(const GrayImage& image) {
  const int w = image.width;
  const int h = image.height;
  GrayImage out(w, h);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      double gx = (image.at(x + 1, y - 1) + 2 * image.at(x + 1, y) + image.at(x + 1, y + 1)) -
                  (image.at(x - 1, y - 1) + 2 * image.at(x - 1, y) + image.at(x - 1, y + 1));
      double gy = (image.at(x - 1, y + 1) + 2 * image.at(x, y + 1) + image.at(x + 1, y + 1)) -
                  (image.at(x - 1, y - 1) + 2 * image.at(x, y - 1) + image.at(x + 1, y - 1));
      out.at(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

GrayImage edge_map(const GrayImage& image, double edge_percentile) {
  if (image.width < 3 || image.height < 3) {
    throw Error(ErrorCode::ImageTooSmall, "edge map needs an image of at least 3x3");
  }
  if (!(edge_percentile >= 0.0 && edge_percentile <= 100.0)) {
    throw Error(ErrorCode::InvalidArgument, "edge_percentile must lie in [0,100]");
  }
  GrayImage magnitude = sobel_magnitude(image);
  std::vector<double> nonzero;
  nonzero.reserve(magnitude.pixels.size() / 4);
  for (double m : magnitude.pixels) {
    if (m > 0.0) nonzero.push_back(m);
  }
  GrayImage out(image.width, image.height, 0.0);
  const auto rank = static_cast<std::size_t>(std::floor(edge_percentile / 100.0 * nonzero.size()));
  if (rank >= nonzero.size()) return out;
  std::nth_element(nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(rank), nonzero.end());
  const double threshold = nonzero[rank];
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const double m = magnitude.pixels[i];
    out.pixels[i] = (m > 0.0 && m >= threshold) ? 1.0 : 0.0;
  }
  return out;
}

HeadTemplate head_template(int width) {
  HeadTemplate t;
  t.width = width;
  t.height = static_cast<int>(std::lround(kHeadAspect * width));
  const double a = width / 2.0;
  const double b = t.height / 2.0;
  const double thickness = 2.0 * width / 64.0;
  const double ai = a - thickness;
  const double bi = b - thickness;
  for (int dy = 0; dy < t.height; ++dy) {
    for (int dx = 0; dx < width; ++dx) {
      const double px = dx + 0.5 - a;
      const double py = dy + 0.5 - b;
      const double outer = (px * px) / (a * a) + (py * py) / (b * b);
      const double inner = (px * px) / (ai * ai) + (py * py) / (bi * bi);
      if (outer <= 1.0 && inner > 1.0) t.offsets.emplace_back(dx, dy);
    }
  }
  return t;
}

namespace {

bool detection_order(const FaceBox& a, const FaceBox& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.y != b.y) return a.y < b.y;
  if (a.x != b.x) return a.x < b.x;
  return a.w < b.w;
}

// Vote accumulation: every edge pixel adds one to each placement whose
// template covers it. Equivalent to direct correlation, but proportional to
// the number of edge pixels rather than the number of placements.
void detect_at_scale(const std::vector<std::pair<int, int>>& edges, int img_w, int img_h,
                     const HeadTemplate& tmpl, double threshold, std::vector<FaceBox>& out) {
  const int nx = img_w - tmpl.width + 1;
  const int ny = img_h - tmpl.height + 1;
  if (nx <= 0 || ny <= 0) return;
  std::vector<int> votes(static_cast<std::size_t>(nx) * ny, 0);
  for (auto [ex, ey] : edges) {
    for (auto [dx, dy] : tmpl.offsets) {
      const int x = ex - dx;
      const int y = ey - dy;
      if (x >= 0 && y >= 0 && x < nx && y < ny) ++votes[static_cast<std::size_t>(y) * nx + x];
    }
  }
  const double size = static_cast<double>(tmpl.offsets.size());
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const int v = votes[static_cast<std::size_t>(y) * nx + x];
      const double score = static_cast<double>(v) / size;
      if (v == 0 || score < threshold) continue;
      bool is_max = true;
      for (int oy = -1; oy <= 1 && is_max; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const int qx = x + ox;
          const int qy = y + oy;
          if ((ox == 0 && oy == 0) || qx < 0 || qy < 0 || qx >= nx || qy >= ny) continue;
          if (votes[static_cast<std::size_t>(qy) * nx + qx] > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) out.push_back(FaceBox{x, y, tmpl.width, tmpl.height, score});
    }
  }
}

}  // namespace

std::vector<FaceBox> detect_faces(const GrayImage& image, const DetectorParams& params) {
  params.validate();
  const HeadTemplate smallest = head_template(params.scales.front());
  if (image.width < smallest.width || image.height < smallest.height) {
    throw Error(ErrorCode::ImageTooSmall, "image is smaller than the smallest detector scale");
  }
  const GrayImage edges = edge_map(image, params.edge_percentile);
  std::vector<std::pair<int, int>> edge_pixels;
  for (int y = 0; y < edges.height; ++y) {
    for (int x = 0; x < edges.width; ++x) {
      if (edges.at(x, y) > 0.5) edge_pixels.emplace_back(x, y);
    }
  }
  std::vector<FaceBox> candidates;
  if (edge_pixels.empty()) return candidates;
  for (int scale : params.scales) {
    detect_at_scale(edge_pixels, image.width, image.height, head_template(scale),
                    params.score_threshold, candidates);
  }
  std::sort(candidates.begin(), candidates.end(), detection_order);
  std::vector<FaceBox> kept;
  for (const auto& c : candidates) {
    bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const FaceBox& k) {
      return intersection_over_union(c, k) > params.nms_overlap;
    });
    if (!suppressed) kept.push_back(c);
  }
  return kept;
}

const FaceBox& largest_face(const std::vector<FaceBox>& boxes) {
  if (boxes.empty()) throw Error(ErrorCode::NoFaceDetected, "no face detected");
  return *std::min_element(boxes.begin(), boxes.end(), [](const FaceBox& a, const FaceBox& b) {
    if (a.area() != b.area()) return a.area() > b.area();
    return detection_order(a, b);
  });
}

double sample_bilinear(const GrayImage& image, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(image.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(image.height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = image.at(x0, y0) * (1 - fx) + image.at(x1, y0) * fx;
  const double bottom = image.at(x0, y1) * (1 - fx) + image.at(x1, y1) * fx;
  return top * (1 - fy) + bottom * fy;
}

FaceChip crop_normalize(const GrayImage& image, const FaceBox& box) {
  if (box.w < 1 || box.h < 1 || box.x < 0 || box.y < 0 || box.x + box.w > image.width ||
      box.y + box.h > image.height) {
    throw Error(ErrorCode::BoxOutOfBounds, "face box is not inside the image");
  }
  FaceChip chip;
  const double sx = static_cast<double>(box.w) / kChipSide;
  const double sy = static_cast<double>(box.h) / kChipSide;
  for (int j = 0; j < kChipSide; ++j) {
    const double src_y = box.y + (j + 0.5) * sy - 0.5;
    for (int i = 0; i < kChipSide; ++i) {
      const double src_x = box.x + (i + 0.5) * sx - 0.5;
      chip.pixels[static_cast<std::size_t>(j) * kChipSide + i] = sample_bilinear(image, src_x, src_y);
    }
  }
  return chip;
}

FaceChip normalize_contrast(const FaceChip& chip) {
  FaceChip out = chip;
  const double mean =
      std::accumulate(chip.pixels.begin(), chip.pixels.end(), 0.0) / static_cast<double>(chip.pixels.size());
  double norm2 = 0.0;
  for (auto& v : out.pixels) {
    v -= mean;
    norm2 += v * v;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : out.pixels) v *= inv;
  }
  out.zero_mean_unit_norm = true;
  return out;
}

}  // namespace mf
