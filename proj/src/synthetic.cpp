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

#include "mfhajj/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mfhajj/error.hpp"
#include "mfhajj/random.hpp"

namespace mf {

namespace {

struct Rgb {
  double r, g, b;
};

bool in_ellipse(double x, double y, double cx, double cy, double a, double b) {
  const double u = (x - cx) / a;
  const double v = (y - cy) / b;
  return u * u + v * v <= 1.0;
}

bool in_rect(double x, double y, double x0, double y0, double x1, double y1) {
  return x >= x0 && x <= x1 && y >= y0 && y <= y1;
}

bool on_rect_outline(double x, double y, double x0, double y0, double x1, double y1, double t) {
  return in_rect(x, y, x0, y0, x1, y1) && !in_rect(x, y, x0 + t, y0 + t, x1 - t, y1 - t);
}

Rgb gray(double l) { return {l, l, l}; }

// Colour of the scene at continuous point (x, y), before lighting and noise.
Rgb scene_color(const FaceGeometry& f, const Variation& v, double x, double y) {
  const double cx = kSyntheticWidth / 2.0 + v.shift_x;
  const double cy = kSyntheticHeight / 2.0 + 2.0 + v.shift_y;
  const double a = f.head_w / 2.0;
  const double b = f.head_h / 2.0;
  if (!in_ellipse(x, y, cx, cy, a, b)) {
    // Vignetted backdrop.
    const double u = (x - kSyntheticWidth / 2.0) / (kSyntheticWidth / 2.0);
    const double w = (y - kSyntheticHeight / 2.0) / (kSyntheticHeight / 2.0);
    return gray(f.background * (1.0 - 0.18 * (u * u + w * w)));
  }
  // Radial falloff gives the head smooth shading that dominates sensor noise.
  const double rho2 = ((x - cx) / a) * ((x - cx) / a) + ((y - cy) / b) * ((y - cy) / b);
  double shade = 1.0 - 0.4 * rho2;
  const double nx = (x - cx) / a;
  const double ny = (y - cy) / b;
  for (const auto& bump : f.relief) {
    const double d2 = (nx - bump.x) * (nx - bump.x) + (ny - bump.y) * (ny - bump.y);
    shade += bump.amplitude * std::exp(-d2 / (2.0 * bump.radius * bump.radius));
  }
  const Rgb skin{f.skin_r * shade, f.skin_g * shade, f.skin_b * shade};
  const double hairline = cy - b + f.hair_fraction * f.head_h;
  if (y < hairline) return gray(f.hair_luma * (0.7 + 0.6 * (y - (cy - b)) / f.head_h));

  const double fx = cx + v.gaze_shift;  // features shift with head turn
  const double eye_cy = cy + f.eye_y;
  const double eye_h = v.eyes_closed ? std::max(0.8, f.eye_h * 0.25) : f.eye_h;

  if (v.glasses) {
    const double gw = f.eye_w * 0.8 + 3.0;
    const double gh = f.eye_h * 1.3 + 3.0;
    for (int side : {-1, 1}) {
      const double ex = fx + side * f.eye_dx;
      if (on_rect_outline(x, y, ex - gw, eye_cy - gh, ex + gw, eye_cy + gh, 1.0)) return gray(70);
    }
    if (in_rect(x, y, fx - f.eye_dx + gw, eye_cy - 1.0, fx + f.eye_dx - gw, eye_cy)) return gray(70);
  }
  for (int side : {-1, 1}) {
    const double ex = fx + side * f.eye_dx;
    if (in_ellipse(x, y, ex, eye_cy, f.eye_w / 2.0, eye_h / 2.0)) return gray(25);
    const double brow_y = eye_cy - f.brow_gap;
    if (in_rect(x, y, ex - f.eye_w * 0.6, brow_y - f.brow_thickness, ex + f.eye_w * 0.6, brow_y)) {
      return gray(f.hair_luma);
    }
  }
  if (in_rect(x, y, fx - 1.0, eye_cy + 2.0, fx + 1.0, eye_cy + 2.0 + f.nose_len)) {
    return {skin.r * 0.75, skin.g * 0.75, skin.b * 0.75};
  }
  if (f.beard && y > cy + f.mouth_y - f.mouth_h && rho2 > 0.25) return gray(f.beard_luma);
  const double mouth_h = f.mouth_h * v.smile;
  const double my = cy + f.mouth_y;
  if (in_rect(x, y, fx - f.mouth_w / 2.0, my - mouth_h / 2.0, fx + f.mouth_w / 2.0, my + mouth_h / 2.0)) {
    return {skin.r * 0.7, skin.g * 0.45, skin.b * 0.45};
  }
  return skin;
}

// Separable Gaussian lens blur, sigma 1 px, edge-clamped.
std::vector<Rgb> blur_psf(const std::vector<Rgb>& in, int w, int h) {
  constexpr double kTaps[5] = {0.05448868, 0.24420134, 0.40261995, 0.24420134, 0.05448868};
  auto pass = [&](const std::vector<Rgb>& src, bool horizontal) {
    std::vector<Rgb> dst(src.size(), Rgb{0, 0, 0});
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        Rgb acc{0, 0, 0};
        for (int t = -2; t <= 2; ++t) {
          const int sx = horizontal ? std::clamp(x + t, 0, w - 1) : x;
          const int sy = horizontal ? y : std::clamp(y + t, 0, h - 1);
          const Rgb& p = src[static_cast<std::size_t>(sy) * w + sx];
          acc.r += kTaps[t + 2] * p.r;
          acc.g += kTaps[t + 2] * p.g;
          acc.b += kTaps[t + 2] * p.b;
        }
        dst[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
    return dst;
  };
  return pass(pass(in, true), false);
}

}  // namespace

FaceGeometry draw_face_geometry(std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  FaceGeometry f;
  f.head_w = rng.uniform(46.0, 58.0);
  f.head_h = f.head_w * rng.uniform(1.27, 1.33);
  const double skin = rng.uniform(110.0, 175.0);
  f.skin_r = std::min(255.0, skin * rng.uniform(1.05, 1.18));
  f.skin_g = skin * rng.uniform(0.92, 1.0);
  f.skin_b = skin * rng.uniform(0.75, 0.9);
  f.hair_fraction = rng.uniform(0.12, 0.32);
  f.hair_luma = rng.uniform(20.0, 70.0);
  f.eye_dx = rng.uniform(0.16, 0.24) * f.head_w;
  f.eye_y = -rng.uniform(0.0, 0.12) * f.head_h;
  f.eye_w = rng.uniform(0.12, 0.18) * f.head_w;
  f.eye_h = rng.uniform(0.05, 0.09) * f.head_h;
  f.brow_gap = rng.uniform(0.05, 0.09) * f.head_h;
  f.brow_thickness = rng.uniform(1.5, 3.5);
  f.nose_len = rng.uniform(0.10, 0.18) * f.head_h;
  f.mouth_y = rng.uniform(0.20, 0.30) * f.head_h;
  f.mouth_w = rng.uniform(0.25, 0.45) * f.head_w;
  f.mouth_h = rng.uniform(2.0, 4.5);
  f.background = rng.uniform(195.0, 240.0);
  f.beard = rng.bernoulli(0.3);
  f.beard_luma = rng.uniform(25.0, 80.0);
  for (int i = 0; i < 10; ++i) {
    FaceGeometry::Bump bump;
    bump.x = rng.uniform(-0.7, 0.7);
    bump.y = rng.uniform(-0.5, 0.8);
    bump.radius = rng.uniform(0.12, 0.3);
    bump.amplitude = rng.uniform(-0.5, 0.5);
    f.relief.push_back(bump);
  }
  return f;
}

ImageBuffer render_face(const FaceGeometry& face, const Variation& variation, std::uint64_t noise_seed) {
  ImageBuffer image;
  image.width = kSyntheticWidth;
  image.height = kSyntheticHeight;
  image.channels = 3;
  image.pixels.resize(static_cast<std::size_t>(image.width) * image.height * 3);
  const int w = image.width;
  const int h = image.height;
  std::vector<Rgb> scene(static_cast<std::size_t>(w) * h);
  constexpr double kSub[2] = {0.25, 0.75};  // 2x2 supersampling
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb acc{0, 0, 0};
      for (double sy : kSub) {
        for (double sx : kSub) {
          const Rgb c = scene_color(face, variation, x + sx, y + sy);
          acc.r += c.r / 4.0;
          acc.g += c.g / 4.0;
          acc.b += c.b / 4.0;
        }
      }
      scene[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  scene = blur_psf(scene, w, h);
  Rng noise(mix_seed(noise_seed));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Rgb& px = scene[static_cast<std::size_t>(y) * w + x];
      const double light = 1.0 + variation.gradient_x * (x - w / 2.0) / w +
                           variation.gradient_y * (y - h / 2.0) / h;
      const double n = noise.normal() * variation.noise_sigma * 255.0;
      const double rgb[3] = {px.r, px.g, px.b};
      for (int c = 0; c < 3; ++c) {
        const double value = rgb[c] * light + n;
        image.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
      }
    }
  }
  return image;
}

std::vector<ImageBuffer> generate_synthetic_identity(std::uint64_t seed, int n_variations) {
  if (n_variations < kMinImagesPerPerson) {
    throw Error(ErrorCode::TooFewVariations,
                "an identity needs at least " + std::to_string(kMinImagesPerPerson) + " images");
  }
  const FaceGeometry face = draw_face_geometry(seed);
  std::vector<ImageBuffer> images;
  images.reserve(static_cast<std::size_t>(n_variations));
  for (int i = 0; i < n_variations; ++i) {
    const std::uint64_t vseed = mix_seed(seed ^ (0xA5A5'0000'0000'0000ull + static_cast<std::uint64_t>(i)));
    Rng rng(vseed);
    Variation v;
    v.shift_x = rng.uniform(-4.0, 4.0);
    v.shift_y = rng.uniform(-4.0, 4.0);
    v.gradient_x = rng.uniform(-0.06, 0.06);
    v.gradient_y = rng.uniform(-0.06, 0.06);
    v.noise_sigma = rng.uniform(0.005, 0.02);
    v.glasses = rng.bernoulli(0.3);
    v.eyes_closed = rng.bernoulli(0.15);
    v.smile = rng.uniform(0.8, 1.5);
    v.gaze_shift = rng.uniform(-1.5, 1.5);
    images.push_back(render_face(face, v, vseed + 1));
  }
  return images;
}

std::uint64_t identity_seed(std::uint64_t dataset_seed, int index) {
  return mix_seed(mix_seed(dataset_seed) + static_cast<std::uint64_t>(index));
}

DatasetManifest generate_dataset(const std::filesystem::path& root, int identities, int variations,
                                 std::uint64_t seed) {
  if (identities < 1) throw Error(ErrorCode::InvalidArgument, "identities must be >= 1");
  if (variations < kMinImagesPerPerson) {
    throw Error(ErrorCode::TooFewVariations,
                "an identity needs at least " + std::to_string(kMinImagesPerPerson) + " images");
  }
  std::filesystem::create_directories(root);
  DatasetManifest manifest{seed, identities, variations, {}};
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < identities; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "identity_%04d", i);
    DatasetEntry entry{name, identity_seed(seed, i), {}};
    std::filesystem::create_directories(root / name);
    auto images = generate_synthetic_identity(entry.seed, variations);
    for (int v = 0; v < variations; ++v) {
      char file[48];
      std::snprintf(file, sizeof file, "%s/var_%02d.ppm", name, v);
      write_pnm_file((root / file).string(), images[static_cast<std::size_t>(v)]);
      entry.files.emplace_back(file);
    }
    entries.push_back({{"identity", entry.identity}, {"seed", entry.seed}, {"files", entry.files}});
    manifest.entries.push_back(std::move(entry));
  }
  nlohmann::json doc{{"seed", seed}, {"identities", identities}, {"variations", variations},
                     {"entries", entries}};
  std::ofstream out(root / "manifest.json", std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest under " + root.string());
  out << doc.dump(2) << '\n';
  return manifest;
}

DatasetManifest load_dataset_manifest(const std::filesystem::path& root) {
  std::ifstream in(root / "manifest.json");
  if (!in) throw Error(ErrorCode::IoError, "no manifest.json under " + root.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    DatasetManifest m;
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.identities = doc.at("identities").get<int>();
    m.variations = doc.at("variations").get<int>();
    for (const auto& e : doc.at("entries")) {
      m.entries.push_back({e.at("identity").get<std::string>(), e.at("seed").get<std::uint64_t>(),
                           e.at("files").get<std::vector<std::string>>()});
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ValidationError, "bad dataset manifest", ex.what());
  }
}

}  // namespace mf
