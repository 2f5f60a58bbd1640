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

#include <gtest/gtest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "mfhajj/error.hpp"
#include "mfhajj/random.hpp"
#include "mfhajj/synthetic.hpp"
#include "mfhajj/vision.hpp"

namespace {

using mf::ErrorCode;

mf::GrayImage filled_ellipses(int w, int h, const std::vector<std::array<double, 4>>& ellipses) {
  mf::GrayImage img(w, h, 1.0);
  for (const auto& [cx, cy, ew, eh] : ellipses) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double ux = (x + 0.5 - cx) / (ew / 2);
        const double uy = (y + 0.5 - cy) / (eh / 2);
        if (ux * ux + uy * uy <= 1.0) img.at(x, y) = 0.0;
      }
    }
  }
  return img;
}

TEST(Preprocess, ConstantImageStaysConstant) {
  mf::ImageBuffer img{5, 4, 1, std::vector<std::uint8_t>(20, 100)};
  const auto out = mf::preprocess(img);
  for (double v : out.pixels) EXPECT_DOUBLE_EQ(v, 100 / 255.0);
}

TEST(Preprocess, LumaWeights) {
  mf::ImageBuffer red{1, 1, 3, {255, 0, 0}};
  EXPECT_NEAR(mf::to_luma(red).pixels[0], 0.299, 1e-12);
  mf::ImageBuffer green{1, 1, 3, {0, 255, 0}};
  EXPECT_NEAR(mf::to_luma(green).pixels[0], 0.587, 1e-12);
  EXPECT_EQ(mf::luma_bytes(red)[0], 76);  // round(76.245)
}

TEST(Preprocess, TwoValueEqualisation) {
  // Half the pixels at 0 and half at 255: cdf(0) = 0.5, cdf(255) = 1.
  mf::ImageBuffer img{4, 2, 1, {0, 0, 0, 0, 255, 255, 255, 255}};
  const auto out = mf::preprocess(img);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(out.pixels[i], 0.5);
  for (int i = 4; i < 8; ++i) EXPECT_DOUBLE_EQ(out.pixels[i], 1.0);
}

TEST(Preprocess, InvariantUnderIncreasingAffineRescale) {
  mf::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    mf::ImageBuffer a{9, 7, 1, {}};
    mf::ImageBuffer b = a;
    for (int i = 0; i < 63; ++i) {
      const int v = static_cast<int>(rng.uniform_int(0, 100));
      a.pixels.push_back(static_cast<std::uint8_t>(v));
      b.pixels.push_back(static_cast<std::uint8_t>(2 * v + 31));
    }
    const auto pa = mf::preprocess(a);
    const auto pb = mf::preprocess(b);
    EXPECT_EQ(pa.pixels, pb.pixels);
    for (double v : pa.pixels) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(EdgeMap, ConstantImageHasNoEdges) {
  const auto e = mf::edge_map(mf::GrayImage(10, 10, 0.4), 50);
  for (double v : e.pixels) EXPECT_EQ(v, 0.0);
}

TEST(EdgeMap, VerticalStepMarksTwoColumns) {
  const int c = 6;
  mf::GrayImage img(12, 9, 0.0);
  for (int y = 0; y < 9; ++y) {
    for (int x = c; x < 12; ++x) img.at(x, y) = 1.0;
  }
  const auto e = mf::edge_map(img, 50);
  for (int y = 1; y < 8; ++y) {
    for (int x = 0; x < 12; ++x) {
      EXPECT_EQ(e.at(x, y), (x == c - 1 || x == c) ? 1.0 : 0.0) << x << "," << y;
    }
  }
}

TEST(EdgeMap, Percentile100SelectsNothing) {
  mf::GrayImage img(8, 8, 0.0);
  for (int y = 0; y < 8; ++y) img.at(4, y) = 1.0;
  for (double v : mf::edge_map(img, 100).pixels) EXPECT_EQ(v, 0.0);
}

TEST(EdgeMap, TooSmall) {
  try {
    mf::edge_map(mf::GrayImage(2, 5), 50);
    FAIL();
  } catch (const mf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImageTooSmall);
  }
}

TEST(Sobel, BorderIsZero) {
  mf::Rng rng(5);
  mf::GrayImage img(7, 6);
  for (auto& p : img.pixels) p = rng.uniform();
  const auto m = mf::sobel_magnitude(img);
  for (int x = 0; x < 7; ++x) {
    EXPECT_EQ(m.at(x, 0), 0.0);
    EXPECT_EQ(m.at(x, 5), 0.0);
  }
  for (int y = 0; y < 6; ++y) {
    EXPECT_EQ(m.at(0, y), 0.0);
    EXPECT_EQ(m.at(6, y), 0.0);
  }
}

TEST(HeadTemplate, ShapeAndAspect) {
  const auto t = mf::head_template(64);
  EXPECT_EQ(t.width, 64);
  EXPECT_EQ(t.height, 83);
  EXPECT_FALSE(t.offsets.empty());
  for (auto [dx, dy] : t.offsets) {
    EXPECT_GE(dx, 0);
    EXPECT_LT(dx, 64);
    EXPECT_GE(dy, 0);
    EXPECT_LT(dy, 83);
  }
  // A thin ring: far fewer pixels than the ellipse area.
  EXPECT_LT(t.offsets.size(), 64u * 83u / 4u);
}

TEST(Detect, BlankImageHasNoFaces) { EXPECT_TRUE(mf::detect_faces(mf::GrayImage(128, 128, 1.0)).empty()); }

TEST(Detect, SingleEllipse) {
  const auto img = filled_ellipses(128, 128, {{64, 64, 40, 52}});
  const auto boxes = mf::detect_faces(img);
  ASSERT_EQ(boxes.size(), 1u);
  const double cx = boxes[0].x + boxes[0].w / 2.0;
  const double cy = boxes[0].y + boxes[0].h / 2.0;
  EXPECT_LE(std::hypot(cx - 64, cy - 64), 4.0);
  EXPECT_EQ(boxes, mftest::detect_faces_exhaustive(img, {}));
}

TEST(Detect, TwoSeparatedEllipses) {
  const auto img = filled_ellipses(160, 100, {{40, 50, 40, 52}, {120, 50, 40, 52}});
  const auto boxes = mf::detect_faces(img);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(mf::intersection_over_union(boxes[0], boxes[1]), 0.0);
  EXPECT_EQ(boxes, mftest::detect_faces_exhaustive(img, {}));
}

TEST(Detect, ImageTooSmall) {
  try {
    mf::detect_faces(mf::GrayImage(30, 30));
    FAIL();
  } catch (const mf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImageTooSmall);
  }
}

TEST(Detect, RejectsBadParams) {
  mf::DetectorParams p;
  p.scales = {50, 40};
  EXPECT_THROW(mf::detect_faces(mf::GrayImage(100, 100), p), mf::Error);
  p.scales = {};
  EXPECT_THROW(mf::detect_faces(mf::GrayImage(100, 100), p), mf::Error);
}

TEST(Detect, MatchesExhaustiveOracleOnRandomScenes) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto img = mftest::random_scene(seed, 140);
    mf::DetectorParams params;
    const auto boxes = mf::detect_faces(img, params);
    EXPECT_EQ(boxes, mftest::detect_faces_exhaustive(img, params)) << "seed " << seed;
    for (const auto& b : boxes) {
      EXPECT_GE(b.x, 0);
      EXPECT_GE(b.y, 0);
      EXPECT_LE(b.x + b.w, img.width);
      EXPECT_LE(b.y + b.h, img.height);
      EXPECT_GE(b.score, params.score_threshold);
      EXPECT_GE(b.w, 16);
      EXPECT_GE(b.h, 16);
    }
  }
}

TEST(Detect, LargestFacePicksArea) {
  std::vector<mf::FaceBox> boxes{{0, 0, 40, 52, 0.9}, {10, 10, 58, 75, 0.4}, {50, 50, 46, 60, 0.8}};
  EXPECT_EQ(mf::largest_face(boxes).w, 58);
  try {
    mf::largest_face({});
    FAIL();
  } catch (const mf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoFaceDetected);
  }
}

TEST(Iou, KnownValues) {
  mf::FaceBox a{0, 0, 10, 10, 0};
  mf::FaceBox b{5, 0, 10, 10, 0};
  EXPECT_DOUBLE_EQ(mf::intersection_over_union(a, b), 50.0 / 150.0);
  EXPECT_DOUBLE_EQ(mf::intersection_over_union(a, a), 1.0);
  EXPECT_DOUBLE_EQ(mf::intersection_over_union(a, {10, 0, 5, 5, 0}), 0.0);
}

TEST(Crop, FullSizeBoxIsIdentity) {
  mf::Rng rng(8);
  mf::GrayImage img(80, 70);
  for (auto& p : img.pixels) p = rng.uniform();
  const auto chip = mf::crop_normalize(img, {5, 3, 64, 64, 1});
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) EXPECT_DOUBLE_EQ(chip.pixels[y * 64 + x], img.at(x + 5, y + 3));
  }
}

TEST(Crop, BilinearCentreOfCheckerboard) {
  mf::GrayImage img(2, 2);
  img.pixels = {0, 1, 1, 0};
  EXPECT_DOUBLE_EQ(mf::sample_bilinear(img, 0.5, 0.5), 0.5);
}

TEST(Crop, BoxOutsideImage) {
  try {
    mf::crop_normalize(mf::GrayImage(50, 50), {30, 30, 40, 40, 1});
    FAIL();
  } catch (const mf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoxOutOfBounds);
  }
}

TEST(Crop, ContrastNormalisation) {
  mf::FaceChip chip;
  for (int i = 0; i < mf::kChipSize; ++i) chip.pixels[i] = (i % 7) / 7.0;
  const auto n = mf::normalize_contrast(chip);
  double sum = 0, sq = 0;
  for (double v : n.pixels) {
    sum += v;
    sq += v * v;
  }
  EXPECT_NEAR(sum, 0.0, 1e-9);
  EXPECT_NEAR(sq, 1.0, 1e-12);
  EXPECT_TRUE(n.zero_mean_unit_norm);
  EXPECT_FALSE(chip.zero_mean_unit_norm);
}

TEST(Synthetic, Deterministic) {
  EXPECT_EQ(mf::generate_synthetic_identity(42, 4), mf::generate_synthetic_identity(42, 4));
}

TEST(Synthetic, NeedsThreeVariations) {
  try {
    mf::generate_synthetic_identity(1, 2);
    FAIL();
  } catch (const mf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewVariations);
  }
}

TEST(Synthetic, SeedsChangeGeometry) {
  for (std::uint64_t s = 1; s < 40; ++s) EXPECT_NE(mf::draw_face_geometry(s), mf::draw_face_geometry(s + 1));
}

TEST(Synthetic, EveryVariationHasAFace) {
  for (int i = 0; i < 20; ++i) {
    for (const auto& img : mf::generate_synthetic_identity(mf::identity_seed(7, i), 5)) {
      EXPECT_GE(mf::detect_faces(mf::preprocess(img)).size(), 1u) << "identity " << i;
    }
  }
}

}  // namespace
