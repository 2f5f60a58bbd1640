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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "../support/fixtures.hpp"
#include "../support/numerics.hpp"
#include "mfhajj/error.hpp"
#include "mfhajj/jacobi.hpp"
#include "mfhajj/random.hpp"
#include "mfhajj/recognition.hpp"

namespace {

using mf::ErrorCode;

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const mf::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

mf::Embedding emb(std::vector<double> coords, std::uint64_t version = 1) { return {std::move(coords), version}; }

TEST(Jacobi, DiagonalisesKnownMatrix) {
  mf::SymmetricMatrix a(2);
  a(0, 0) = 2;
  a(0, 1) = a(1, 0) = 1;
  a(1, 1) = 2;
  const auto e = mf::jacobi_eigen(a);
  ASSERT_TRUE(e.converged);
  EXPECT_NEAR(e.eigenvalues[0], 3.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vector(0)[0]), std::sqrt(0.5), 1e-12);
}

TEST(Jacobi, ReconstructsRandomSymmetric) {
  mf::Rng rng(17);
  const std::size_t n = 12;
  mf::SymmetricMatrix a(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) a(r, c) = a(c, r) = rng.uniform(-1, 1);
  }
  const auto e = mf::jacobi_eigen(a);
  ASSERT_TRUE(e.converged);
  EXPECT_TRUE(std::is_sorted(e.eigenvalues.rbegin(), e.eigenvalues.rend()));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double v = 0;
      for (std::size_t j = 0; j < n; ++j) v += e.vector(j)[r] * e.eigenvalues[j] * e.vector(j)[c];
      EXPECT_NEAR(v, a(r, c), 1e-9);
    }
  }
}

TEST(Train, IdenticalChipsGiveEmptyModel) {
  std::vector<std::vector<double>> samples(5, std::vector<double>(16, 0.25));
  const auto m = mf::train_eigenmodel(samples, 3);
  EXPECT_EQ(m.k, 0);
  EXPECT_EQ(m.mean, samples[0]);
  EXPECT_TRUE(mf::embed(m, samples[0]).coords.empty());
}

TEST(Train, TwoSamplesClosedForm) {
  mf::Rng rng(4);
  std::vector<std::vector<double>> s(2, std::vector<double>(64));
  for (auto& v : s) {
    for (auto& x : v) x = rng.uniform();
  }
  const auto m = mf::train_eigenmodel(s, 1);
  ASSERT_EQ(m.k, 1);
  double norm2 = 0;
  for (int i = 0; i < 64; ++i) norm2 += (s[0][i] - s[1][i]) * (s[0][i] - s[1][i]);
  // Centred samples are +/- (x1 - x2)/2, so the covariance (1/2) sum a a^T has
  // the single nonzero eigenvalue ||x1 - x2||^2 / 4.
  EXPECT_NEAR(m.eigenvalues[0], norm2 / 4.0, 1e-12 * norm2);
  const double inv = 1.0 / std::sqrt(norm2);
  double cosine = 0;
  for (int i = 0; i < 64; ++i) cosine += m.component(0)[i] * (s[0][i] - s[1][i]) * inv;
  EXPECT_NEAR(std::abs(cosine), 1.0, 1e-12);
  EXPECT_EQ(mftest::compare_with_dense(s, m).max_eigenvalue_rel_error < 1e-10, true);
}

TEST(Train, Preconditions) {
  std::vector<std::vector<double>> one(1, std::vector<double>(4, 0.0));
  EXPECT_EQ(error_of([&] { mf::train_eigenmodel(one, 1); }), ErrorCode::TooFewChips);
  const auto s = mftest::random_samples(1, 5, 8);
  EXPECT_EQ(error_of([&] { mf::train_eigenmodel(s, 0); }), ErrorCode::KOutOfRange);
  EXPECT_EQ(error_of([&] { mf::train_eigenmodel(s, 5); }), ErrorCode::KOutOfRange);
  EXPECT_NO_THROW(mf::train_eigenmodel(s, 4));
}

TEST(Train, MatchesDenseOracleOn8x8Chips) {
  // 10 random 4096-d chips, downscaled to 8x8 so a dense solver is cheap.
  const auto chips = mftest::random_samples(21, 10, mf::kChipSize);
  std::vector<std::vector<double>> small;
  for (const auto& c : chips) small.push_back(mftest::downscale_to_8x8(c));
  for (int k : {1, 4, 9}) {
    const auto m = mf::train_eigenmodel(small, k);
    ASSERT_EQ(m.k, k);
    EXPECT_LT(mf::orthonormality_error(m), 1e-6);
    const auto cmp = mftest::compare_with_dense(small, m);
    EXPECT_LT(cmp.max_eigenvalue_rel_error, 1e-8) << k;
    EXPECT_LT(cmp.max_principal_angle, 1e-6) << k;
    EXPECT_LT(cmp.mean_max_error, 1e-15);
    if (k == 9) {
      EXPECT_LT(cmp.variance_rel_error, 1e-8);
    }
  }
}

TEST(Train, FullSizeChipsOrthonormal) {
  const auto chips = mftest::random_samples(22, 10, mf::kChipSize);
  const auto m = mf::train_eigenmodel(chips, 4);
  EXPECT_EQ(m.k, 4);
  EXPECT_LT(mf::orthonormality_error(m), 1e-6);
  EXPECT_TRUE(std::is_sorted(m.eigenvalues.rbegin(), m.eigenvalues.rend()));
  // Sign convention: the largest-magnitude entry of each column is positive.
  for (int j = 0; j < m.k; ++j) {
    const auto col = m.component(j);
    const auto it = std::max_element(col.begin(), col.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    EXPECT_GT(*it, 0.0);
  }
}

TEST(Train, RetainedVarianceNeverExceedsTrace) {
  const auto s = mftest::random_samples(5, 12, 64);
  for (int k = 1; k <= 11; ++k) {
    const auto m = mf::train_eigenmodel(s, k);
    const auto cmp = mftest::compare_with_dense(s, m);
    double retained = 0;
    for (double v : m.eigenvalues) retained += v;
    EXPECT_LE(retained, (1 + 1e-12) * (retained / (1 - cmp.variance_rel_error + 1e-300)));
    if (k == 11) {
      EXPECT_LT(cmp.variance_rel_error, 1e-8);
    }
  }
}

TEST(Embed, MeanAndBasisColumns) {
  const auto s = mftest::random_samples(6, 8, 32);
  const auto m = mf::train_eigenmodel(s, 5);
  for (double c : mf::embed(m, m.mean).coords) EXPECT_NEAR(c, 0.0, 1e-12);
  for (int j = 0; j < m.k; ++j) {
    std::vector<double> x = m.mean;
    for (int i = 0; i < m.dim; ++i) x[i] += m.component(j)[i];
    const auto e = mf::embed(m, x);
    for (int i = 0; i < m.k; ++i) EXPECT_NEAR(e.coords[i], i == j ? 1.0 : 0.0, 1e-9);
  }
}

TEST(Embed, EqualsNaiveDotProducts) {
  const auto s = mftest::random_samples(7, 9, 48);
  const auto m = mf::train_eigenmodel(s, 6);
  mf::Rng rng(70);
  std::vector<double> probe(48);
  for (auto& v : probe) v = rng.uniform();
  const auto e = mf::embed(m, probe);
  EXPECT_EQ(e.model_version, m.version);
  for (int j = 0; j < m.k; ++j) {
    long double acc = 0;
    for (int i = 0; i < 48; ++i) acc += static_cast<long double>(m.basis[j * 48 + i]) * (probe[i] - m.mean[i]);
    EXPECT_NEAR(e.coords[j], static_cast<double>(acc), 1e-12);
  }
}

TEST(Reconstruct, ZeroEmbeddingIsMean) {
  const auto chips = mftest::random_samples(8, 4, mf::kChipSize);
  const auto m = mf::train_eigenmodel(chips, 3);
  const auto face = mf::reconstruct(m, emb(std::vector<double>(3, 0.0), m.version));
  for (int i = 0; i < mf::kChipSize; ++i) EXPECT_DOUBLE_EQ(face.pixels[i], std::clamp(m.mean[i], 0.0, 1.0));
}

TEST(Reconstruct, FullRankIsExactForTrainingChips) {
  const auto chips = mftest::random_samples(9, 6, mf::kChipSize);
  const auto m = mf::train_eigenmodel(chips, 5);
  for (const auto& c : chips) {
    const auto rec = mf::reconstruct_raw(m, mf::embed(m, c));
    double sq = 0;
    for (int i = 0; i < mf::kChipSize; ++i) sq += (rec[i] - c[i]) * (rec[i] - c[i]);
    EXPECT_LT(std::sqrt(sq / mf::kChipSize), 1e-6);
  }
}

TEST(Reconstruct, RmsNonIncreasingInK) {
  const auto chips = mftest::random_samples(10, 15, 256);
  const auto m = mf::train_eigenmodel(chips, 14);
  mf::Rng rng(99);
  std::vector<double> held_out(256);
  for (auto& v : held_out) v = rng.uniform();
  for (const auto& sample : {chips[0], chips[7], held_out}) {
    const auto rms = mftest::reconstruction_rms_by_k(m, sample);
    for (std::size_t i = 1; i < rms.size(); ++i) EXPECT_LE(rms[i], rms[i - 1] + 1e-12) << i;
  }
}

TEST(Reconstruct, VersionMismatch) {
  const auto chips = mftest::random_samples(11, 4, mf::kChipSize);
  const auto m = mf::train_eigenmodel(chips, 2);
  EXPECT_EQ(error_of([&] { mf::reconstruct(m, emb({0, 0}, m.version + 1)); }), ErrorCode::ModelVersionMismatch);
}

TEST(Distance, Basics) {
  EXPECT_DOUBLE_EQ(mf::distance(emb({0, 0}), emb({3, 4})), 5.0);
  EXPECT_DOUBLE_EQ(mf::distance(emb({1, 2}), emb({1, 2})), 0.0);
  EXPECT_DOUBLE_EQ(mf::distance(emb({1, 7}), emb({-2, 3})), mf::distance(emb({-2, 3}), emb({1, 7})));
  EXPECT_EQ(error_of([] { mf::distance(emb({0}, 1), emb({0}, 2)); }), ErrorCode::ModelVersionMismatch);
}

mf::Gallery hand_gallery() {
  mf::Gallery g;
  // Repeats pad each person to the enrollment minimum without moving any
  // person-distance.
  g = g.with_person("p1", {emb({0, 0}), emb({1, 0}), emb({1, 0})});
  g = g.with_person("p2", {emb({5, 5}), emb({5, 5}), emb({5, 5})});
  g = g.with_person("p3", {emb({0, 3}), emb({0, 3}), emb({0, 3})});
  return g;
}

TEST(Identify, HandPlacedExample) {
  const auto r = mf::identify(hand_gallery(), emb({1, 1}), 2, 3.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], (mf::MatchResult{"p1", 1.0, 1}));
  // |(1,1) - (0,3)| = sqrt(5).
  EXPECT_EQ(r[1], (mf::MatchResult{"p3", std::sqrt(5.0), 2}));
}

TEST(Identify, ExactProbeAndThreshold) {
  const auto g = hand_gallery();
  const auto r = mf::identify(g, emb({5, 5}), 5, 100.0);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].person_id, "p2");
  EXPECT_EQ(r[0].distance, 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i].rank, static_cast<int>(i + 1));
  EXPECT_TRUE(mf::identify(g, emb({20, 20}), 5, 1.0).empty());
}

TEST(Identify, Errors) {
  EXPECT_EQ(error_of([] { mf::identify(mf::Gallery{}, emb({0}), 1, 1.0); }), ErrorCode::EmptyGallery);
  const auto g = hand_gallery();
  EXPECT_EQ(error_of([&] { mf::identify(g, emb({0, 0}, 9), 1, 1.0); }), ErrorCode::ModelVersionMismatch);
  EXPECT_EQ(error_of([&] { mf::identify(g, emb({0, 0}), 0, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(error_of([&] { mf::identify(g, emb({0, 0}), 1, 0.0); }), ErrorCode::InvalidArgument);
}

TEST(Identify, DegenerateModel) {
  mf::Gallery g;
  g = g.with_person("p", {emb({}), emb({}), emb({})});
  EXPECT_EQ(error_of([&] { mf::identify(g, emb({}), 1, 1.0); }), ErrorCode::DegenerateModel);
}

TEST(Identify, TiesBrokenByPersonIdNotInsertionOrder) {
  mf::Gallery a;
  a = a.with_person("zed", {emb({1, 0}), emb({1, 0}), emb({1, 0})});
  a = a.with_person("amy", {emb({-1, 0}), emb({-1, 0}), emb({-1, 0})});
  mf::Gallery b;
  b = b.with_person("amy", {emb({-1, 0}), emb({-1, 0}), emb({-1, 0})});
  b = b.with_person("zed", {emb({1, 0}), emb({1, 0}), emb({1, 0})});
  const auto ra = mf::identify(a, emb({0, 0}), 2, 5.0);
  EXPECT_EQ(ra, mf::identify(b, emb({0, 0}), 2, 5.0));
  EXPECT_EQ(ra[0].person_id, "amy");
}

TEST(Identify, MatchesBruteForce) {
  mf::Rng rng(31);
  mf::Gallery g;
  std::map<std::string, std::vector<mf::Embedding>> plain;
  for (int p = 0; p < 40; ++p) {
    std::vector<mf::Embedding> es;
    for (int i = 0; i < 3 + p % 3; ++i) es.push_back(emb({rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)}));
    const std::string id = "person" + std::to_string(p);
    plain[id] = es;
    g = g.with_person(id, es);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto probe = emb({rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const double theta = rng.uniform(0.5, 6);
    std::vector<std::pair<double, std::string>> expect;
    for (const auto& [id, es] : plain) {
      double best = 1e300;
      for (const auto& e : es) best = std::min(best, mf::distance(e, probe));
      if (best <= theta) expect.emplace_back(best, id);
    }
    std::sort(expect.begin(), expect.end());
    const auto got = mf::identify(g, probe, 7, theta);
    ASSERT_EQ(got.size(), std::min<std::size_t>(7, expect.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].person_id, expect[i].second);
      EXPECT_DOUBLE_EQ(got[i].distance, expect[i].first);
    }
  }
}

TEST(Gallery, EnrollRules) {
  const auto chips = mftest::random_samples(12, 6, mf::kChipSize);
  const auto m = mf::train_eigenmodel(chips, 4);
  std::vector<mf::FaceChip> faces(3);
  for (int i = 0; i < 3; ++i) faces[i].pixels = chips[i];
  EXPECT_EQ(error_of([&] { mf::enroll({}, "a", std::span(faces.data(), 2), m); }), ErrorCode::InsufficientGallery);
  const auto g = mf::enroll({}, "a", faces, m);
  EXPECT_EQ(g.embeddings("a").size(), 3u);
  EXPECT_EQ(g.model_version(), m.version);
  EXPECT_EQ(error_of([&] { mf::enroll(g, "a", faces, m); }), ErrorCode::DuplicatePerson);
}

TEST(Gallery, MoreEmbeddingsNeverIncreaseDistance) {
  mf::Rng rng(2);
  std::vector<mf::Embedding> es;
  for (int i = 0; i < 3; ++i) es.push_back(emb({rng.uniform(), rng.uniform()}));
  const auto probe = emb({0.5, 0.5});
  double last = mf::Gallery{}.with_person("p", es).person_distance("p", probe);
  for (int i = 0; i < 10; ++i) {
    es.push_back(emb({rng.uniform(), rng.uniform()}));
    const double d = mf::Gallery{}.with_person("p", es).person_distance("p", probe);
    EXPECT_LE(d, last);
    last = d;
  }
}

TEST(ModelFile, RoundTripAndLayout) {
  const auto chips = mftest::random_samples(13, 5, 10);
  mf::TrainOptions opts;
  opts.version = 0x0102030405060708ull;
  const auto m = mf::train_eigenmodel(chips, 3, opts);
  const auto bytes = mf::serialize_model(m);
  ASSERT_GE(bytes.size(), 20u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "MFEM");
  EXPECT_EQ(bytes[4], 0x08);  // little-endian version
  EXPECT_EQ(bytes[11], 0x01);
  EXPECT_EQ(bytes.size(), 4 + 8 + 4 + 4 + 8 * (10 + 30 + 3));
  const auto back = mf::deserialize_model(bytes);
  EXPECT_EQ(back.version, m.version);
  EXPECT_EQ(back.dim, m.dim);
  EXPECT_EQ(back.k, m.k);
  EXPECT_EQ(back.mean, m.mean);
  EXPECT_EQ(back.basis, m.basis);
  EXPECT_EQ(back.eigenvalues, m.eigenvalues);
  EXPECT_EQ(mf::serialize_model(back), bytes);

  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_EQ(error_of([&] { mf::deserialize_model(truncated); }), ErrorCode::ModelFormat);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(error_of([&] { mf::deserialize_model(bad_magic); }), ErrorCode::ModelFormat);

  mftest::TempDir dir;
  mf::save_model(dir / "m.mfem", m);
  EXPECT_EQ(mf::serialize_model(mf::load_model(dir / "m.mfem")), bytes);
}

TEST(EndToEnd, HeldOutSyntheticProbeRanksFirst) {
  const auto model = mftest::synthetic_model(7, 12, 3, 20);
  mf::Gallery g;
  std::vector<mf::FaceChip> probes;
  for (int i = 0; i < 12; ++i) {
    std::vector<mf::FaceChip> chips;
    for (const auto& img : mf::generate_synthetic_identity(mf::identity_seed(7, i), 4)) {
      const auto gray = mf::preprocess(img);
      chips.push_back(mf::crop_normalize(gray, mf::largest_face(mf::detect_faces(gray))));
    }
    probes.push_back(chips.back());
    chips.pop_back();
    g = mf::enroll(g, "id" + std::to_string(i), chips, model);
  }
  int correct = 0;
  for (int i = 0; i < 12; ++i) {
    const auto r = mf::identify(g, mf::embed(model, probes[i]), 1, 1e9);
    correct += r[0].person_id == "id" + std::to_string(i);
  }
  EXPECT_GE(correct, 10);
}

}  // namespace
