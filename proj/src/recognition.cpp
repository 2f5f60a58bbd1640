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

#include "mfhajj/recognition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "mfhajj/error.hpp"
#include "mfhajj/jacobi.hpp"

namespace mf {

namespace {

constexpr double kEigenvalueCutoff = 1e-12;

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void check_version(std::uint64_t expected, std::uint64_t actual) {
  if (expected != actual) {
    throw Error(ErrorCode::ModelVersionMismatch,
                "embedding from model " + std::to_string(actual) + ", expected " + std::to_string(expected));
  }
}

// Makes the largest-magnitude entry of the column positive (first on ties).
void fix_sign(double* column, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(column[i]) > std::abs(column[best])) best = i;
  }
  if (column[best] < 0) {
    for (std::size_t i = 0; i < n; ++i) column[i] = -column[i];
  }
}

}  // namespace

EigenModel train_eigenmodel(std::span<const std::vector<double>> samples, int k, const TrainOptions& options) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::TooFewChips, "training needs at least 2 samples");
  const std::size_t dim = samples.front().size();
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "samples must be non-empty");
  for (const auto& s : samples) {
    if (s.size() != dim) throw Error(ErrorCode::InvalidArgument, "samples differ in dimension");
  }
  const auto k_max = static_cast<int>(std::min(dim, n - 1));
  if (k < 1 || k > k_max) {
    throw Error(ErrorCode::KOutOfRange,
                "k must lie in [1, " + std::to_string(k_max) + "], got " + std::to_string(k));
  }

  EigenModel model;
  model.dim = static_cast<int>(dim);
  model.version = options.version;

  // Running mean stays exact when all samples coincide.
  model.mean.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = 1.0 / static_cast<double>(i + 1);
    for (std::size_t p = 0; p < dim; ++p) model.mean[p] += (samples[i][p] - model.mean[p]) * inv;
  }
  std::vector<double> centered(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < dim; ++p) centered[i * dim + p] = samples[i][p] - model.mean[p];
  }

  SymmetricMatrix gram(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double g = dot(&centered[i * dim], &centered[j * dim], dim) * inv_n;
      gram(i, j) = gram(j, i) = g;
    }
  }
  const EigenDecomposition eig =
      jacobi_eigen(std::move(gram), {options.jacobi_tolerance, options.jacobi_max_sweeps});

  const double largest = std::max(eig.eigenvalues.front(), 0.0);
  const double cutoff = largest > 0.0 ? kEigenvalueCutoff * largest : kEigenvalueCutoff;
  std::size_t usable = 0;
  while (usable < n && eig.eigenvalues[usable] >= cutoff && eig.eigenvalues[usable] > 0.0) ++usable;
  const std::size_t keep = std::min(usable, static_cast<std::size_t>(k));

  model.basis.assign(keep * dim, 0.0);
  for (std::size_t j = 0; j < keep; ++j) {
    const double lambda = eig.eigenvalues[j];
    const double* v = eig.vector(j);
    double* u = &model.basis[j * dim];
    const double scale = 1.0 / std::sqrt(static_cast<double>(n) * lambda);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = v[i] * scale;
      if (w == 0.0) continue;
      const double* a = &centered[i * dim];
      for (std::size_t p = 0; p < dim; ++p) u[p] += w * a[p];
    }
  }
  // Two passes of modified Gram-Schmidt to restore orthonormality lost to rounding.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < keep; ++j) {
      double* u = &model.basis[j * dim];
      for (std::size_t i = 0; i < j; ++i) {
        const double* q = &model.basis[i * dim];
        const double r = dot(q, u, dim);
        for (std::size_t p = 0; p < dim; ++p) u[p] -= r * q[p];
      }
      const double norm = std::sqrt(dot(u, u, dim));
      for (std::size_t p = 0; p < dim; ++p) u[p] /= norm;
    }
  }
  for (std::size_t j = 0; j < keep; ++j) fix_sign(&model.basis[j * dim], dim);

  model.k = static_cast<int>(keep);
  model.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + static_cast<std::ptrdiff_t>(keep));
  return model;
}

EigenModel train_eigenmodel(std::span<const FaceChip> chips, int k, const TrainOptions& options) {
  std::vector<std::vector<double>> samples;
  samples.reserve(chips.size());
  for (const auto& c : chips) samples.push_back(c.pixels);
  return train_eigenmodel(samples, k, options);
}

Embedding embed(const EigenModel& model, std::span<const double> sample) {
  if (sample.size() != static_cast<std::size_t>(model.dim)) {
    throw Error(ErrorCode::InvalidArgument, "sample dimension does not match the model");
  }
  const auto dim = static_cast<std::size_t>(model.dim);
  std::vector<double> centered(dim);
  for (std::size_t p = 0; p < dim; ++p) centered[p] = sample[p] - model.mean[p];
  Embedding e;
  e.model_version = model.version;
  e.coords.resize(static_cast<std::size_t>(model.k));
  for (int j = 0; j < model.k; ++j) {
    e.coords[static_cast<std::size_t>(j)] = dot(model.component(j).data(), centered.data(), dim);
  }
  return e;
}

Embedding embed(const EigenModel& model, const FaceChip& chip) { return embed(model, chip.pixels); }

std::vector<double> reconstruct_raw(const EigenModel& model, const Embedding& embedding) {
  check_version(model.version, embedding.model_version);
  if (embedding.coords.size() != static_cast<std::size_t>(model.k)) {
    throw Error(ErrorCode::InvalidArgument, "embedding length does not match model k");
  }
  std::vector<double> out = model.mean;
  for (int j = 0; j < model.k; ++j) {
    const double c = embedding.coords[static_cast<std::size_t>(j)];
    const auto col = model.component(j);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += c * col[p];
  }
  return out;
}

FaceChip reconstruct(const EigenModel& model, const Embedding& embedding) {
  if (model.dim != kChipSize) throw Error(ErrorCode::InvalidArgument, "model is not a 64x64 face model");
  FaceChip chip;
  chip.pixels = reconstruct_raw(model, embedding);
  for (auto& v : chip.pixels) v = std::clamp(v, 0.0, 1.0);
  return chip;
}

double distance(const Embedding& a, const Embedding& b) {
  check_version(a.model_version, b.model_version);
  if (a.coords.size() != b.coords.size()) {
    throw Error(ErrorCode::InvalidArgument, "embeddings differ in length");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double orthonormality_error(const EigenModel& model) {
  double worst = 0.0;
  const auto dim = static_cast<std::size_t>(model.dim);
  for (int i = 0; i < model.k; ++i) {
    for (int j = i; j < model.k; ++j) {
      const double g = dot(model.component(i).data(), model.component(j).data(), dim);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

const std::vector<Embedding>& Gallery::embeddings(const std::string& person_id) const {
  auto it = entries_.find(person_id);
  if (it == entries_.end()) throw Error(ErrorCode::PersonNotFound, "person " + person_id + " is not enrolled");
  return it->second;
}

Gallery Gallery::with_person(const std::string& person_id, std::vector<Embedding> embeddings) const {
  if (embeddings.size() < static_cast<std::size_t>(kMinImagesPerPerson)) {
    throw Error(ErrorCode::InsufficientGallery,
                "enrollment needs at least " + std::to_string(kMinImagesPerPerson) + " images");
  }
  if (entries_.contains(person_id)) {
    throw Error(ErrorCode::DuplicatePerson, "person " + person_id + " is already enrolled");
  }
  const std::uint64_t version = entries_.empty() ? embeddings.front().model_version : model_version_;
  for (const auto& e : embeddings) check_version(version, e.model_version);
  Gallery next = *this;
  next.model_version_ = version;
  next.entries_.emplace(person_id, std::move(embeddings));
  return next;
}

double Gallery::person_distance(const std::string& person_id, const Embedding& probe) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : embeddings(person_id)) best = std::min(best, distance(e, probe));
  return best;
}

Gallery enroll(const Gallery& gallery, const std::string& person_id, std::span<const FaceChip> chips,
               const EigenModel& model) {
  if (chips.size() < static_cast<std::size_t>(kMinImagesPerPerson)) {
    throw Error(ErrorCode::InsufficientGallery,
                "enrollment needs at least " + std::to_string(kMinImagesPerPerson) + " images");
  }
  if (gallery.contains(person_id)) {
    throw Error(ErrorCode::DuplicatePerson, "person " + person_id + " is already enrolled");
  }
  std::vector<Embedding> embeddings;
  embeddings.reserve(chips.size());
  for (const auto& c : chips) embeddings.push_back(embed(model, c));
  return gallery.with_person(person_id, std::move(embeddings));
}

std::vector<MatchResult> identify(const Gallery& gallery, const Embedding& probe, int top_n, double threshold) {
  if (gallery.empty()) throw Error(ErrorCode::EmptyGallery, "no persons are enrolled");
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  if (top_n < 1) throw Error(ErrorCode::InvalidArgument, "top_n must be >= 1");
  check_version(gallery.model_version(), probe.model_version);
  if (probe.coords.empty()) throw Error(ErrorCode::DegenerateModel, "model has no components");

  std::vector<MatchResult> hits;
  for (const auto& [person, embeddings] : gallery.entries()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : embeddings) best = std::min(best, distance(e, probe));
    if (best <= threshold) hits.push_back({person, best, 0});
  }
  std::sort(hits.begin(), hits.end(), [](const MatchResult& a, const MatchResult& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.person_id < b.person_id;
  });
  if (hits.size() > static_cast<std::size_t>(top_n)) hits.resize(static_cast<std::size_t>(top_n));
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = static_cast<int>(i + 1);
  return hits;
}

// ---- persistence ----

namespace {

constexpr char kMagic[4] = {'M', 'F', 'E', 'M'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

class LeReader {
 public:
  explicit LeReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw Error(ErrorCode::ModelFormat, "model file is truncated");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_model(const EigenModel& model) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_le<std::uint64_t>(out, model.version);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.dim));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.k));
  for (double v : model.mean) put_f64(out, v);
  for (double v : model.basis) put_f64(out, v);
  for (double v : model.eigenvalues) put_f64(out, v);
  return out;
}

EigenModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::ModelFormat, "missing MFEM magic");
  }
  LeReader in(bytes.subspan(4));
  EigenModel m;
  m.version = in.get<std::uint64_t>();
  m.dim = static_cast<int>(in.get<std::uint32_t>());
  m.k = static_cast<int>(in.get<std::uint32_t>());
  if (m.dim <= 0 || m.k < 0 || m.k > m.dim) throw Error(ErrorCode::ModelFormat, "bad model dimensions");
  const auto dim = static_cast<std::size_t>(m.dim);
  const auto k = static_cast<std::size_t>(m.k);
  if (bytes.size() != 4 + 16 + 8 * (dim + dim * k + k)) {
    throw Error(ErrorCode::ModelFormat, "model file length does not match its header");
  }
  m.mean.resize(dim);
  for (auto& v : m.mean) v = in.f64();
  m.basis.resize(dim * k);
  for (auto& v : m.basis) v = in.f64();
  m.eigenvalues.resize(k);
  for (auto& v : m.eigenvalues) v = in.f64();
  return m;
}

void save_model(const std::filesystem::path& path, const EigenModel& model) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write model " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

EigenModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open model " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace mf
