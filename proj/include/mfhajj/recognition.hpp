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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mfhajj/vision.hpp"

namespace mf {

/// Trained eigenface projection. `basis` is column-major (dim x k): column j
/// is the j-th principal direction, unit length, paired with eigenvalues[j].
struct EigenModel {
  int dim = 0;
  int k = 0;
  std::vector<double> mean;
  std::vector<double> basis;
  std::vector<double> eigenvalues;  // descending, non-negative
  std::uint64_t version = 0;

  std::span<const double> component(int j) const {
    return {basis.data() + static_cast<std::size_t>(j) * dim, static_cast<std::size_t>(dim)};
  }
};

struct Embedding {
  std::vector<double> coords;
  std::uint64_t model_version = 0;

  bool operator==(const Embedding&) const = default;
};

struct TrainOptions {
  std::uint64_t version = 1;
  double jacobi_tolerance = 1e-10;
  int jacobi_max_sweeps = 100;
};

/// Snapshot-method PCA: eigendecomposes the N x N Gram matrix A^T A / N of
/// the centred samples and maps the eigenvectors back to sample space.
/// Requires N >= 2 and 1 <= k <= min(dim, N - 1). Components whose eigenvalue
/// falls below 1e-12 of the largest (1e-12 absolute when the largest is 0)
/// are dropped, so the returned model may have fewer than k components.
EigenModel train_eigenmodel(std::span<const std::vector<double>> samples, int k,
                            const TrainOptions& options = {});
EigenModel train_eigenmodel(std::span<const FaceChip> chips, int k, const TrainOptions& options = {});

Embedding embed(const EigenModel& model, std::span<const double> sample);
Embedding embed(const EigenModel& model, const FaceChip& chip);

/// mean + basis * coords, no clamping.
std::vector<double> reconstruct_raw(const EigenModel& model, const Embedding& embedding);
/// As reconstruct_raw, clamped to [0,1]. Requires a 4096-d model.
FaceChip reconstruct(const EigenModel& model, const Embedding& embedding);

double distance(const Embedding& a, const Embedding& b);

/// max |B^T B - I| over all entries.
double orthonormality_error(const EigenModel& model);

struct MatchResult {
  std::string person_id;
  double distance = 0.0;
  int rank = 0;

  bool operator==(const MatchResult&) const = default;
};

/// Enrolled embeddings keyed by person id. Immutable value: enroll returns
/// a new gallery.
class Gallery {
 public:
  Gallery() = default;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t model_version() const { return model_version_; }
  bool contains(const std::string& person_id) const { return entries_.contains(person_id); }
  const std::vector<Embedding>& embeddings(const std::string& person_id) const;
  const std::map<std::string, std::vector<Embedding>>& entries() const { return entries_; }

  /// Adds a person with precomputed embeddings (>= 3, all from one model).
  Gallery with_person(const std::string& person_id, std::vector<Embedding> embeddings) const;

  /// Smallest distance from the probe to any of the person's embeddings.
  double person_distance(const std::string& person_id, const Embedding& probe) const;

 private:
  std::map<std::string, std::vector<Embedding>> entries_;
  std::uint64_t model_version_ = 0;
};

Gallery enroll(const Gallery& gallery, const std::string& person_id, std::span<const FaceChip> chips,
               const EigenModel& model);

/// Persons whose min-distance to the probe is <= threshold, ascending by
/// distance then person id, truncated to top_n.
std::vector<MatchResult> identify(const Gallery& gallery, const Embedding& probe, int top_n,
                                  double threshold);

// Model file: "MFEM", u64 model version, u32 dim, u32 k, mean (dim f64),
// basis (dim*k f64, column-major), eigenvalues (k f64). Little-endian.
std::vector<std::uint8_t> serialize_model(const EigenModel& model);
EigenModel deserialize_model(std::span<const std::uint8_t> bytes);
void save_model(const std::filesystem::path& path, const EigenModel& model);
EigenModel load_model(const std::filesystem::path& path);

}  // namespace mf
