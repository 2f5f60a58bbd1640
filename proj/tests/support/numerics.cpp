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

#include "numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "mfhajj/random.hpp"

namespace mftest {

DenseComparison compare_with_dense(const std::vector<std::vector<double>>& samples, const mf::EigenModel& model) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto d = static_cast<Eigen::Index>(samples.front().size());
  Eigen::MatrixXd x(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) x(i, j) = samples[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd mean = x.rowwise().mean();
  const Eigen::MatrixXd centered = x.colwise() - mean;
  const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  // Eigen returns ascending order.
  const Eigen::VectorXd values = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

  DenseComparison out;
  for (Eigen::Index i = 0; i < d; ++i) {
    out.mean_max_error = std::max(out.mean_max_error, std::abs(mean(i) - model.mean[static_cast<std::size_t>(i)]));
  }
  const int k = model.k;
  for (int j = 0; j < k; ++j) {
    const double dense = values(j);
    out.max_eigenvalue_rel_error =
        std::max(out.max_eigenvalue_rel_error, std::abs(model.eigenvalues[static_cast<std::size_t>(j)] - dense) / dense);
  }
  if (k > 0) {
    Eigen::MatrixXd b(d, k);
    for (int j = 0; j < k; ++j) {
      const auto col = model.component(j);
      for (Eigen::Index i = 0; i < d; ++i) b(i, j) = col[static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXd q = vectors.leftCols(k);
    // sin of the largest principal angle = ||(I - Q Q^T) B||_2 for orthonormal B.
    const Eigen::MatrixXd residual = b - q * (q.transpose() * b);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
    const double s = std::min(1.0, svd.singularValues()(0));
    out.max_principal_angle = std::asin(s);
  }
  const double trace = cov.trace();
  double retained = 0;
  for (int j = 0; j < k; ++j) retained += model.eigenvalues[static_cast<std::size_t>(j)];
  out.variance_rel_error = trace > 0 ? std::abs(retained - trace) / trace : 0.0;
  return out;
}

std::vector<std::vector<double>> random_samples(std::uint64_t seed, int count, int dim) {
  mf::Rng rng(seed);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(count), std::vector<double>(static_cast<std::size_t>(dim)));
  for (auto& s : out) {
    for (auto& v : s) v = rng.uniform();
  }
  return out;
}

std::vector<double> downscale_to_8x8(const std::vector<double>& chip) {
  std::vector<double> out(64, 0.0);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) out[static_cast<std::size_t>((y / 8) * 8 + x / 8)] += chip[static_cast<std::size_t>(y * 64 + x)] / 64.0;
  }
  return out;
}

std::vector<double> reconstruction_rms_by_k(const mf::EigenModel& model, const std::vector<double>& sample) {
  std::vector<double> out;
  for (int k = 1; k <= model.k; ++k) {
    mf::EigenModel truncated = model;
    truncated.k = k;
    truncated.basis.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(model.dim));
    truncated.eigenvalues.resize(static_cast<std::size_t>(k));
    const auto rec = mf::reconstruct_raw(truncated, mf::embed(truncated, sample));
    double sq = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) sq += (rec[i] - sample[i]) * (rec[i] - sample[i]);
    out.push_back(std::sqrt(sq / static_cast<double>(sample.size())));
  }
  return out;
}

}  // namespace mftest
