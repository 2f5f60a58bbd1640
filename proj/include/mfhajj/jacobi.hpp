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

#include <cstddef>
#include <vector>

namespace mf {

/// Dense symmetric n x n matrix, row-major.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  explicit SymmetricMatrix(std::size_t size = 0) : n(size), values(size * size, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return values[r * n + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * n + c]; }
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm is at most tolerance * ||A||_F.
  double tolerance = 1e-10;
  int max_sweeps = 100;
};

struct EigenDecomposition {
  std::size_t n = 0;
  std::vector<double> eigenvalues;   // descending
  std::vector<double> eigenvectors;  // n x n, column j pairs with eigenvalues[j], column-major
  int sweeps = 0;
  double off_norm = 0.0;             // at termination
  bool converged = false;

  const double* vector(std::size_t j) const { return eigenvectors.data() + j * n; }
};

/// Cyclic (row-by-row) Jacobi eigensolver.
EigenDecomposition jacobi_eigen(SymmetricMatrix a, const JacobiOptions& options = {});

}  // namespace mf
