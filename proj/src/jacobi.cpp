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

#include "mfhajj/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mf {

namespace {

double off_diagonal_norm(const SymmetricMatrix& a) {
  double sum = 0.0;
  for (std::size_t p = 0; p < a.n; ++p) {
    for (std::size_t q = p + 1; q < a.n; ++q) sum += a(p, q) * a(p, q);
  }
  return std::sqrt(2.0 * sum);
}

double frobenius_norm(const SymmetricMatrix& a) {
  double sum = 0.0;
  for (double v : a.values) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace

EigenDecomposition jacobi_eigen(SymmetricMatrix a, const JacobiOptions& options) {
  const std::size_t n = a.n;
  // v is row-major here: v[r * n + c]; column c is the c-th eigenvector.
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  EigenDecomposition result;
  result.n = n;
  const double limit = options.tolerance * frobenius_norm(a);
  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > limit && sweep < options.max_sweeps) {
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          a(r, p) = a(p, r) = new_rp;
          a(r, q) = a(q, r) = new_rq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v[r * n + p];
          const double vrq = v[r * n + q];
          v[r * n + p] = vrp - s * (vrq + tau * vrp);
          v[r * n + q] = vrq + s * (vrp - tau * vrq);
        }
      }
    }
    off = off_diagonal_norm(a);
  }
  result.sweeps = sweep;
  result.off_norm = off;
  result.converged = off <= limit;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    result.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t r = 0; r < n; ++r) result.eigenvectors[j * n + r] = v[r * n + order[j]];
  }
  return result;
}

}  // namespace mf
