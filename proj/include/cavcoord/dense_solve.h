// Copyright 2026 The cavcoord Authors
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

#ifndef CAVCOORD_DENSE_SOLVE_H_
#define CAVCOORD_DENSE_SOLVE_H_

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

namespace cavcoord {

template <std::size_t N>
using DenseMatrix = std::array<std::array<double, N>, N>;

template <std::size_t N>
using DenseVector = std::array<double, N>;

// Gaussian elimination with partial (row) pivoting for small fixed-size
// systems. Returns nullopt when a pivot vanishes relative to the largest
// matrix entry.
template <std::size_t N>
std::optional<DenseVector<N>> SolveDense(DenseMatrix<N> a, DenseVector<N> b) {
  double scale = 0.0;
  for (const auto& row : a) {
    for (double x : row) scale = std::max(scale, std::abs(x));
  }
  if (scale == 0.0) return std::nullopt;
  const double tiny = scale * 1e-14;

  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= tiny) return std::nullopt;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }

  DenseVector<N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double sum = b[i];
    for (std::size_t c = i + 1; c < N; ++c) sum -= a[i][c] * x[c];
    x[i] = sum / a[i][i];
  }
  return x;
}

}  // namespace cavcoord

#endif  // CAVCOORD_DENSE_SOLVE_H_
