// core/include/dialogic/matrix.h

// Copyright 2026  The Dialogic Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIALOGIC_MATRIX_H_
#define DIALOGIC_MATRIX_H_

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace dialogic {

using Vec = std::vector<double>;

/// Dense row-major matrix. Just enough linear algebra for the models in this
/// toolkit; everything stays double precision and single threaded.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  std::span<double> row(int r) {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// y = A x
inline Vec matvec(const Mat& a, std::span<const double> x) {
  assert(static_cast<std::size_t>(a.cols) == x.size());
  Vec y(a.rows, 0.0);
  for (int r = 0; r < a.rows; ++r) y[r] = dot(a.row(r), x);
  return y;
}

/// y += A^T x
inline void add_matvec_transposed(const Mat& a, std::span<const double> x, Vec& y) {
  assert(static_cast<std::size_t>(a.rows) == x.size());
  assert(static_cast<std::size_t>(a.cols) == y.size());
  for (int r = 0; r < a.rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    auto row = a.row(r);
    for (int c = 0; c < a.cols; ++c) y[c] += xr * row[c];
  }
}

/// A += u v^T
inline void add_outer(Mat& a, std::span<const double> u, std::span<const double> v) {
  assert(static_cast<std::size_t>(a.rows) == u.size());
  assert(static_cast<std::size_t>(a.cols) == v.size());
  for (int r = 0; r < a.rows; ++r) {
    auto row = a.row(r);
    const double ur = u[r];
    for (int c = 0; c < a.cols; ++c) row[c] += ur * v[c];
  }
}

/// y += s * x
inline void axpy(double s, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

}  // namespace dialogic

#endif  // DIALOGIC_MATRIX_H_
