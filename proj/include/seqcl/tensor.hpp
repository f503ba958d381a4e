// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace seqcl {

// Dense row-major matrix of doubles. Vectors are (n, 1) tensors. Training
// runs entirely in double precision so the finite-difference gradient
// checks stay tight.
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) {
    assert(r < rows && c < cols);
    return data[r * cols + c];
  }
  double at(std::size_t r, std::size_t c) const {
    assert(r < rows && c < cols);
    return data[r * cols + c];
  }

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  std::size_t size() const { return data.size(); }

  void fill(double v) { data.assign(data.size(), v); }

  bool same_shape(const Tensor& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

// y += M x  (x has M.cols entries, y has M.rows entries)
inline void matvec_acc(const Tensor& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
}

// y += M^T x  (x has M.rows entries, y has M.cols entries)
inline void matvec_transpose_acc(const Tensor& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += xr * row[c];
  }
}

// M += a b^T (outer product accumulate)
inline void outer_acc(Tensor& m, const double* a, const double* b) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double* row = m.row(r);
    const double ar = a[r];
    if (ar == 0.0) continue;
    for (std::size_t c = 0; c < m.cols; ++c) row[c] += ar * b[c];
  }
}

}  // namespace seqcl
