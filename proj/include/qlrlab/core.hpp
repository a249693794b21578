// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlr {

inline constexpr const char* kVersion = "0.1.0";

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Unit conversion used at all CLI/config boundaries; internals are atomic units.
inline constexpr double kAngstromToBohr = 1.8897261246;

// Base error for all domain failures raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeometryError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct ConvergenceError : Error {
  using Error::Error;
};
struct OptimizationError : Error {
  using Error::Error;
};

// Dense rank-4 tensor with identical extent on each index. Chemists' notation
// (pq|rs) is used throughout for two-electron quantities.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  int extent() const { return n_; }

  double& operator()(int p, int q, int r, int s) { return data_[index(p, q, r, s)]; }
  double operator()(int p, int q, int r, int s) const { return data_[index(p, q, r, s)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  size_t index(int p, int q, int r, int s) const {
    return ((static_cast<size_t>(p) * n_ + q) * n_ + r) * n_ + s;
  }
  int n_ = 0;
  std::vector<double> data_;
};

}  // namespace qlr
