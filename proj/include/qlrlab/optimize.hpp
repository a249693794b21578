// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "qlrlab/core.hpp"

namespace qlr::opt {

using Objective = std::function<double(const Vector&)>;
using Gradient = std::function<Vector(const Vector&)>;

struct Result {
  Vector x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_size = 0.0;  // simplex size or gradient norm at exit
};

struct NelderMeadOptions {
  double step = 0.1;        // initial simplex edge
  double size_tol = 1e-12;  // characteristic simplex size at convergence
  int max_iter = 5000;
};

struct BfgsOptions {
  double step = 0.05;       // first trial step
  double line_tol = 0.1;
  double grad_tol = 1e-11;
  int max_iter = 400;
};

// gsl nmsimplex2; returns the best point even when the iteration budget runs out.
Result nelder_mead(const Objective& f, const Vector& x0, const NelderMeadOptions& opt = {});

// gsl vector_bfgs2 with an analytic gradient; a stalled line search
// (GSL_ENOPROG) is treated as convergence at the current point.
Result bfgs(const Objective& f, const Gradient& g, const Vector& x0, const BfgsOptions& opt = {});

// Central finite-difference gradient helper for objectives without one.
Gradient finite_difference_gradient(const Objective& f, double h = 1e-6);

}  // namespace qlr::opt
