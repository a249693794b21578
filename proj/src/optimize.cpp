// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/optimize.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace qlr::opt {

namespace {

struct GslInit {
  GslInit() { gsl_set_error_handler_off(); }
};
const GslInit gsl_init_once;

struct FContext {
  const Objective* f;
  const Gradient* g;
};

double eval_f(const gsl_vector* v, void* params) {
  const auto* ctx = static_cast<const FContext*>(params);
  Vector x(v->size);
  for (size_t i = 0; i < v->size; ++i) x(i) = gsl_vector_get(v, i);
  return (*ctx->f)(x);
}

void eval_df(const gsl_vector* v, void* params, gsl_vector* df) {
  const auto* ctx = static_cast<const FContext*>(params);
  Vector x(v->size);
  for (size_t i = 0; i < v->size; ++i) x(i) = gsl_vector_get(v, i);
  const Vector grad = (*ctx->g)(x);
  for (size_t i = 0; i < v->size; ++i) gsl_vector_set(df, i, grad(i));
}

void eval_fdf(const gsl_vector* v, void* params, double* f, gsl_vector* df) {
  *f = eval_f(v, params);
  eval_df(v, params, df);
}

}  // namespace

Result nelder_mead(const Objective& f, const Vector& x0, const NelderMeadOptions& opt) {
  const size_t n = static_cast<size_t>(x0.size());
  FContext ctx{&f, nullptr};
  gsl_multimin_function func{&eval_f, n, &ctx};

  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  for (size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, x0(static_cast<int>(i)));
    gsl_vector_set(step, i, opt.step);
  }
  gsl_multimin_fminimizer* s =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &func, x, step);

  Result res;
  int iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < opt.max_iter) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    res.final_size = gsl_multimin_fminimizer_size(s);
    status = gsl_multimin_test_size(res.final_size, opt.size_tol);
  }
  res.converged = (status == GSL_SUCCESS);
  res.iterations = iter;
  res.x.resize(n);
  for (size_t i = 0; i < n; ++i) res.x(static_cast<int>(i)) = gsl_vector_get(s->x, i);
  res.f = s->fval;

  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(step);
  return res;
}

Result bfgs(const Objective& f, const Gradient& g, const Vector& x0, const BfgsOptions& opt) {
  const size_t n = static_cast<size_t>(x0.size());
  FContext ctx{&f, &g};
  gsl_multimin_function_fdf func{&eval_f, &eval_df, &eval_fdf, n, &ctx};

  gsl_vector* x = gsl_vector_alloc(n);
  for (size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0(static_cast<int>(i)));
  gsl_multimin_fdfminimizer* s =
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(s, &func, x, opt.step, opt.line_tol);

  Result res;
  int iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < opt.max_iter) {
    ++iter;
    const int it_status = gsl_multimin_fdfminimizer_iterate(s);
    if (it_status != GSL_SUCCESS) {
      // Line search made no progress; accept the current point.
      status = (it_status == GSL_ENOPROG) ? GSL_SUCCESS : it_status;
      break;
    }
    status = gsl_multimin_test_gradient(s->gradient, opt.grad_tol);
  }
  res.converged = (status == GSL_SUCCESS);
  res.iterations = iter;
  res.x.resize(n);
  for (size_t i = 0; i < n; ++i) res.x(static_cast<int>(i)) = gsl_vector_get(s->x, i);
  res.f = s->f;
  res.final_size = gsl_blas_dnrm2(s->gradient);

  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);
  return res;
}

Gradient finite_difference_gradient(const Objective& f, double h) {
  return [f, h](const Vector& x) {
    Vector g(x.size());
    Vector xp = x;
    for (int i = 0; i < x.size(); ++i) {
      const double xi = x(i);
      xp(i) = xi + h;
      const double fp = f(xp);
      xp(i) = xi - h;
      const double fm = f(xp);
      xp(i) = xi;
      g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
  };
}

}  // namespace qlr::opt
