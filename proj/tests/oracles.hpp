// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0
//
// Test-only numerical oracles, kept independent of the closed-form integral
// implementations they cross-check.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "qlrlab/core.hpp"
#include "qlrlab/molint.hpp"

namespace qlr::testing {

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 30) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double eps,
          int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, 0.5 * eps, d - 1) +
           rec(mid, hi, fmid, frm, fhi, 0.5 * eps, d - 1);
  };
  return rec(a, b, fa, fm, fb, tol, depth);
}

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

struct Gauss1D {
  std::vector<double> x, w;
  Gauss1D(int n, double a, double b) {
    const auto& [xr, wr] = gauss_legendre(n);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
      x[i] = 0.5 * (b - a) * xr[i] + 0.5 * (a + b);
      w[i] = wr[i] * 0.5 * (b - a);
    }
  }
};

// 3D tensor-grid quadrature of f over a cube centered at c.
inline double quad3d(const std::function<double(double, double, double)>& f,
                     const std::array<double, 3>& c, double half_width, int n) {
  const Gauss1D gx(n, c[0] - half_width, c[0] + half_width);
  const Gauss1D gy(n, c[1] - half_width, c[1] + half_width);
  const Gauss1D gz(n, c[2] - half_width, c[2] + half_width);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        acc += gx.w[i] * gy.w[j] * gz.w[k] * f(gx.x[i], gy.x[j], gz.x[k]);
  return acc;
}

inline double gauss_s(double alpha, const std::array<double, 3>& A, double x, double y, double z) {
  const double r2 = (x - A[0]) * (x - A[0]) + (y - A[1]) * (y - A[1]) + (z - A[2]) * (z - A[2]);
  return std::exp(-alpha * r2);
}

// Electrostatic potential of an s Gaussian at distance u from its center,
// via the shell theorem: Phi(u) = 4pi [ (1/u) int_0^u r^2 g dr + int_u^inf r g dr ].
inline double gaussian_potential(double alpha, double u) {
  const double rmax = std::sqrt(80.0 / alpha);
  const int n = 80;
  if (u < 1e-12) {
    const Gauss1D g(n, 0.0, rmax);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += g.w[i] * g.x[i] * std::exp(-alpha * g.x[i] * g.x[i]);
    return 4.0 * M_PI * acc;
  }
  double inner = 0.0, outer = 0.0;
  {
    const Gauss1D g(n, 0.0, std::min(u, rmax));
    for (int i = 0; i < n; ++i)
      inner += g.w[i] * g.x[i] * g.x[i] * std::exp(-alpha * g.x[i] * g.x[i]);
  }
  if (u < rmax) {
    const Gauss1D g(n, u, rmax);
    for (int i = 0; i < n; ++i) outer += g.w[i] * g.x[i] * std::exp(-alpha * g.x[i] * g.x[i]);
  }
  return 4.0 * M_PI * (inner / u + outer);
}

// Primitive-level quadrature oracles over unnormalized s Gaussians. The grid
// is centered on the Gaussian-product center and scaled to its width.
namespace prim_oracle {

inline void product_box(double a, const std::array<double, 3>& A, double b,
                        const std::array<double, 3>& B, std::array<double, 3>& center,
                        double& half) {
  const double p = a + b;
  double ab = 0.0;
  for (int k = 0; k < 3; ++k) {
    center[k] = (a * A[k] + b * B[k]) / p;
    ab += (A[k] - B[k]) * (A[k] - B[k]);
  }
  half = std::sqrt(48.0 / p) + 0.5 * std::sqrt(ab);
}

inline double overlap(double a, const std::array<double, 3>& A, double b,
                      const std::array<double, 3>& B, int n = 64) {
  std::array<double, 3> c;
  double half;
  product_box(a, A, b, B, c, half);
  return quad3d(
      [&](double x, double y, double z) { return gauss_s(a, A, x, y, z) * gauss_s(b, B, x, y, z); },
      c, half, n);
}

inline double kinetic(double a, const std::array<double, 3>& A, double b,
                      const std::array<double, 3>& B, int n = 64) {
  // -1/2 g_A lap g_B with lap g_B = (4 b^2 r^2 - 6 b) g_B
  std::array<double, 3> c;
  double half;
  product_box(a, A, b, B, c, half);
  return quad3d(
      [&](double x, double y, double z) {
        const double r2 =
            (x - B[0]) * (x - B[0]) + (y - B[1]) * (y - B[1]) + (z - B[2]) * (z - B[2]);
        return -0.5 * gauss_s(a, A, x, y, z) * (4.0 * b * b * r2 - 6.0 * b) *
               gauss_s(b, B, x, y, z);
      },
      c, half, n);
}

inline double dipole(double a, const std::array<double, 3>& A, double b,
                     const std::array<double, 3>& B, int axis, int n = 64) {
  std::array<double, 3> c;
  double half;
  product_box(a, A, b, B, c, half);
  return quad3d(
      [&](double x, double y, double z) {
        const double coord = axis == 0 ? x : axis == 1 ? y : z;
        return coord * gauss_s(a, A, x, y, z) * gauss_s(b, B, x, y, z);
      },
      c, half, n);
}

// -Z <g_A | 1/|r-C| | g_B> with Z = 1, via the potential of the product
// Gaussian (the Gaussian product theorem is plain algebra, no Boys function).
inline double nuclear(double a, const std::array<double, 3>& A, double b,
                      const std::array<double, 3>& B, const std::array<double, 3>& C) {
  const double p = a + b;
  std::array<double, 3> P;
  double ab2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    P[k] = (a * A[k] + b * B[k]) / p;
    ab2 += (A[k] - B[k]) * (A[k] - B[k]);
  }
  const double pref = std::exp(-a * b / p * ab2);
  double u = 0.0;
  for (int k = 0; k < 3; ++k) u += (P[k] - C[k]) * (P[k] - C[k]);
  u = std::sqrt(u);
  return -pref * gaussian_potential(p, u);
}

// (ab|cd) as int rho_P(r) Phi_Q(|r - Q|) on a spherical grid around P; both
// densities are axially symmetric about the P-Q axis, so the azimuthal
// integral is 2 pi.
inline double eri(double a, const std::array<double, 3>& A, double b,
                  const std::array<double, 3>& B, double c, const std::array<double, 3>& C,
                  double d, const std::array<double, 3>& D) {
  const double p = a + b, q = c + d;
  std::array<double, 3> P, Q;
  double ab2 = 0.0, cd2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    P[k] = (a * A[k] + b * B[k]) / p;
    Q[k] = (c * C[k] + d * D[k]) / q;
    ab2 += (A[k] - B[k]) * (A[k] - B[k]);
    cd2 += (C[k] - D[k]) * (C[k] - D[k]);
  }
  const double pref = std::exp(-a * b / p * ab2) * std::exp(-c * d / q * cd2);
  double pq = 0.0;
  for (int k = 0; k < 3; ++k) pq += (P[k] - Q[k]) * (P[k] - Q[k]);
  pq = std::sqrt(pq);

  const double rmax = std::sqrt(80.0 / p);
  const int nr = 80, nt = 48;
  const Gauss1D gr(nr, 0.0, rmax);
  const Gauss1D gt(nt, -1.0, 1.0);
  double acc = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = gr.x[i];
    const double rho = std::exp(-p * r * r);
    for (int j = 0; j < nt; ++j) {
      const double ct = gt.x[j];
      const double u = std::sqrt(std::max(0.0, r * r + pq * pq - 2.0 * r * pq * ct));
      acc += gr.w[i] * gt.w[j] * 2.0 * M_PI * r * r * rho * gaussian_potential(q, u);
    }
  }
  return pref * acc;
}

}  // namespace prim_oracle

}  // namespace qlr::testing
