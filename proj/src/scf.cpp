// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/scf.hpp"

#include <cmath>
#include <numeric>

namespace qlr::scf {

namespace {

// Cyclic Jacobi diagonalization without a deflation threshold. Plain
// eigensolvers drop off-diagonal couplings below eps*norm, which at far-
// dissociated geometries rounds the symmetric/antisymmetric mixing angle
// atan2(2t, 0) = pi/2 down to zero and localizes the orbitals. Rotating on
// every nonzero off-diagonal keeps the exponentially small physables.
void jacobi_full(Matrix& a, Matrix& v) {
  const int n = static_cast<int>(a.rows());
  v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 30; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off == 0.0) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
}

// Eigendecomposition with a deterministic resolution of degenerate groups.
void eigh_with_tiebreak(const Matrix& m, Matrix& vecs, Vector& vals) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  vecs = es.eigenvectors();
  vals = es.eigenvalues();
  const int n = static_cast<int>(vals.size());
  int start = 0;
  while (start < n) {
    int end = start + 1;
    const double scale = std::max(1.0, std::abs(vals(start)));
    while (end < n && vals(end) - vals(start) <= 1e-12 * scale) ++end;
    if (end - start > 1) {
      const Matrix w = vecs.middleCols(start, end - start);
      Matrix sub = w.transpose() * m * w;
      Matrix rot;
      jacobi_full(sub, rot);
      // ascending within the group
      Vector d(end - start);
      for (int k = 0; k < end - start; ++k) d(k) = sub(k, k);
      std::vector<int> order(end - start);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return d(a) < d(b); });
      Matrix rot_sorted(end - start, end - start);
      for (int k = 0; k < end - start; ++k) rot_sorted.col(k) = rot.col(order[k]);
      vecs.middleCols(start, end - start) = w * rot_sorted;
      for (int k = 0; k < end - start; ++k) vals(start + k) = d(order[k]);
    }
    start = end;
  }
}

}  // namespace

void fix_column_phases(Matrix& C) {
  for (int j = 0; j < C.cols(); ++j) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < C.rows(); ++i) {
      const double a = std::abs(C(i, j));
      if (a > best + 1e-300 && a > best) {
        best = a;
        imax = i;
      }
    }
    if (C(imax, j) < 0.0) C.col(j) = -C.col(j);
  }
}

SCFResult rhf_solve(const molint::AOIntegrals& ao, int n_electrons, const RHFOptions& opt) {
  if (n_electrons <= 0 || n_electrons % 2 != 0)
    throw Error("rhf_solve: electron count must be positive and even, got " +
                std::to_string(n_electrons));
  const int n = ao.n_ao;
  const int nocc = n_electrons / 2;
  if (nocc > n) throw Error("rhf_solve: more electron pairs than orbitals");

  Eigen::SelfAdjointEigenSolver<Matrix> s_eig(ao.S);
  const Vector s_vals = s_eig.eigenvalues();
  if (s_vals(0) <= 0.0 || s_vals(n - 1) / s_vals(0) > 1e10)
    throw Error("rhf_solve: near-singular overlap matrix (basis linear dependence)");
  const Matrix X =
      s_eig.eigenvectors() * s_vals.cwiseInverse().cwiseSqrt().asDiagonal() *
      s_eig.eigenvectors().transpose();  // S^{-1/2}

  const Matrix hcore = ao.T + ao.V;

  auto fock = [&](const Matrix& D) {
    Matrix F = hcore;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        double g = 0.0;
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s)
            g += D(r, s) * (ao.eri(p, q, r, s) - 0.5 * ao.eri(p, r, q, s));
        F(p, q) += g;
      }
    return F;
  };

  auto solve_orbitals = [&](const Matrix& F, Matrix& C, Vector& eps) {
    Matrix vecs;
    eigh_with_tiebreak(X.transpose() * F * X, vecs, eps);
    C = X * vecs;
  };

  SCFResult res;
  Matrix C, F_old;
  Vector eps;
  solve_orbitals(hcore, C, eps);  // core guess
  Matrix D = 2.0 * C.leftCols(nocc) * C.leftCols(nocc).transpose();
  double e_old = 0.0;

  for (int it = 1; it <= opt.max_iter; ++it) {
    Matrix F = fock(D);
    if (it > 1 && it <= opt.damping_iters + 1)
      F = opt.damping * F + (1.0 - opt.damping) * F_old;
    F_old = F;

    const double e_elec = 0.5 * (D.array() * (hcore + F).array()).sum();
    const double e_tot = e_elec + ao.e_nuc;
    const Matrix comm = F * D * ao.S - ao.S * D * F;
    const double comm_norm = comm.cwiseAbs().maxCoeff();

    solve_orbitals(F, C, eps);
    D = 2.0 * C.leftCols(nocc) * C.leftCols(nocc).transpose();

    res.iterations = it;
    res.e_hf = e_tot;
    if (comm_norm <= opt.conv_threshold && std::abs(e_tot - e_old) <= opt.energy_threshold) {
      res.converged = true;
      break;
    }
    e_old = e_tot;
  }

  fix_column_phases(C);
  res.C = C;
  res.orbital_energies = eps;
  // Recompute the final energy from the phase-fixed orbitals.
  D = 2.0 * res.C.leftCols(nocc) * res.C.leftCols(nocc).transpose();
  const Matrix F = fock(D);
  res.e_hf = 0.5 * (D.array() * (hcore + F).array()).sum() + ao.e_nuc;
  return res;
}

}  // namespace qlr::scf
