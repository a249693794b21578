// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/orbrot.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qlr::orbrot {

double KappaParams::get(int p, int q) const {
  if (p == q) return 0.0;
  return p < q ? values_[pair_index(p, q)] : -values_[pair_index(q, p)];
}

void KappaParams::set(int p, int q, double value) {
  if (!(p < q)) throw Error("KappaParams::set expects p < q");
  values_[pair_index(p, q)] = value;
}

void KappaParams::set_values(const std::vector<double>& v) {
  if (v.size() != values_.size()) throw Error("KappaParams: wrong parameter count");
  values_ = v;
}

int KappaParams::pair_index(int p, int q) const {
  if (p < 0 || q >= n_mo_ || p >= q) throw Error("KappaParams: bad pair indices");
  // (p,q) with p<q in row-major order over the strict upper triangle
  return p * n_mo_ - (p * (p + 1)) / 2 + (q - p - 1);
}

std::pair<int, int> KappaParams::pair_at(int index) const {
  int k = index;
  for (int p = 0; p < n_mo_; ++p) {
    const int row = n_mo_ - p - 1;
    if (k < row) return {p, p + 1 + k};
    k -= row;
  }
  throw Error("KappaParams: pair index out of range");
}

Matrix KappaParams::generator_matrix() const {
  Matrix K = Matrix::Zero(n_mo_, n_mo_);
  for (int p = 0; p < n_mo_; ++p)
    for (int q = p + 1; q < n_mo_; ++q) {
      const double v = values_[pair_index(p, q)];
      K(p, q) = v;
      K(q, p) = -v;
    }
  return K;
}

Matrix KappaParams::rotation_matrix() const { return generator_matrix().exp(); }

namespace {

// One-index contraction g'_{...p...} = sum_{p'} U_{p'p} g_{...p'...} applied
// cyclically so all four indices end up transformed.
Tensor4 transform_eri(const Tensor4& g, const Matrix& U) {
  const int n = static_cast<int>(U.rows());
  Tensor4 a = g, b(n);
  for (int pass = 0; pass < 4; ++pass) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            double acc = 0.0;
            for (int t = 0; t < n; ++t) acc += U(t, s) * a(p, q, r, t);
            b(s, p, q, r) = acc;  // cycle indices so each pass transforms one
          }
    std::swap(a, b);
  }
  return a;
}

MOIntegrals apply_basis_change(const MOIntegrals& mo, const Matrix& U) {
  MOIntegrals out;
  out.n_mo = static_cast<int>(U.cols());
  out.h = U.transpose() * mo.h * U;
  for (int ax = 0; ax < 3; ++ax) out.d[ax] = U.transpose() * mo.d[ax] * U;
  out.g = transform_eri(mo.g, U);
  out.e_nuc = mo.e_nuc;
  return out;
}

}  // namespace

MOIntegrals transform_to_mo(const molint::AOIntegrals& ao, const Matrix& C) {
  const Matrix ortho = C.transpose() * ao.S * C;
  if ((ortho - Matrix::Identity(C.cols(), C.cols())).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("transform_to_mo: MO coefficients are not orthonormal under S");
  MOIntegrals ao_as_mo;
  ao_as_mo.n_mo = ao.n_ao;
  ao_as_mo.h = ao.T + ao.V;
  ao_as_mo.d = ao.D;
  ao_as_mo.g = ao.eri;
  ao_as_mo.e_nuc = ao.e_nuc;
  return apply_basis_change(ao_as_mo, C);
}

MOIntegrals rotate_integrals(const MOIntegrals& mo, const KappaParams& kappa) {
  if (kappa.n_mo() != mo.n_mo) throw Error("rotate_integrals: dimension mismatch");
  return apply_basis_change(mo, kappa.rotation_matrix());
}

Matrix rotate_mo_coefficients(const Matrix& C, const KappaParams& kappa) {
  if (kappa.n_mo() != C.cols()) throw Error("rotate_mo_coefficients: dimension mismatch");
  return C * kappa.rotation_matrix();
}

}  // namespace qlr::orbrot
