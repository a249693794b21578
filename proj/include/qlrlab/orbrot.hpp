// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qlrlab/core.hpp"
#include "qlrlab/molint.hpp"

namespace qlr::orbrot {

// Orbital-rotation parameters kappa_pq, stored for p < q only; the full
// antisymmetric generator matrix K (K_pq = kappa_pq, K_qp = -kappa_pq) is
// assembled on demand so antisymmetry holds by construction.
class KappaParams {
 public:
  explicit KappaParams(int n_mo) : n_mo_(n_mo), values_((n_mo * (n_mo - 1)) / 2, 0.0) {}

  int n_mo() const { return n_mo_; }
  int n_params() const { return static_cast<int>(values_.size()); }

  double get(int p, int q) const;          // signed: get(q,p) == -get(p,q)
  void set(int p, int q, double value);    // requires p < q

  const std::vector<double>& values() const { return values_; }
  void set_values(const std::vector<double>& v);

  // Index of the (p,q) pair, p < q, in the packed triangle.
  int pair_index(int p, int q) const;
  std::pair<int, int> pair_at(int index) const;

  Matrix generator_matrix() const;  // K, exactly antisymmetric
  Matrix rotation_matrix() const;   // exp(K), orthogonal

 private:
  int n_mo_;
  std::vector<double> values_;
};

struct MOIntegrals {
  int n_mo = 0;
  Matrix h;                 // one-electron (Hartree)
  Tensor4 g;                // (pq|rs), chemists' notation
  std::array<Matrix, 3> d;  // dipole x,y,z
  double e_nuc = 0.0;
};

// Full four-index transform with orthonormality check on C (CtSC = I to 1e-8).
MOIntegrals transform_to_mo(const molint::AOIntegrals& ao, const Matrix& C);

// Applies the orbital rotation at the integral level: every index contracts
// with exp(K), matching C' = C exp(K) through the two-path equivalence
// transform_to_mo(ao, C exp(K)) == rotate_integrals(transform_to_mo(ao, C), K).
MOIntegrals rotate_integrals(const MOIntegrals& mo, const KappaParams& kappa);

Matrix rotate_mo_coefficients(const Matrix& C, const KappaParams& kappa);

}  // namespace qlr::orbrot
