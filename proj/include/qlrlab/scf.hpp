// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qlrlab/core.hpp"
#include "qlrlab/molint.hpp"

namespace qlr::scf {

struct RHFOptions {
  int max_iter = 200;
  double conv_threshold = 1e-10;   // max |FDS - SDF|
  double energy_threshold = 1e-12;
  double damping = 0.5;            // Fock mixing factor for the first iterations
  int damping_iters = 5;
};

struct SCFResult {
  Matrix C;                 // MO coefficients, columns orthonormal under S
  Vector orbital_energies;  // Hartree
  double e_hf = 0.0;        // total energy (Hartree)
  bool converged = false;
  int iterations = 0;
};

// Restricted Hartree-Fock with core-Hamiltonian guess and simple damping.
// Orbital phases are fixed by making the largest-magnitude coefficient of
// each column positive (first index wins ties), so downstream CI coefficients
// are reproducible. Non-convergence is reported in the result, never hidden;
// a singular overlap (cond > 1e10) raises Error.
SCFResult rhf_solve(const molint::AOIntegrals& ao, int n_electrons, const RHFOptions& opt = {});

// Applies the column phase convention in place.
void fix_column_phases(Matrix& C);

}  // namespace qlr::scf
