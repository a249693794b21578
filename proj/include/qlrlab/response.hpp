// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qlrlab/ansatz.hpp"
#include "qlrlab/fockspace.hpp"

namespace qlr::response {

using fockspace::Onv;
using fockspace::SectorBasis;

enum class Parameterization { Naive, Proj, SelfConsistent, StateTransfer };

std::string to_string(Parameterization p);
Parameterization parameterization_from_string(const std::string& name);

struct ExcitationInfo {
  enum class Kind { Single, Double, DoublePrime };
  Kind kind{};
  int i = 0, j = 0, a = 0, b = 0;  // occupied i,j; virtual a,b
  std::string label() const;
};

// Base excitation operators G_I over the occupied/virtual split of the
// reference CSF: all singles first (row-major ia), then doubles, then the
// primed doubles. Operators that vanish in the sector are dropped with a note.
struct ExcitationOperatorSet {
  const SectorBasis* basis = nullptr;
  Onv reference = 0;
  std::vector<int> occupied, virtuals;
  std::vector<Matrix> g;
  std::vector<fockspace::FermionicOp> g_ops;  // same operators, symbolic form
  std::vector<ExcitationInfo> info;
  std::vector<std::pair<ExcitationInfo, std::string>> dropped;
  int size() const { return static_cast<int>(g.size()); }
};

ExcitationOperatorSet build_excitation_basis(const SectorBasis& basis, Onv reference);

// Ground state handle: naive/proj only need the state; sc/st also need the
// preparing ansatz (its unitary U enters the response operators).
struct GroundStateRef {
  Vector state;
  const ansatz::AnsatzProgram* program = nullptr;
  Vector theta;
};

struct ResponseMatrices {
  Parameterization param{};
  const SectorBasis* basis = nullptr;
  Vector ground;
  Matrix a, b, sigma, delta;
  // max-abs deviation from the exact symmetry, recorded before symmetrizing
  double residual_a = 0.0, residual_b = 0.0, residual_sigma = 0.0, residual_delta = 0.0;
  // R_I|0> and R_I^T|0>, kept for property gradients
  std::vector<Vector> r_psi, rt_psi;
};

// Exact expectation-value construction over the given ground state:
//   A_IJ = <0|[R_I^dag,[H,R_J]]|0>   B_IJ = <0|[R_I^dag,[H,R_J^dag]]|0>
//   Sigma_IJ = <0|[R_I^dag,R_J]|0>   Delta_IJ = <0|[R_I^dag,R_J^dag]|0>
// with R_I per parameterization (naive G, projected G|0><0| - <G>, sc U G U^dag,
// state-transfer U G |CSF><0|). Structure is enforced by averaging with the
// residual recorded, never silently.
ResponseMatrices build_response_matrices(Parameterization param, const GroundStateRef& ground,
                                         const Matrix& hamiltonian,
                                         const ExcitationOperatorSet& excitations);

struct SolveOptions {
  double cond_threshold = 1e8;  // flag when cond2(Sigma) exceeds this
  double metric_floor = 1e-6;   // flag when sigma_min(S2) drops below this
  double regularize = 0.0;      // optional eps*I added to Sigma (watermarked)
};

struct ResponseSolution {
  std::vector<double> omega;       // positive branch, ascending, finite only
  ComplexMatrix x;                 // eigenvectors, one column per omega
  std::vector<double> metric_signature;  // Re(x^dag S2 x) per state
  double max_imag = 0.0;           // largest |Im omega| among kept states
  int n_infinite = 0;              // QZ eigenvalues with beta ~ 0
  double det_s2 = 0.0;
  double cond_sigma = 0.0;
  double sigma_min_s2 = 0.0;
  bool flagged = false;
  bool regularized = false;
  Matrix e2, s2;  // the paired-system matrices actually solved
};

// QZ-style generalized eigensolve of the paired 2n x 2n system; near-singular
// metrics are never regularized silently. Flagged solutions are still
// returned, just marked.
ResponseSolution solve_response(const ResponseMatrices& rm, const SolveOptions& opt = {});

// L2 condition number from singular values; +inf when sigma_min is exactly 0.
double condition_number(const Matrix& sigma);

// Closed-form 2-in-2 metric determinants in terms of the CI coefficients
// (c_s is the open-shell singlet coefficient).
double analytic_metric_det_2in2(Parameterization param, double c_1100, double c_s,
                                double c_0011);

struct SpectrumOptions {
  double fwhm = 0.05;  // Hartree
  int grid_points = 400;
  bool allow_flagged = false;
};

struct SpectrumData {
  std::vector<double> omega;
  std::vector<double> oscillator_strength;
  std::vector<bool> reliable;
  std::vector<double> grid, intensity;  // Gaussian-broadened curve
};

// Oscillator strengths f_n = (2/3) omega_n sum_axis |t|^2 from the response
// eigenvectors contracted with the dipole property gradient of the same
// parameterization, normalized by x^dag S2 x.
SpectrumData compute_spectrum(const ResponseSolution& sol, const ResponseMatrices& rm,
                              const std::array<Matrix, 3>& dipole_mo,
                              const SpectrumOptions& opt = {});

}  // namespace qlr::response
