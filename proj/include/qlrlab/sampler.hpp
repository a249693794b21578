// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <map>

#include "qlrlab/response.hpp"

namespace qlr::sampler {

// One letter per qubit; qubit q is spin-orbital q (bit q of the ONV mask).
// Symplectic storage: x bit set = X component, z bit set = Z component,
// both = Y.
struct PauliString {
  std::uint32_t x = 0, z = 0;
  int n_qubits = 0;

  static PauliString identity(int n) { return {0, 0, n}; }
  static PauliString from_letters(const std::string& letters);
  std::string letters() const;
  char letter(int q) const;
  bool is_identity() const { return x == 0 && z == 0; }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.x == b.x && a.z == b.z && a.n_qubits == b.n_qubits;
  }
};

// Product of two strings is a single string with phase in {1, i, -1, -i}.
std::pair<std::complex<double>, PauliString> multiply(const PauliString& a, const PauliString& b);

// Dense matrix in the computational basis (for cross-checks).
ComplexMatrix pauli_matrix(const PauliString& p);

class PauliSum {
 public:
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

  int n_qubits() const { return n_qubits_; }
  size_t size() const { return terms_.size(); }

  void add(const PauliString& p, std::complex<double> coeff);
  void add_scaled(const PauliSum& other, std::complex<double> scale);
  PauliSum times(const PauliSum& other) const;
  PauliSum adjoint() const;
  void prune(double tol = 1e-14);

  // Deterministically ordered by (x, z).
  const std::map<std::pair<std::uint32_t, std::uint32_t>, std::complex<double>>& terms() const {
    return terms_;
  }
  std::complex<double> coeff(const PauliString& p) const;
  ComplexMatrix to_matrix() const;

 private:
  int n_qubits_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::complex<double>> terms_;
};

// Jordan-Wigner image: a_p = Z_0..Z_{p-1} (X_p + iY_p)/2, matching the
// fermionic sign convention of the ONV ordering.
PauliSum jw_map(const fockspace::FermionicOp& op, int n_qubits);

// Exact Pauli-basis expansion of a dense operator (unique, so it agrees with
// the symbolic JW route).
PauliSum pauli_decompose(const ComplexMatrix& m, double prune = 1e-14);
PauliSum pauli_decompose(const Matrix& m, double prune = 1e-14);

// <psi|P|psi> for a real state indexed by ONV mask.
double exact_pauli_expectation(const Vector& state_full, const PauliString& p);

// Small counter-based RNG used for per-term sampling streams.
struct SplitMix64 {
  using result_type = std::uint64_t;
  std::uint64_t s = 0;
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ull; }
  std::uint64_t operator()();
};

std::uint64_t derived_seed(std::uint64_t master, std::uint64_t repetition, std::uint64_t element,
                           std::uint64_t term);

struct ShotPlan {
  long shots = 1000;   // <= 0 runs the exact (zero-noise) path
  int repetitions = 100;
  std::uint64_t master_seed = 0;
};

// Draws k ~ Binomial(shots, (1+<P>)/2) and returns 2k/shots - 1.
double sample_expectation(double exact, long shots, SplitMix64& rng);

// Finite-shot estimation of the response matrices: every A/B/Sigma element
// operator is expanded into a single PauliSum over the full 2^(2 n_mo) qubit
// space, each term estimated once per element per repetition. Delta is zero
// for these parameterizations and is not sampled. Only naive and proj are
// accepted (sc/st have the identity metric; the noise study targets the
// non-trivial metrics).
class NoisyResponseSampler {
 public:
  NoisyResponseSampler(response::Parameterization param, const fockspace::SectorBasis& sector,
                       const Vector& ground_sector, const orbrot::MOIntegrals& mo,
                       const response::ExcitationOperatorSet& excitations, const ShotPlan& plan);

  // One ResponseMatrices realization per repetition (identical exact values
  // when plan.shots <= 0). Streams element decompositions, so memory stays at
  // one element at a time.
  std::vector<response::ResponseMatrices> sample_all() const;

  // Noiseless dense-algebra reference for the same inputs.
  const response::ResponseMatrices& dense_reference() const { return dense_; }

 private:
  response::Parameterization param_;
  ShotPlan plan_;
  int n_ops_ = 0;
  int n_qubits_ = 0;
  response::ResponseMatrices dense_;
  Matrix h_full_;
  std::vector<Matrix> r_full_;
  Vector psi_full_;
  std::vector<std::pair<std::uint32_t, double>> psi_support_;  // (mask, amplitude)
};

response::ResponseMatrices build_noisy_response_matrices(
    response::Parameterization param, const fockspace::SectorBasis& sector,
    const Vector& ground_sector, const orbrot::MOIntegrals& mo,
    const response::ExcitationOperatorSet& excitations, const ShotPlan& plan);

struct EnsembleOptions {
  response::Parameterization param = response::Parameterization::Naive;
  int kappa_p = 0, kappa_q = 1;
  std::vector<double> kappa_grid;
  ShotPlan plan;
  response::SolveOptions solve;
  ansatz::OptimizeOptions optimize;
};

struct EnsembleRow {
  double kappa = 0.0;
  double mean_omega = 0.0;
  double std_omega = 0.0;
  double cond_sigma = 0.0;  // noiseless metric condition number
  int n_excluded = 0;
  std::uint64_t seed = 0;
};

// Per-kappa noise statistics of the lowest excitation energy: the ansatz is
// re-optimized noiselessly at each grid point, noise enters only the matrix
// estimation. Repetitions without a positive real eigenvalue are excluded
// from mean/std and counted.
std::vector<EnsembleRow> run_noise_ensemble(const orbrot::MOIntegrals& mo,
                                            const fockspace::SectorBasis& sector,
                                            const ansatz::AnsatzProgram& program,
                                            const EnsembleOptions& opt);

}  // namespace qlr::sampler
