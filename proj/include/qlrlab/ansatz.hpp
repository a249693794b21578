// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <random>

#include "qlrlab/fockspace.hpp"
#include "qlrlab/optimize.hpp"

namespace qlr::ansatz {

using fockspace::Onv;
using fockspace::SectorBasis;

struct GeneratorInfo {
  enum class Kind { Single, Double, DoublePrime, PairedDouble };
  Kind kind{};
  std::array<int, 4> idx{};  // pq (singles) or pqrs (doubles)
  std::string label() const;
};

// Anti-Hermitian spin-adapted cluster generators sigma_i = T_i - T_i^dag.
struct ClusterGeneratorSet {
  const SectorBasis* basis = nullptr;
  Onv reference = 0;
  std::vector<Matrix> sigma;
  std::vector<GeneratorInfo> info;
  std::vector<std::pair<GeneratorInfo, std::string>> dropped;  // (what, why)
};

// Singles over all p>q; T2 and T2' doubles over unique excitation-pair
// combinations. Generators that vanish in the sector or are linearly
// dependent on the kept set are dropped and recorded.
ClusterGeneratorSet build_cluster_generators(const SectorBasis& basis, Onv reference);

enum class AnsatzKind { UccsdSingleExponential, Tups };

struct AnsatzProgram {
  AnsatzKind kind{};
  const SectorBasis* basis = nullptr;
  Onv reference = 0;
  std::vector<Matrix> generators;  // distinct anti-Hermitian generators
  struct Factor {
    int generator = 0;
    int slot = 0;
  };
  // Exponential factors in application order (factors.front() hits the
  // reference first). For the single-exponential UCCSD kind all factors live
  // in one exponent exp(sum_i theta_i sigma_i).
  std::vector<Factor> factors;
  int n_params = 0;
};

AnsatzProgram make_uccsd_program(const ClusterGeneratorSet& generators);

// Tiled unitary product state on adjacent orbital pairs (p, p+1): each tile is
// exp(tA s1) exp(tB pair) exp(tC s1); a layer sweeps odd-start tiles then
// even-start tiles; layers carry independent parameters.
AnsatzProgram make_tups_program(const SectorBasis& basis, Onv reference, int layers);

// Exact statevector evaluation through cached eigendecompositions of the
// generators; no Trotterization anywhere.
class AnsatzEvaluator {
 public:
  explicit AnsatzEvaluator(const AnsatzProgram& program);

  const AnsatzProgram& program() const { return *prog_; }
  Vector state(const Vector& theta) const;
  Matrix unitary(const Vector& theta) const;
  double energy(const Matrix& h, const Vector& theta) const;
  Vector gradient(const Matrix& h, const Vector& theta) const;  // exact

 private:
  Vector apply_exp(int gen, double theta, const Vector& x) const;

  const AnsatzProgram* prog_;
  Vector reference_state_;
  struct ExpCache {
    ComplexMatrix v;
    Vector w;  // eigenvalues of i*sigma
  };
  std::vector<ExpCache> exp_;  // per generator (product kinds)
};

Vector evaluate_ansatz_state(const AnsatzProgram& program, const Vector& theta);

struct GroundState {
  Vector theta;
  Vector state;
  double energy = 0.0;
  int iterations = 0;
  double final_gradient_norm = 0.0;
};

struct OptimizeOptions {
  int restarts = 3;
  double tol = 1e-10;
  int nm_max_iter = 4000;
  int bfgs_max_iter = 400;
  unsigned seed = 7;
  std::optional<double> target_energy;  // FCI energy when completeness is declared
  double target_tol = 1e-9;
  std::optional<Vector> theta0;  // warm start
  bool quick = false;            // warm-start mode: gradient polish, escalate on miss
};

// Minimizes <psi(theta)|H|psi(theta)>. Throws OptimizationError when a
// declared target energy is missed after all restarts.
GroundState optimize_ground_state(const AnsatzProgram& program, const Matrix& hamiltonian,
                                  const OptimizeOptions& opt = {});

struct RedundancyReport {
  int p = 0, q = 0;
  double baseline_energy = 0.0;
  std::vector<double> grid;
  std::vector<double> energies;
  std::vector<int> failed_points;
  double max_drift = 0.0;
  bool redundant = false;
};

// Re-optimizes theta for each grid value of kappa_pq and reports the maximum
// ground-energy drift; redundant when it stays within 1e-8 Hartree.
RedundancyReport check_kappa_redundancy(const AnsatzProgram& program,
                                        const orbrot::MOIntegrals& mo, int p, int q,
                                        const std::vector<double>& grid,
                                        const OptimizeOptions& opt = {});

}  // namespace qlr::ansatz
