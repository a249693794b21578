// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "qlrlab/core.hpp"
#include "qlrlab/orbrot.hpp"

namespace qlr::fockspace {

// Occupation-number vectors use the convention |1a 1b 2a 2b ... Na Nb>:
// spin-orbital so = 2*orbital + (0 for alpha, 1 for beta), stored as a bitmask
// with bit so giving the occupation. The printed string reads spin-orbital 0
// leftmost, so mask 0b0011 prints as "1100".
using Onv = std::uint32_t;

std::string onv_to_string(Onv onv, int n_mo);
Onv onv_from_string(const std::string& s);

// Fermionic sign conventions: alpha before beta within an orbital, orbitals
// left to right, creation operators applied right to left. a^dag_k on |m>
// carries sign (-1)^{#occupied spin-orbitals below k}.
class SectorBasis {
 public:
  // All ONVs with the given electron count and Sz (in units of hbar/2, i.e.
  // twice_sz = n_alpha - n_beta). Ordering: descending lexicographic on the
  // occupation string, which puts the Aufbau CSF first.
  static SectorBasis particle_sector(int n_mo, int n_electrons, int twice_sz = 0);
  // All 2^(2 n_mo) occupations in computational (mask-ascending) order, which
  // matches the qubit indexing used by the Jordan-Wigner sampler.
  static SectorBasis full_space(int n_mo);

  int n_mo() const { return n_mo_; }
  int n_electrons() const { return n_electrons_; }  // -1 for the full space
  bool is_full_space() const { return n_electrons_ < 0; }
  int size() const { return static_cast<int>(onvs_.size()); }

  Onv onv(int index) const { return onvs_[index]; }
  int index_of(Onv onv) const;  // -1 when absent

  // Aufbau closed-shell reference |1100...> for this sector.
  Onv csf_onv() const;
  int csf_index() const;

  const std::vector<Onv>& onvs() const { return onvs_; }

 private:
  int n_mo_ = 0;
  int n_electrons_ = 0;
  int twice_sz_ = 0;
  std::vector<Onv> onvs_;
  std::vector<int> index_by_mask_;  // dense lookup, size 2^(2 n_mo)
};

// ---------------------------------------------------------------------------
// Second-quantized operator expressions (products of ladder operators).

struct Ladder {
  int so = 0;          // spin-orbital index
  bool create = false;
};

struct FermionicTerm {
  double coeff = 0.0;
  std::vector<Ladder> ops;  // operator product, leftmost factor first
};

struct FermionicOp {
  std::vector<FermionicTerm> terms;

  FermionicOp& operator+=(const FermionicOp& other);
  FermionicOp operator*(const FermionicOp& other) const;  // term-wise concatenation
  FermionicOp scaled(double factor) const;
  FermionicOp adjoint() const;
};

namespace ops {
FermionicOp creation(int so);
FermionicOp annihilation(int so);
FermionicOp number(int so);
// Singlet single excitation E_pq = a+_{p,a} a_{q,a} + a+_{p,b} a_{q,b}.
FermionicOp e_singlet(int p, int q);
FermionicOp e_minus(int p, int q);  // E_pq - E_qp
// Two-electron singlet excitation e_pqrs = E_pq E_rs - delta_qr E_ps.
FermionicOp e2_singlet(int p, int q, int r, int s);
// Electronic part of the molecular Hamiltonian (nuclear repulsion excluded).
FermionicOp hamiltonian(const orbrot::MOIntegrals& mo);
FermionicOp s_plus(int n_mo);
FermionicOp s_z(int n_mo);
FermionicOp s_squared(int n_mo);  // S-S+ + Sz(Sz+1)
}  // namespace ops

// Applies a ladder product to an ONV. Returns false when annihilated.
bool apply_term(const std::vector<Ladder>& ops, Onv in, Onv& out, int& sign);

// Dense matrix of the operator in the given basis. Throws if the operator
// maps a basis state outside the basis.
Matrix to_matrix(const FermionicOp& op, const SectorBasis& basis);

struct OperatorMatrix {
  const SectorBasis* basis = nullptr;
  Matrix m;
  bool hermitian = false;
};

enum class ExcitationKind { SpinOrbital, SingletE, TwoElectronE, EMinus };

// kind SpinOrbital: a+_{idx0} a_{idx1} over spin-orbitals; SingletE/EMinus take
// two spatial indices; TwoElectronE takes four.
OperatorMatrix build_excitation_matrix(const SectorBasis& basis, ExcitationKind kind,
                                       const std::vector<int>& indices);

OperatorMatrix build_hamiltonian(const orbrot::MOIntegrals& mo, const SectorBasis& basis);

// Caches the E_pq and e_pqrs sector matrices so Hamiltonians for rotated
// integrals can be assembled cheaply inside kappa loops.
class HamiltonianBuilder {
 public:
  explicit HamiltonianBuilder(const SectorBasis& basis);
  Matrix build(const orbrot::MOIntegrals& mo) const;
  const Matrix& e1(int p, int q) const { return e1_[p * n_ + q]; }
  const SectorBasis& basis() const { return *basis_; }

 private:
  const SectorBasis* basis_;
  int n_ = 0;
  std::vector<Matrix> e1_;  // E_pq
  std::vector<Matrix> e2_;  // e_pqrs
};

// One-electron operator sum_pq m_pq E_pq (dipole components, etc).
Matrix build_one_electron_operator(const Matrix& m, const SectorBasis& basis);

struct FCISolution {
  double e0 = 0.0;
  Vector eigenvalues;   // full ascending spectrum
  Matrix eigenvectors;  // columns match eigenvalues
  Vector ground;        // phase-fixed ground state
  bool degenerate = false;
  // Named CI coefficients for two-in-two sectors (c_s is the coefficient of
  // the open-shell singlet combination (|1001> - |0110>)/sqrt(2)).
  std::optional<double> c_1100, c_s, c_0011;
};

// Dense diagonalization. Near-degenerate ground subspaces are resolved by
// diagonalizing S^2 inside the subspace and taking the lowest-spin state
// (flagged as degenerate); the global phase makes the CSF coefficient
// positive, falling back to the first nonzero coefficient.
FCISolution fci_solve(const OperatorMatrix& hamiltonian);

// Embeds a sector vector into the 2^(2 n_mo) computational-basis space
// indexed by ONV mask (qubit q = spin-orbital q).
Vector embed_full(const Vector& sector_state, const SectorBasis& sector);

}  // namespace qlr::fockspace
