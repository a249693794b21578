// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/fockspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qlr::fockspace {

std::string onv_to_string(Onv onv, int n_mo) {
  std::string s(2 * n_mo, '0');
  for (int so = 0; so < 2 * n_mo; ++so)
    if (onv >> so & 1u) s[so] = '1';
  return s;
}

Onv onv_from_string(const std::string& s) {
  Onv m = 0;
  for (size_t so = 0; so < s.size(); ++so)
    if (s[so] == '1') m |= 1u << so;
  return m;
}

SectorBasis SectorBasis::particle_sector(int n_mo, int n_electrons, int twice_sz) {
  if (n_electrons < 0 || n_electrons > 2 * n_mo)
    throw Error("SectorBasis: electron count out of range");
  SectorBasis b;
  b.n_mo_ = n_mo;
  b.n_electrons_ = n_electrons;
  b.twice_sz_ = twice_sz;
  const Onv top = 1u << (2 * n_mo);
  for (Onv m = 0; m < top; ++m) {
    if (std::popcount(m) != n_electrons) continue;
    int sz2 = 0;
    for (int p = 0; p < n_mo; ++p) {
      sz2 += (m >> (2 * p)) & 1u;        // alpha
      sz2 -= (m >> (2 * p + 1)) & 1u;    // beta
    }
    if (sz2 != twice_sz) continue;
    b.onvs_.push_back(m);
  }
  if (b.onvs_.empty()) throw Error("SectorBasis: empty sector (infeasible Sz)");
  // Descending lexicographic on the occupation string = descending on the
  // bit-reversed mask.
  const int width = 2 * n_mo;
  auto string_key = [width](Onv m) {
    Onv k = 0;
    for (int i = 0; i < width; ++i)
      if (m >> i & 1u) k |= 1u << (width - 1 - i);
    return k;
  };
  std::sort(b.onvs_.begin(), b.onvs_.end(),
            [&](Onv a, Onv c) { return string_key(a) > string_key(c); });
  b.index_by_mask_.assign(top, -1);
  for (size_t i = 0; i < b.onvs_.size(); ++i) b.index_by_mask_[b.onvs_[i]] = static_cast<int>(i);
  return b;
}

SectorBasis SectorBasis::full_space(int n_mo) {
  SectorBasis b;
  b.n_mo_ = n_mo;
  b.n_electrons_ = -1;
  const Onv top = 1u << (2 * n_mo);
  b.onvs_.resize(top);
  for (Onv m = 0; m < top; ++m) b.onvs_[m] = m;
  b.index_by_mask_.resize(top);
  for (Onv m = 0; m < top; ++m) b.index_by_mask_[m] = static_cast<int>(m);
  return b;
}

int SectorBasis::index_of(Onv onv) const {
  if (onv >= index_by_mask_.size()) return -1;
  return index_by_mask_[onv];
}

Onv SectorBasis::csf_onv() const {
  const int ne = is_full_space() ? 0 : n_electrons_;
  if (ne <= 0 || ne % 2 != 0) throw Error("SectorBasis: no closed-shell CSF in this sector");
  return (1u << ne) - 1u;
}

int SectorBasis::csf_index() const {
  const int idx = index_of(csf_onv());
  if (idx < 0) throw Error("SectorBasis: CSF not contained in sector");
  return idx;
}

// ---------------------------------------------------------------------------

FermionicOp& FermionicOp::operator+=(const FermionicOp& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

FermionicOp FermionicOp::operator*(const FermionicOp& other) const {
  FermionicOp out;
  out.terms.reserve(terms.size() * other.terms.size());
  for (const auto& a : terms)
    for (const auto& b : other.terms) {
      FermionicTerm t;
      t.coeff = a.coeff * b.coeff;
      t.ops = a.ops;
      t.ops.insert(t.ops.end(), b.ops.begin(), b.ops.end());
      out.terms.push_back(std::move(t));
    }
  return out;
}

FermionicOp FermionicOp::scaled(double factor) const {
  FermionicOp out = *this;
  for (auto& t : out.terms) t.coeff *= factor;
  return out;
}

FermionicOp FermionicOp::adjoint() const {
  FermionicOp out;
  out.terms.reserve(terms.size());
  for (const auto& t : terms) {
    FermionicTerm a;
    a.coeff = t.coeff;  // real coefficients
    a.ops.assign(t.ops.rbegin(), t.ops.rend());
    for (auto& l : a.ops) l.create = !l.create;
    out.terms.push_back(std::move(a));
  }
  return out;
}

namespace ops {

FermionicOp creation(int so) { return FermionicOp{{{1.0, {{so, true}}}}}; }
FermionicOp annihilation(int so) { return FermionicOp{{{1.0, {{so, false}}}}}; }
FermionicOp number(int so) { return FermionicOp{{{1.0, {{so, true}, {so, false}}}}}; }

FermionicOp e_singlet(int p, int q) {
  FermionicOp out;
  out.terms.push_back({1.0, {{2 * p, true}, {2 * q, false}}});
  out.terms.push_back({1.0, {{2 * p + 1, true}, {2 * q + 1, false}}});
  return out;
}

FermionicOp e_minus(int p, int q) {
  FermionicOp out = e_singlet(p, q);
  out += e_singlet(q, p).scaled(-1.0);
  return out;
}

FermionicOp e2_singlet(int p, int q, int r, int s) {
  FermionicOp out = e_singlet(p, q) * e_singlet(r, s);
  if (q == r) out += e_singlet(p, s).scaled(-1.0);
  return out;
}

FermionicOp hamiltonian(const orbrot::MOIntegrals& mo) {
  FermionicOp h;
  const int n = mo.n_mo;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (std::abs(mo.h(p, q)) > 1e-15) h += e_singlet(p, q).scaled(mo.h(p, q));
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double g = mo.g(p, q, r, s);
          if (std::abs(g) > 1e-15) h += e2_singlet(p, q, r, s).scaled(0.5 * g);
        }
  return h;
}

FermionicOp s_plus(int n_mo) {
  FermionicOp out;
  for (int p = 0; p < n_mo; ++p)
    out.terms.push_back({1.0, {{2 * p, true}, {2 * p + 1, false}}});
  return out;
}

FermionicOp s_z(int n_mo) {
  FermionicOp out;
  for (int p = 0; p < n_mo; ++p) {
    out += number(2 * p).scaled(0.5);
    out += number(2 * p + 1).scaled(-0.5);
  }
  return out;
}

FermionicOp s_squared(int n_mo) {
  const FermionicOp sp = s_plus(n_mo);
  const FermionicOp sm = sp.adjoint();
  const FermionicOp sz = s_z(n_mo);
  FermionicOp out = sm * sp;  // S-S+
  out += sz * sz;
  out += sz;
  return out;
}

}  // namespace ops

bool apply_term(const std::vector<Ladder>& lops, Onv in, Onv& out, int& sign) {
  Onv m = in;
  int s = 1;
  for (auto it = lops.rbegin(); it != lops.rend(); ++it) {
    const Onv bit = 1u << it->so;
    if (it->create) {
      if (m & bit) return false;
      if (std::popcount(m & (bit - 1u)) & 1) s = -s;
      m |= bit;
    } else {
      if (!(m & bit)) return false;
      if (std::popcount(m & (bit - 1u)) & 1) s = -s;
      m &= ~bit;
    }
  }
  out = m;
  sign = s;
  return true;
}

Matrix to_matrix(const FermionicOp& op, const SectorBasis& basis) {
  const int dim = basis.size();
  Matrix M = Matrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const Onv src = basis.onv(j);
    for (const auto& term : op.terms) {
      Onv dst;
      int sign;
      if (!apply_term(term.ops, src, dst, sign)) continue;
      const int i = basis.index_of(dst);
      if (i < 0) throw Error("to_matrix: operator maps outside the basis");
      M(i, j) += sign * term.coeff;
    }
  }
  return M;
}

OperatorMatrix build_excitation_matrix(const SectorBasis& basis, ExcitationKind kind,
                                       const std::vector<int>& indices) {
  auto in_range = [&](int idx, int limit) {
    if (idx < 0 || idx >= limit) throw Error("build_excitation_matrix: index out of range");
  };
  FermionicOp op;
  switch (kind) {
    case ExcitationKind::SpinOrbital:
      if (indices.size() != 2) throw Error("SpinOrbital kind takes two spin-orbital indices");
      in_range(indices[0], 2 * basis.n_mo());
      in_range(indices[1], 2 * basis.n_mo());
      op = ops::creation(indices[0]) * ops::annihilation(indices[1]);
      break;
    case ExcitationKind::SingletE:
    case ExcitationKind::EMinus:
      if (indices.size() != 2) throw Error("SingletE/EMinus kinds take two orbital indices");
      in_range(indices[0], basis.n_mo());
      in_range(indices[1], basis.n_mo());
      op = kind == ExcitationKind::SingletE ? ops::e_singlet(indices[0], indices[1])
                                            : ops::e_minus(indices[0], indices[1]);
      break;
    case ExcitationKind::TwoElectronE:
      if (indices.size() != 4) throw Error("TwoElectronE kind takes four orbital indices");
      for (int idx : indices) in_range(idx, basis.n_mo());
      op = ops::e2_singlet(indices[0], indices[1], indices[2], indices[3]);
      break;
  }
  OperatorMatrix out;
  out.basis = &basis;
  out.m = to_matrix(op, basis);
  out.hermitian = false;
  return out;
}

OperatorMatrix build_hamiltonian(const orbrot::MOIntegrals& mo, const SectorBasis& basis) {
  if (mo.n_mo != basis.n_mo()) throw Error("build_hamiltonian: dimension mismatch");
  OperatorMatrix out;
  out.basis = &basis;
  out.m = to_matrix(ops::hamiltonian(mo), basis);
  out.m += mo.e_nuc * Matrix::Identity(basis.size(), basis.size());
  out.hermitian = true;
  return out;
}

HamiltonianBuilder::HamiltonianBuilder(const SectorBasis& basis) : basis_(&basis), n_(basis.n_mo()) {
  e1_.reserve(n_ * n_);
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q) e1_.push_back(to_matrix(ops::e_singlet(p, q), basis));
  e2_.reserve(n_ * n_ * n_ * n_);
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) {
          Matrix m = e1_[p * n_ + q] * e1_[r * n_ + s];
          if (q == r) m -= e1_[p * n_ + s];
          e2_.push_back(std::move(m));
        }
}

Matrix HamiltonianBuilder::build(const orbrot::MOIntegrals& mo) const {
  if (mo.n_mo != n_) throw Error("HamiltonianBuilder: dimension mismatch");
  const int dim = basis_->size();
  Matrix H = mo.e_nuc * Matrix::Identity(dim, dim);
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q) {
      const double hpq = mo.h(p, q);
      if (std::abs(hpq) > 1e-16) H += hpq * e1_[p * n_ + q];
    }
  int idx = 0;
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s, ++idx) {
          const double g = mo.g(p, q, r, s);
          if (std::abs(g) > 1e-16) H += 0.5 * g * e2_[idx];
        }
  return H;
}

Matrix build_one_electron_operator(const Matrix& m, const SectorBasis& basis) {
  const int n = basis.n_mo();
  if (m.rows() != n || m.cols() != n)
    throw Error("build_one_electron_operator: dimension mismatch");
  Matrix out = Matrix::Zero(basis.size(), basis.size());
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (std::abs(m(p, q)) > 1e-16) out += m(p, q) * to_matrix(ops::e_singlet(p, q), basis);
  return out;
}

FCISolution fci_solve(const OperatorMatrix& hamiltonian) {
  if (!hamiltonian.basis) throw Error("fci_solve: missing basis handle");
  const Matrix& H = hamiltonian.m;
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("fci_solve: Hamiltonian is not Hermitian");
  const SectorBasis& basis = *hamiltonian.basis;

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.transpose()));
  FCISolution sol;
  sol.eigenvalues = es.eigenvalues();
  sol.eigenvectors = es.eigenvectors();
  sol.e0 = sol.eigenvalues(0);

  // Resolve near-degenerate ground subspaces deterministically by total spin.
  const double tol = 1e-10 * std::max(1.0, std::abs(sol.e0));
  int ndeg = 1;
  while (ndeg < sol.eigenvalues.size() && sol.eigenvalues(ndeg) - sol.e0 <= tol) ++ndeg;
  Vector ground = sol.eigenvectors.col(0);
  if (ndeg > 1) {
    sol.degenerate = true;
    const Matrix s2 = to_matrix(ops::s_squared(basis.n_mo()), basis);
    const Matrix W = sol.eigenvectors.leftCols(ndeg);
    Eigen::SelfAdjointEigenSolver<Matrix> ss(W.transpose() * s2 * W);
    ground = W * ss.eigenvectors().col(0);
  }

  // Global phase: CSF coefficient positive, else first nonzero positive.
  int anchor = -1;
  if (!basis.is_full_space() && basis.n_electrons() > 0 && basis.n_electrons() % 2 == 0) {
    const int csf = basis.csf_index();
    if (std::abs(ground(csf)) > 1e-12) anchor = csf;
  }
  if (anchor < 0)
    for (int i = 0; i < ground.size(); ++i)
      if (std::abs(ground(i)) > 1e-12) {
        anchor = i;
        break;
      }
  if (anchor >= 0 && ground(anchor) < 0.0) ground = -ground;
  sol.ground = ground;

  if (basis.n_mo() == 2 && basis.n_electrons() == 2) {
    const int i1100 = basis.index_of(onv_from_string("1100"));
    const int i1001 = basis.index_of(onv_from_string("1001"));
    const int i0110 = basis.index_of(onv_from_string("0110"));
    const int i0011 = basis.index_of(onv_from_string("0011"));
    if (i1100 >= 0 && i1001 >= 0 && i0110 >= 0 && i0011 >= 0) {
      sol.c_1100 = ground(i1100);
      sol.c_s = (ground(i1001) - ground(i0110)) / std::sqrt(2.0);
      sol.c_0011 = ground(i0011);
    }
  }
  return sol;
}

Vector embed_full(const Vector& sector_state, const SectorBasis& sector) {
  if (sector_state.size() != sector.size()) throw Error("embed_full: dimension mismatch");
  Vector full = Vector::Zero(1 << (2 * sector.n_mo()));
  for (int i = 0; i < sector.size(); ++i) full(sector.onv(i)) = sector_state(i);
  return full;
}

}  // namespace qlr::fockspace
