// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace qlr::sampler {

namespace fs = qlr::fockspace;

PauliString PauliString::from_letters(const std::string& letters) {
  PauliString p;
  p.n_qubits = static_cast<int>(letters.size());
  for (int q = 0; q < p.n_qubits; ++q) {
    switch (letters[q]) {
      case 'I': break;
      case 'X': p.x |= 1u << q; break;
      case 'Y': p.x |= 1u << q; p.z |= 1u << q; break;
      case 'Z': p.z |= 1u << q; break;
      default: throw Error("PauliString: bad letter");
    }
  }
  return p;
}

char PauliString::letter(int q) const {
  const bool xb = x >> q & 1u, zb = z >> q & 1u;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliString::letters() const {
  std::string s(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) s[q] = letter(q);
  return s;
}

std::pair<std::complex<double>, PauliString> multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits != b.n_qubits) throw Error("PauliString multiply: size mismatch");
  // Per-qubit phase table: L1*L2 = phase * L3 with the standard matrices.
  // Exponent of i accumulated mod 4.
  int phase = 0;
  for (int q = 0; q < a.n_qubits; ++q) {
    const int xa = a.x >> q & 1u, za = a.z >> q & 1u;
    const int xb = b.x >> q & 1u, zb = b.z >> q & 1u;
    if ((xa | za) == 0 || (xb | zb) == 0) continue;
    if (xa == xb && za == zb) continue;  // L*L = I
    // X*Y=iZ, Y*Z=iX, Z*X=iY; reversed order gives -i.
    const int la = xa && za ? 1 : (xa ? 0 : 2);  // X=0, Y=1, Z=2
    const int lb = xb && zb ? 1 : (xb ? 0 : 2);
    phase += ((lb - la + 3) % 3 == 1) ? 1 : 3;
  }
  static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  PauliString out{a.x ^ b.x, a.z ^ b.z, a.n_qubits};
  return {table[phase & 3], out};
}

ComplexMatrix pauli_matrix(const PauliString& p) {
  const int dim = 1 << p.n_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  const int ny = std::popcount(p.x & p.z);
  static const std::complex<double> itab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(dim); ++c) {
    const std::complex<double> phase =
        itab[ny & 3] * ((std::popcount(c & p.z) & 1) ? -1.0 : 1.0);
    m(c ^ p.x, c) = phase;
  }
  return m;
}

void PauliSum::add(const PauliString& p, std::complex<double> coeff) {
  if (p.n_qubits != n_qubits_) throw Error("PauliSum: qubit count mismatch");
  auto key = std::make_pair(p.x, p.z);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (std::abs(coeff) > 0.0) terms_.emplace(key, coeff);
  } else {
    it->second += coeff;
  }
}

void PauliSum::add_scaled(const PauliSum& other, std::complex<double> scale) {
  for (const auto& [key, c] : other.terms_)
    add({key.first, key.second, n_qubits_}, scale * c);
}

PauliSum PauliSum::times(const PauliSum& other) const {
  PauliSum out(n_qubits_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : other.terms_) {
      auto [phase, p] = multiply({ka.first, ka.second, n_qubits_},
                                 {kb.first, kb.second, n_qubits_});
      out.add(p, phase * ca * cb);
    }
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto& [key, c] : terms_)
    out.add({key.first, key.second, n_qubits_}, std::conj(c));
  return out;
}

void PauliSum::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = std::abs(it->second) <= tol ? terms_.erase(it) : std::next(it);
}

std::complex<double> PauliSum::coeff(const PauliString& p) const {
  auto it = terms_.find({p.x, p.z});
  return it == terms_.end() ? std::complex<double>(0, 0) : it->second;
}

ComplexMatrix PauliSum::to_matrix() const {
  const int dim = 1 << n_qubits_;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& [key, c] : terms_)
    m += c * pauli_matrix({key.first, key.second, n_qubits_});
  return m;
}

PauliSum jw_map(const fs::FermionicOp& op, int n_qubits) {
  auto ladder_image = [n_qubits](const fs::Ladder& l) {
    PauliSum s(n_qubits);
    std::uint32_t zstring = (1u << l.so) - 1u;
    PauliString px{1u << l.so, zstring, n_qubits};
    PauliString py{1u << l.so, zstring | (1u << l.so), n_qubits};
    // a = Z...Z (X + iY)/2, a^dag = Z...Z (X - iY)/2
    s.add(px, {0.5, 0});
    s.add(py, l.create ? std::complex<double>(0, -0.5) : std::complex<double>(0, 0.5));
    return s;
  };
  PauliSum out(n_qubits);
  for (const auto& term : op.terms) {
    PauliSum acc(n_qubits);
    acc.add(PauliString::identity(n_qubits), term.coeff);
    for (const auto& l : term.ops) acc = acc.times(ladder_image(l));
    out.add_scaled(acc, 1.0);
  }
  out.prune();
  return out;
}

namespace {

// Recursive Pauli expansion over the top (most significant) qubit; cost
// O(4^n n) rather than 16^n of the naive trace formula.
void decompose_rec(const ComplexMatrix& m, int n, std::uint32_t x, std::uint32_t z,
                   std::complex<double> scale, PauliSum& out, double prune) {
  if (n == 0) {
    const std::complex<double> c = scale * m(0, 0);
    if (std::abs(c) > prune) out.add({x, z, out.n_qubits()}, c);
    return;
  }
  const int half = m.rows() / 2;
  const auto m00 = m.topLeftCorner(half, half);
  const auto m01 = m.topRightCorner(half, half);
  const auto m10 = m.bottomLeftCorner(half, half);
  const auto m11 = m.bottomRightCorner(half, half);
  const std::uint32_t bit = 1u << (n - 1);
  const std::complex<double> i(0, 1);
  decompose_rec(0.5 * (m00 + m11), n - 1, x, z, scale, out, prune);                 // I
  decompose_rec(0.5 * (m01 + m10), n - 1, x | bit, z, scale, out, prune);           // X
  decompose_rec(0.5 * i * (m01 - m10), n - 1, x | bit, z | bit, scale, out, prune); // Y
  decompose_rec(0.5 * (m00 - m11), n - 1, x, z | bit, scale, out, prune);           // Z
}

}  // namespace

PauliSum pauli_decompose(const ComplexMatrix& m, double prune) {
  const int dim = static_cast<int>(m.rows());
  int n = 0;
  while ((1 << n) < dim) ++n;
  if ((1 << n) != dim || m.cols() != dim) throw Error("pauli_decompose: dimension is not 2^n");
  PauliSum out(n);
  decompose_rec(m, n, 0, 0, 1.0, out, prune);
  return out;
}

PauliSum pauli_decompose(const Matrix& m, double prune) {
  return pauli_decompose(ComplexMatrix(m.cast<std::complex<double>>()), prune);
}

double exact_pauli_expectation(const Vector& state_full, const PauliString& p) {
  if (state_full.size() != (1 << p.n_qubits))
    throw Error("exact_pauli_expectation: state dimension mismatch");
  static const std::complex<double> itab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> yphase = itab[std::popcount(p.x & p.z) & 3];
  std::complex<double> acc(0, 0);
  for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(state_full.size()); ++c) {
    const double amp = state_full(c);
    if (amp == 0.0) continue;
    const double sign = (std::popcount(c & p.z) & 1) ? -1.0 : 1.0;
    acc += state_full(c ^ p.x) * yphase * sign * amp;
  }
  return acc.real();
}

std::uint64_t SplitMix64::operator()() {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derived_seed(std::uint64_t master, std::uint64_t repetition, std::uint64_t element,
                           std::uint64_t term) {
  SplitMix64 g{master};
  g.s ^= g() + 0x9E3779B97F4A7C15ull * (repetition + 1);
  g.s ^= g() + 0xBF58476D1CE4E5B9ull * (element + 1);
  g.s ^= g() + 0x94D049BB133111EBull * (term + 1);
  return g();
}

double sample_expectation(double exact, long shots, SplitMix64& rng) {
  if (shots <= 0) return exact;
  if (exact < -1.0 - 1e-9 || exact > 1.0 + 1e-9)
    throw Error("sample_expectation: expectation outside [-1, 1]");
  const double p = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
  long k;
  if (p <= 0.0) {
    k = 0;
  } else if (p >= 1.0) {
    k = shots;
  } else {
    std::binomial_distribution<long> dist(shots, p);
    k = dist(rng);
  }
  return 2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0;
}

NoisyResponseSampler::NoisyResponseSampler(response::Parameterization param,
                                           const fs::SectorBasis& sector,
                                           const Vector& ground_sector,
                                           const orbrot::MOIntegrals& mo,
                                           const response::ExcitationOperatorSet& excitations,
                                           const ShotPlan& plan)
    : param_(param), plan_(plan) {
  if (param != response::Parameterization::Naive && param != response::Parameterization::Proj)
    throw Error("NoisyResponseSampler: only naive and proj metrics are sampled (sc/st have "
                "identity metric)");
  n_ops_ = excitations.size();
  n_qubits_ = 2 * sector.n_mo();

  response::GroundStateRef gs{ground_sector, nullptr, Vector()};
  const fs::HamiltonianBuilder hb(sector);
  dense_ = response::build_response_matrices(param, gs, hb.build(mo), excitations);

  // Full-qubit-space embeddings.
  const fs::SectorBasis full = fs::SectorBasis::full_space(sector.n_mo());
  psi_full_ = fs::embed_full(ground_sector, sector);
  for (int c = 0; c < psi_full_.size(); ++c)
    if (psi_full_(c) != 0.0) psi_support_.emplace_back(static_cast<std::uint32_t>(c), psi_full_(c));

  h_full_ = fs::to_matrix(fs::ops::hamiltonian(mo), full);
  h_full_ += mo.e_nuc * Matrix::Identity(full.size(), full.size());

  r_full_.resize(n_ops_);
  std::vector<Matrix> g_full(n_ops_);
  for (int k = 0; k < n_ops_; ++k) g_full[k] = fs::to_matrix(excitations.g_ops[k], full);
  if (param == response::Parameterization::Naive) {
    r_full_ = std::move(g_full);
  } else {
    const Matrix p_proj = psi_full_ * psi_full_.transpose();
    for (int k = 0; k < n_ops_; ++k) {
      const double gk = psi_full_.dot(g_full[k] * psi_full_);
      r_full_[k] = g_full[k] * p_proj - gk * Matrix::Identity(p_proj.rows(), p_proj.cols());
    }
  }
}

std::vector<response::ResponseMatrices> NoisyResponseSampler::sample_all() const {
  const int reps = std::max(1, plan_.repetitions);
  std::vector<response::ResponseMatrices> out(reps, dense_);
  for (auto& rm : out) {
    rm.a.setZero();
    rm.b.setZero();
    rm.sigma.setZero();
    rm.delta.setZero();
    rm.residual_a = rm.residual_b = rm.residual_sigma = rm.residual_delta = 0.0;
  }

  // Fast expectation over the (sparse) embedded state.
  auto expectation = [&](const PauliString& p) {
    static const std::complex<double> itab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> yphase = itab[std::popcount(p.x & p.z) & 3];
    std::complex<double> acc(0, 0);
    for (const auto& [mask, amp] : psi_support_) {
      const double sign = (std::popcount(mask & p.z) & 1) ? -1.0 : 1.0;
      acc += psi_full_(mask ^ p.x) * yphase * sign * amp;
    }
    return acc.real();
  };

  auto process_element = [&](int kind, int i, int j, const Matrix& op) {
    // The antisymmetric real part of the operator cannot contribute to the
    // (real) element value, so only the Hermitian part is expanded; this is
    // identical to sampling the raw commutator string and taking the real
    // part of sum coeff*estimate.
    const Matrix sym = 0.5 * (op + op.transpose());
    PauliSum ps = pauli_decompose(sym, 1e-14);
    const std::uint64_t element_id =
        static_cast<std::uint64_t>(kind) * n_ops_ * n_ops_ + static_cast<std::uint64_t>(i) * n_ops_ + j;

    std::vector<std::pair<double, double>> coeff_exact;  // (real coeff, <P>)
    coeff_exact.reserve(ps.size());
    for (const auto& [key, c] : ps.terms()) {
      const PauliString p{key.first, key.second, n_qubits_};
      coeff_exact.emplace_back(c.real(), expectation(p));
    }

    for (int rep = 0; rep < reps; ++rep) {
      double value = 0.0;
      if (plan_.shots <= 0) {
        for (const auto& [c, e] : coeff_exact) value += c * e;
      } else {
        for (std::uint64_t t = 0; t < coeff_exact.size(); ++t) {
          SplitMix64 rng{derived_seed(plan_.master_seed, rep, element_id, t)};
          value += coeff_exact[t].first *
                   sample_expectation(coeff_exact[t].second, plan_.shots, rng);
        }
      }
      Matrix& target = kind == 0 ? out[rep].a : kind == 1 ? out[rep].b : out[rep].sigma;
      target(i, j) = value;
    }
  };

  for (int j = 0; j < n_ops_; ++j) {
    const Matrix hr = h_full_ * r_full_[j] - r_full_[j] * h_full_;
    const Matrix hrt = h_full_ * r_full_[j].transpose() - r_full_[j].transpose() * h_full_;
    for (int i = 0; i < n_ops_; ++i) {
      const Matrix rit = r_full_[i].transpose();
      process_element(0, i, j, rit * hr - hr * rit);
      process_element(1, i, j, rit * hrt - hrt * rit);
      process_element(2, i, j, rit * r_full_[j] - r_full_[j] * rit);
    }
  }

  for (auto& rm : out) {
    rm.residual_a = (rm.a - rm.a.transpose()).cwiseAbs().maxCoeff();
    rm.residual_b = (rm.b - rm.b.transpose()).cwiseAbs().maxCoeff();
    rm.residual_sigma = (rm.sigma - rm.sigma.transpose()).cwiseAbs().maxCoeff();
    rm.a = 0.5 * (rm.a + rm.a.transpose()).eval();
    rm.b = 0.5 * (rm.b + rm.b.transpose()).eval();
    rm.sigma = 0.5 * (rm.sigma + rm.sigma.transpose()).eval();
    rm.delta.setZero();
  }
  return out;
}

response::ResponseMatrices build_noisy_response_matrices(
    response::Parameterization param, const fs::SectorBasis& sector, const Vector& ground_sector,
    const orbrot::MOIntegrals& mo, const response::ExcitationOperatorSet& excitations,
    const ShotPlan& plan) {
  ShotPlan one = plan;
  one.repetitions = 1;
  return NoisyResponseSampler(param, sector, ground_sector, mo, excitations, one)
      .sample_all()
      .front();
}

std::vector<EnsembleRow> run_noise_ensemble(const orbrot::MOIntegrals& mo,
                                            const fs::SectorBasis& sector,
                                            const ansatz::AnsatzProgram& program,
                                            const EnsembleOptions& opt) {
  const fs::HamiltonianBuilder hb(sector);
  const response::ExcitationOperatorSet excitations =
      response::build_excitation_basis(sector, sector.csf_onv());

  std::vector<EnsembleRow> rows;
  rows.reserve(opt.kappa_grid.size());
  std::optional<Vector> theta_prev;

  for (double kappa : opt.kappa_grid) {
    orbrot::KappaParams kp(mo.n_mo);
    kp.set(opt.kappa_p, opt.kappa_q, kappa);
    const orbrot::MOIntegrals mo_rot = orbrot::rotate_integrals(mo, kp);
    const Matrix h = hb.build(mo_rot);

    fockspace::OperatorMatrix hop{&sector, h, true};
    const fockspace::FCISolution fci = fockspace::fci_solve(hop);

    ansatz::OptimizeOptions oopt = opt.optimize;
    oopt.target_energy = fci.e0;
    if (theta_prev) {
      oopt.theta0 = theta_prev;
      oopt.quick = true;
    }
    const ansatz::GroundState gs = ansatz::optimize_ground_state(program, h, oopt);
    theta_prev = gs.theta;

    const NoisyResponseSampler sampler(opt.param, sector, gs.state, mo_rot, excitations, opt.plan);

    EnsembleRow row;
    row.kappa = kappa;
    row.seed = opt.plan.master_seed;
    row.cond_sigma = response::condition_number(sampler.dense_reference().sigma);

    std::vector<double> omegas;
    for (const auto& rm : sampler.sample_all()) {
      try {
        const response::ResponseSolution sol = response::solve_response(rm, opt.solve);
        if (sol.omega.empty()) {
          ++row.n_excluded;
        } else {
          omegas.push_back(sol.omega.front());
        }
      } catch (const Error&) {
        ++row.n_excluded;
      }
    }
    if (!omegas.empty()) {
      const double mean = std::accumulate(omegas.begin(), omegas.end(), 0.0) / omegas.size();
      row.mean_omega = mean;
      if (omegas.size() > 1) {
        double ss = 0.0;
        for (double w : omegas) ss += (w - mean) * (w - mean);
        row.std_omega = std::sqrt(ss / (omegas.size() - 1));
      }
    } else {
      row.mean_omega = std::numeric_limits<double>::quiet_NaN();
      row.std_omega = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qlr::sampler
