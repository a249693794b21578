// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/ansatz.hpp"

#include <cmath>
#include <complex>

namespace qlr::ansatz {

namespace fs = qlr::fockspace;

std::string GeneratorInfo::label() const {
  switch (kind) {
    case Kind::Single:
      return "T1(" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + ")";
    case Kind::Double:
      return "T2(" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," +
             std::to_string(idx[2]) + "," + std::to_string(idx[3]) + ")";
    case Kind::DoublePrime:
      return "T2'(" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," +
             std::to_string(idx[2]) + "," + std::to_string(idx[3]) + ")";
    case Kind::PairedDouble:
      return "Tpair(" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + ")";
  }
  return "?";
}

namespace {

bool is_closed_shell(Onv reference, int n_mo) {
  for (int p = 0; p < n_mo; ++p) {
    const bool a = reference >> (2 * p) & 1u;
    const bool b = reference >> (2 * p + 1) & 1u;
    if (a != b) return false;
  }
  return true;
}

// T1_pq = E_pq / sqrt(2)
fs::FermionicOp t1_op(int p, int q) { return fs::ops::e_singlet(p, q).scaled(1.0 / std::sqrt(2.0)); }

// T2_pqrs = (E_pq E_rs + E_pr E_sq) / (2 sqrt((1+d_pr)(1+d_qs)))
fs::FermionicOp t2_op(int p, int q, int r, int s) {
  const double norm = 2.0 * std::sqrt((1.0 + (p == r ? 1.0 : 0.0)) * (1.0 + (q == s ? 1.0 : 0.0)));
  fs::FermionicOp op = fs::ops::e_singlet(p, q) * fs::ops::e_singlet(r, s);
  op += fs::ops::e_singlet(p, r) * fs::ops::e_singlet(s, q);
  return op.scaled(1.0 / norm);
}

// T2'_pqrs = (E_pq E_rs - E_ps E_rq) / (2 sqrt(3))
fs::FermionicOp t2p_op(int p, int q, int r, int s) {
  fs::FermionicOp op = fs::ops::e_singlet(p, q) * fs::ops::e_singlet(r, s);
  op += (fs::ops::e_singlet(p, s) * fs::ops::e_singlet(r, q)).scaled(-1.0);
  return op.scaled(1.0 / (2.0 * std::sqrt(3.0)));
}

// Paired double moving both electrons of orbital q into orbital p.
fs::FermionicOp paired_op(int p, int q) {
  return fs::ops::creation(2 * p) * fs::ops::annihilation(2 * q) * fs::ops::creation(2 * p + 1) *
         fs::ops::annihilation(2 * q + 1);
}

Matrix anti_hermitian_part(const fs::FermionicOp& t, const SectorBasis& basis) {
  const Matrix m = fs::to_matrix(t, basis);
  return m - m.transpose();
}

// Stable e^{(a+b)/2} sinch((a-b)/2) divided difference of exp.
std::complex<double> exp_divided_difference(std::complex<double> a, std::complex<double> b) {
  const std::complex<double> h = 0.5 * (a - b);
  std::complex<double> sinch;
  if (std::abs(h) < 1e-6) {
    const std::complex<double> h2 = h * h;
    sinch = 1.0 + h2 / 6.0 + h2 * h2 / 120.0;
  } else {
    sinch = std::sinh(h) / h;
  }
  return std::exp(0.5 * (a + b)) * sinch;
}

}  // namespace

ClusterGeneratorSet build_cluster_generators(const SectorBasis& basis, Onv reference) {
  if (!is_closed_shell(reference, basis.n_mo()))
    throw Error("build_cluster_generators: open-shell references are not supported");

  ClusterGeneratorSet set;
  set.basis = &basis;
  set.reference = reference;

  const int n = basis.n_mo();
  std::vector<std::pair<GeneratorInfo, fs::FermionicOp>> candidates;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < p; ++q)
      candidates.push_back({{GeneratorInfo::Kind::Single, {p, q, 0, 0}}, t1_op(p, q)});

  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < p; ++q) pairs.emplace_back(p, q);
  for (size_t i = 0; i < pairs.size(); ++i)
    for (size_t j = 0; j <= i; ++j) {
      const auto [p, q] = pairs[i];
      const auto [r, s] = pairs[j];
      candidates.push_back({{GeneratorInfo::Kind::Double, {p, q, r, s}}, t2_op(p, q, r, s)});
      candidates.push_back({{GeneratorInfo::Kind::DoublePrime, {p, q, r, s}}, t2p_op(p, q, r, s)});
    }

  // Keep a generator only if it is nonzero in the sector and enlarges the
  // linear span of the kept set (modified Gram-Schmidt on vectorized sigmas).
  std::vector<Vector> ortho;
  for (auto& [info, op] : candidates) {
    const Matrix sigma = anti_hermitian_part(op, basis);
    const double norm = sigma.norm();
    if (norm < 1e-12) {
      set.dropped.push_back({info, "null in sector"});
      continue;
    }
    Vector v = Eigen::Map<const Vector>(sigma.data(), sigma.size());
    for (const auto& u : ortho) v -= u.dot(v) * u;
    if (v.norm() < 1e-10 * norm) {
      set.dropped.push_back({info, "linearly dependent"});
      continue;
    }
    ortho.push_back(v.normalized());
    set.sigma.push_back(sigma);
    set.info.push_back(info);
  }
  return set;
}

AnsatzProgram make_uccsd_program(const ClusterGeneratorSet& generators) {
  AnsatzProgram prog;
  prog.kind = AnsatzKind::UccsdSingleExponential;
  prog.basis = generators.basis;
  prog.reference = generators.reference;
  prog.generators = generators.sigma;
  for (int i = 0; i < static_cast<int>(prog.generators.size()); ++i)
    prog.factors.push_back({i, i});
  prog.n_params = static_cast<int>(prog.generators.size());
  return prog;
}

AnsatzProgram make_tups_program(const SectorBasis& basis, Onv reference, int layers) {
  if (layers < 1) throw Error("make_tups_program: need at least one layer");
  if (!is_closed_shell(reference, basis.n_mo()))
    throw Error("make_tups_program: open-shell references are not supported");

  AnsatzProgram prog;
  prog.kind = AnsatzKind::Tups;
  prog.basis = &basis;
  prog.reference = reference;

  const int n = basis.n_mo();
  // Distinct generators per adjacent pair: the single and the paired double.
  std::vector<int> single_gen(n - 1), pair_gen(n - 1);
  for (int p = 0; p + 1 < n; ++p) {
    single_gen[p] = static_cast<int>(prog.generators.size());
    prog.generators.push_back(anti_hermitian_part(t1_op(p + 1, p), basis));
    pair_gen[p] = static_cast<int>(prog.generators.size());
    prog.generators.push_back(anti_hermitian_part(paired_op(p + 1, p), basis));
  }

  std::vector<int> tile_starts;
  for (int p = 1; p + 1 < n; p += 2) tile_starts.push_back(p);  // odd-start sweep
  for (int p = 0; p + 1 < n; p += 2) tile_starts.push_back(p);  // even-start sweep

  int slot = 0;
  for (int layer = 0; layer < layers; ++layer)
    for (int p : tile_starts) {
      // exp(tA s1) exp(tB pair) exp(tC s1): rightmost factor applies first.
      prog.factors.push_back({single_gen[p], slot++});
      prog.factors.push_back({pair_gen[p], slot++});
      prog.factors.push_back({single_gen[p], slot++});
    }
  prog.n_params = slot;
  return prog;
}

AnsatzEvaluator::AnsatzEvaluator(const AnsatzProgram& program) : prog_(&program) {
  const SectorBasis& basis = *prog_->basis;
  reference_state_ = Vector::Zero(basis.size());
  const int ref_idx = basis.index_of(prog_->reference);
  if (ref_idx < 0) throw Error("AnsatzEvaluator: reference not in basis");
  reference_state_(ref_idx) = 1.0;

  if (prog_->kind == AnsatzKind::Tups) {
    exp_.resize(prog_->generators.size());
    for (size_t g = 0; g < prog_->generators.size(); ++g) {
      const ComplexMatrix herm =
          std::complex<double>(0, 1) * prog_->generators[g].cast<std::complex<double>>();
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
      exp_[g].v = es.eigenvectors();
      exp_[g].w = es.eigenvalues();
    }
  }
}

Vector AnsatzEvaluator::apply_exp(int gen, double theta, const Vector& x) const {
  // exp(theta*sigma) = V exp(-i theta w) V^dag with i*sigma = V w V^dag
  const auto& e = exp_[gen];
  ComplexVector y = e.v.adjoint() * x.cast<std::complex<double>>();
  for (int i = 0; i < y.size(); ++i)
    y(i) *= std::exp(std::complex<double>(0, -theta * e.w(i)));
  return (e.v * y).real();
}

Vector AnsatzEvaluator::state(const Vector& theta) const {
  if (theta.size() != prog_->n_params) throw Error("AnsatzEvaluator: theta size mismatch");
  if (prog_->kind == AnsatzKind::UccsdSingleExponential) {
    Matrix total = Matrix::Zero(reference_state_.size(), reference_state_.size());
    for (const auto& f : prog_->factors) total += theta(f.slot) * prog_->generators[f.generator];
    const ComplexMatrix herm = std::complex<double>(0, 1) * total.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    ComplexVector y = es.eigenvectors().adjoint() * reference_state_.cast<std::complex<double>>();
    for (int i = 0; i < y.size(); ++i)
      y(i) *= std::exp(std::complex<double>(0, -es.eigenvalues()(i)));
    return (es.eigenvectors() * y).real();
  }
  Vector psi = reference_state_;
  for (const auto& f : prog_->factors) psi = apply_exp(f.generator, theta(f.slot), psi);
  return psi;
}

Matrix AnsatzEvaluator::unitary(const Vector& theta) const {
  const int dim = static_cast<int>(reference_state_.size());
  Matrix u = Matrix::Identity(dim, dim);
  if (prog_->kind == AnsatzKind::UccsdSingleExponential) {
    Matrix total = Matrix::Zero(dim, dim);
    for (const auto& f : prog_->factors) total += theta(f.slot) * prog_->generators[f.generator];
    const ComplexMatrix herm = std::complex<double>(0, 1) * total.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    ComplexVector phases(dim);
    for (int i = 0; i < dim; ++i)
      phases(i) = std::exp(std::complex<double>(0, -es.eigenvalues()(i)));
    return (es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint()).real();
  }
  for (const auto& f : prog_->factors) {
    const auto& e = exp_[f.generator];
    ComplexVector phases(dim);
    for (int i = 0; i < dim; ++i)
      phases(i) = std::exp(std::complex<double>(0, -theta(f.slot) * e.w(i)));
    u = ((e.v * phases.asDiagonal() * e.v.adjoint()).real() * u).eval();
  }
  return u;
}

double AnsatzEvaluator::energy(const Matrix& h, const Vector& theta) const {
  const Vector psi = state(theta);
  return psi.dot(h * psi);
}

Vector AnsatzEvaluator::gradient(const Matrix& h, const Vector& theta) const {
  Vector grad = Vector::Zero(prog_->n_params);
  if (prog_->kind == AnsatzKind::Tups) {
    // Adjoint sweep: dE/dt_k = 2 <lambda_k| sigma_k |f_k>.
    const int m = static_cast<int>(prog_->factors.size());
    std::vector<Vector> f(m + 1);
    f[0] = reference_state_;
    for (int k = 0; k < m; ++k) {
      const auto& fac = prog_->factors[k];
      f[k + 1] = apply_exp(fac.generator, theta(fac.slot), f[k]);
    }
    Vector lambda = h * f[m];
    for (int k = m - 1; k >= 0; --k) {
      const auto& fac = prog_->factors[k];
      grad(fac.slot) += 2.0 * lambda.dot(prog_->generators[fac.generator] * f[k + 1]);
      lambda = apply_exp(fac.generator, -theta(fac.slot), lambda);
    }
    return grad;
  }

  // Single exponential: divided-difference (Daleckii-Krein) derivative of exp.
  const int dim = static_cast<int>(reference_state_.size());
  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& f : prog_->factors) total += theta(f.slot) * prog_->generators[f.generator];
  const ComplexMatrix herm = std::complex<double>(0, 1) * total.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  const ComplexMatrix& v = es.eigenvectors();
  const Vector& w = es.eigenvalues();

  ComplexMatrix phi(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      phi(a, b) = exp_divided_difference(std::complex<double>(0, -w(a)),
                                         std::complex<double>(0, -w(b)));
  const ComplexVector rref = v.adjoint() * reference_state_.cast<std::complex<double>>();
  ComplexVector phases(dim);
  for (int i = 0; i < dim; ++i) phases(i) = std::exp(std::complex<double>(0, -w(i)));
  const Vector psi = (v * (phases.asDiagonal() * rref)).real();
  const Vector hpsi = h * psi;
  const ComplexVector hpsic = v.adjoint() * hpsi.cast<std::complex<double>>();

  for (const auto& f : prog_->factors) {
    const ComplexMatrix st = v.adjoint() * prog_->generators[f.generator].cast<std::complex<double>>() * v;
    const ComplexVector dpsi = (st.cwiseProduct(phi)) * rref;
    grad(f.slot) += 2.0 * (hpsic.dot(dpsi)).real();
  }
  return grad;
}

Vector evaluate_ansatz_state(const AnsatzProgram& program, const Vector& theta) {
  return AnsatzEvaluator(program).state(theta);
}

GroundState optimize_ground_state(const AnsatzProgram& program, const Matrix& hamiltonian,
                                  const OptimizeOptions& opt) {
  const AnsatzEvaluator ev(program);
  GroundState gs;
  if (program.n_params == 0) {
    gs.theta = Vector::Zero(0);
    gs.state = evaluate_ansatz_state(program, gs.theta);
    gs.energy = gs.state.dot(hamiltonian * gs.state);
    return gs;
  }

  const opt::Objective f = [&](const Vector& t) { return ev.energy(hamiltonian, t); };
  const opt::Gradient g = [&](const Vector& t) { return ev.gradient(hamiltonian, t); };

  opt::BfgsOptions bopt;
  bopt.max_iter = opt.bfgs_max_iter;
  opt::NelderMeadOptions nopt;
  nopt.max_iter = opt.nm_max_iter;
  nopt.size_tol = 1e-12;

  int total_iters = 0;
  bool have_best = false;
  opt::Result best;
  auto consider = [&](const opt::Result& r) {
    total_iters += r.iterations;
    if (!have_best || r.f < best.f) {
      best = r;
      have_best = true;
    }
  };

  auto polish = [&](const Vector& t0) { consider(opt::bfgs(f, g, t0, bopt)); };
  auto full_run = [&](const Vector& t0) {
    const opt::Result nm = opt::nelder_mead(f, t0, nopt);
    total_iters += nm.iterations;
    polish(nm.x);
  };

  const Vector t0 = opt.theta0.value_or(Vector::Zero(program.n_params));
  auto reached_target = [&]() {
    return !opt.target_energy || (have_best && best.f - *opt.target_energy <= opt.target_tol);
  };

  polish(t0);
  if (!opt.quick || !reached_target()) {
    if (!reached_target() || !opt.quick) {
      if (!opt.quick) full_run(t0);
      if (!reached_target() && opt.theta0) full_run(Vector::Zero(program.n_params));
    }
    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> pert(-0.2, 0.2);
    for (int r = 0; r < opt.restarts && (!opt.quick || !reached_target()); ++r) {
      Vector t = best.x;
      for (int i = 0; i < t.size(); ++i) t(i) += pert(rng);
      full_run(t);
    }
  }

  if (opt.target_energy && best.f - *opt.target_energy > opt.target_tol)
    throw OptimizationError("optimize_ground_state: missed declared target energy by " +
                            std::to_string(best.f - *opt.target_energy) + " Hartree");

  gs.theta = best.x;
  gs.state = ev.state(gs.theta);
  gs.energy = gs.state.dot(hamiltonian * gs.state);
  gs.iterations = total_iters;
  gs.final_gradient_norm = ev.gradient(hamiltonian, gs.theta).norm();
  return gs;
}

RedundancyReport check_kappa_redundancy(const AnsatzProgram& program,
                                        const orbrot::MOIntegrals& mo, int p, int q,
                                        const std::vector<double>& grid,
                                        const OptimizeOptions& opt) {
  RedundancyReport rep;
  rep.p = p;
  rep.q = q;
  rep.grid = grid;

  const fockspace::HamiltonianBuilder hb(*program.basis);
  const Matrix h0 = hb.build(mo);
  const GroundState base = optimize_ground_state(program, h0, opt);
  rep.baseline_energy = base.energy;

  OptimizeOptions warm = opt;
  warm.theta0 = base.theta;
  warm.quick = true;
  warm.target_energy.reset();

  rep.energies.reserve(grid.size());
  Vector theta_prev = base.theta;
  for (size_t i = 0; i < grid.size(); ++i) {
    orbrot::KappaParams kappa(mo.n_mo);
    kappa.set(std::min(p, q), std::max(p, q), p < q ? grid[i] : -grid[i]);
    const Matrix h = hb.build(orbrot::rotate_integrals(mo, kappa));
    try {
      warm.theta0 = theta_prev;
      GroundState gs = optimize_ground_state(program, h, warm);
      if (gs.energy - rep.baseline_energy > 1e-8) {
        // Escalate before concluding non-redundancy: full restart search.
        OptimizeOptions hard = opt;
        hard.theta0 = base.theta;
        const GroundState retry = optimize_ground_state(program, h, hard);
        if (retry.energy < gs.energy) gs = retry;
      }
      theta_prev = gs.theta;
      rep.energies.push_back(gs.energy);
    } catch (const Error&) {
      rep.failed_points.push_back(static_cast<int>(i));
      rep.energies.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }

  rep.max_drift = 0.0;
  for (double e : rep.energies)
    if (std::isfinite(e)) rep.max_drift = std::max(rep.max_drift, std::abs(e - rep.baseline_energy));
  rep.redundant = rep.failed_points.empty() && rep.max_drift <= 1e-8;
  return rep;
}

}  // namespace qlr::ansatz
