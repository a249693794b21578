// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/response.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace qlr::response {

namespace fs = qlr::fockspace;

std::string to_string(Parameterization p) {
  switch (p) {
    case Parameterization::Naive: return "naive";
    case Parameterization::Proj: return "proj";
    case Parameterization::SelfConsistent: return "sc";
    case Parameterization::StateTransfer: return "st";
  }
  return "?";
}

Parameterization parameterization_from_string(const std::string& name) {
  if (name == "naive") return Parameterization::Naive;
  if (name == "proj" || name == "projected") return Parameterization::Proj;
  if (name == "sc" || name == "self-consistent") return Parameterization::SelfConsistent;
  if (name == "st" || name == "state-transfer") return Parameterization::StateTransfer;
  throw Error("unknown parameterization: " + name);
}

std::string ExcitationInfo::label() const {
  switch (kind) {
    case Kind::Single:
      return "G1(" + std::to_string(i) + "->" + std::to_string(a) + ")";
    case Kind::Double:
      return "G2(" + std::to_string(i) + "," + std::to_string(j) + "->" + std::to_string(a) +
             "," + std::to_string(b) + ")";
    case Kind::DoublePrime:
      return "G2'(" + std::to_string(i) + "," + std::to_string(j) + "->" + std::to_string(a) +
             "," + std::to_string(b) + ")";
  }
  return "?";
}

namespace {

// G1_ia = E_ai / sqrt(2)
fs::FermionicOp g1_op(int i, int a) {
  return fs::ops::e_singlet(a, i).scaled(1.0 / std::sqrt(2.0));
}

// G2_ijab = (E_ai E_bj + E_aj E_bi) / (2 sqrt((1+d_ab)(1+d_ij)))
fs::FermionicOp g2_op(int i, int j, int a, int b) {
  const double norm = 2.0 * std::sqrt((1.0 + (a == b ? 1.0 : 0.0)) * (1.0 + (i == j ? 1.0 : 0.0)));
  fs::FermionicOp op = fs::ops::e_singlet(a, i) * fs::ops::e_singlet(b, j);
  op += fs::ops::e_singlet(a, j) * fs::ops::e_singlet(b, i);
  return op.scaled(1.0 / norm);
}

// G2'_ijab = (E_ai E_bj - E_aj E_bi) / (2 sqrt(3))
fs::FermionicOp g2p_op(int i, int j, int a, int b) {
  fs::FermionicOp op = fs::ops::e_singlet(a, i) * fs::ops::e_singlet(b, j);
  op += (fs::ops::e_singlet(a, j) * fs::ops::e_singlet(b, i)).scaled(-1.0);
  return op.scaled(1.0 / (2.0 * std::sqrt(3.0)));
}

}  // namespace

ExcitationOperatorSet build_excitation_basis(const SectorBasis& basis, Onv reference) {
  ExcitationOperatorSet set;
  set.basis = &basis;
  set.reference = reference;
  for (int p = 0; p < basis.n_mo(); ++p) {
    const bool alpha = reference >> (2 * p) & 1u;
    const bool beta = reference >> (2 * p + 1) & 1u;
    if (alpha != beta) throw Error("build_excitation_basis: open-shell reference");
    (alpha ? set.occupied : set.virtuals).push_back(p);
  }

  std::vector<std::pair<ExcitationInfo, fs::FermionicOp>> candidates;
  for (int i : set.occupied)
    for (int a : set.virtuals)
      candidates.push_back({{ExcitationInfo::Kind::Single, i, 0, a, 0}, g1_op(i, a)});
  for (size_t ii = 0; ii < set.occupied.size(); ++ii)
    for (size_t jj = ii; jj < set.occupied.size(); ++jj)
      for (size_t aa = 0; aa < set.virtuals.size(); ++aa)
        for (size_t bb = aa; bb < set.virtuals.size(); ++bb) {
          const int i = set.occupied[ii], j = set.occupied[jj];
          const int a = set.virtuals[aa], b = set.virtuals[bb];
          candidates.push_back({{ExcitationInfo::Kind::Double, i, j, a, b}, g2_op(i, j, a, b)});
        }
  for (size_t ii = 0; ii < set.occupied.size(); ++ii)
    for (size_t jj = ii + 1; jj < set.occupied.size(); ++jj)
      for (size_t aa = 0; aa < set.virtuals.size(); ++aa)
        for (size_t bb = aa + 1; bb < set.virtuals.size(); ++bb) {
          const int i = set.occupied[ii], j = set.occupied[jj];
          const int a = set.virtuals[aa], b = set.virtuals[bb];
          candidates.push_back(
              {{ExcitationInfo::Kind::DoublePrime, i, j, a, b}, g2p_op(i, j, a, b)});
        }

  for (auto& [info, op] : candidates) {
    Matrix m = fs::to_matrix(op, basis);
    if (m.norm() < 1e-12) {
      set.dropped.push_back({info, "null in sector"});
      continue;
    }
    set.g.push_back(std::move(m));
    set.g_ops.push_back(std::move(op));
    set.info.push_back(info);
  }
  return set;
}

ResponseMatrices build_response_matrices(Parameterization param, const GroundStateRef& ground,
                                         const Matrix& hamiltonian,
                                         const ExcitationOperatorSet& excitations) {
  const SectorBasis& basis = *excitations.basis;
  const int dim = basis.size();
  const int n = excitations.size();
  const Vector& psi = ground.state;
  if (psi.size() != dim) throw Error("build_response_matrices: state/basis mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw Error("build_response_matrices: ground state is not normalized");

  // Assemble the R_I matrices for the requested parameterization.
  std::vector<Matrix> r(n);
  switch (param) {
    case Parameterization::Naive:
      for (int k = 0; k < n; ++k) r[k] = excitations.g[k];
      break;
    case Parameterization::Proj: {
      const Matrix p = psi * psi.transpose();
      for (int k = 0; k < n; ++k) {
        const double gk = psi.dot(excitations.g[k] * psi);
        r[k] = excitations.g[k] * p - gk * Matrix::Identity(dim, dim);
      }
      break;
    }
    case Parameterization::SelfConsistent:
    case Parameterization::StateTransfer: {
      if (!ground.program)
        throw Error("build_response_matrices: " + to_string(param) +
                    " needs the preparing ansatz (ground state came from direct FCI)");
      const ansatz::AnsatzEvaluator ev(*ground.program);
      const Matrix u = ev.unitary(ground.theta);
      if (param == Parameterization::SelfConsistent) {
        for (int k = 0; k < n; ++k) r[k] = u * excitations.g[k] * u.transpose();
      } else {
        Vector csf = Vector::Zero(dim);
        csf(basis.index_of(ground.program->reference)) = 1.0;
        for (int k = 0; k < n; ++k) r[k] = (u * (excitations.g[k] * csf)) * psi.transpose();
      }
      break;
    }
  }

  ResponseMatrices rm;
  rm.param = param;
  rm.basis = &basis;
  rm.ground = psi;
  rm.a = Matrix::Zero(n, n);
  rm.b = Matrix::Zero(n, n);
  rm.sigma = Matrix::Zero(n, n);
  rm.delta = Matrix::Zero(n, n);

  std::vector<Vector> rp(n), rtp(n);
  for (int k = 0; k < n; ++k) {
    rp[k] = r[k] * psi;
    rtp[k] = r[k].transpose() * psi;
  }

  for (int j = 0; j < n; ++j) {
    const Matrix m = hamiltonian * r[j] - r[j] * hamiltonian;             // [H, R_J]
    const Matrix mb = hamiltonian * r[j].transpose() - r[j].transpose() * hamiltonian;
    const Vector m_psi = m * psi, mt_psi = m.transpose() * psi;
    const Vector mb_psi = mb * psi, mbt_psi = mb.transpose() * psi;
    for (int i = 0; i < n; ++i) {
      rm.a(i, j) = rp[i].dot(m_psi) - mt_psi.dot(rtp[i]);
      rm.b(i, j) = rp[i].dot(mb_psi) - mbt_psi.dot(rtp[i]);
      rm.sigma(i, j) = rp[i].dot(rp[j]) - rtp[j].dot(rtp[i]);
      rm.delta(i, j) = rp[i].dot(rtp[j]) - rp[j].dot(rtp[i]);
    }
  }

  rm.residual_a = (rm.a - rm.a.transpose()).cwiseAbs().maxCoeff();
  rm.residual_b = (rm.b - rm.b.transpose()).cwiseAbs().maxCoeff();
  rm.residual_sigma = (rm.sigma - rm.sigma.transpose()).cwiseAbs().maxCoeff();
  rm.residual_delta = (rm.delta + rm.delta.transpose()).cwiseAbs().maxCoeff();
  rm.a = 0.5 * (rm.a + rm.a.transpose()).eval();
  rm.b = 0.5 * (rm.b + rm.b.transpose()).eval();
  rm.sigma = 0.5 * (rm.sigma + rm.sigma.transpose()).eval();
  rm.delta = 0.5 * (rm.delta - rm.delta.transpose()).eval();

  rm.r_psi = std::move(rp);
  rm.rt_psi = std::move(rtp);
  return rm;
}

double condition_number(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols()) throw Error("condition_number: matrix must be square");
  Eigen::JacobiSVD<Matrix> svd(sigma);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

ResponseSolution solve_response(const ResponseMatrices& rm, const SolveOptions& opt) {
  const int n = static_cast<int>(rm.a.rows());
  if (!rm.a.allFinite() || !rm.b.allFinite() || !rm.sigma.allFinite() || !rm.delta.allFinite())
    throw Error("solve_response: non-finite input matrices");

  ResponseSolution sol;
  Matrix sigma = rm.sigma;
  if (opt.regularize > 0.0) {
    sigma += opt.regularize * Matrix::Identity(n, n);
    sol.regularized = true;
  }

  Matrix e2(2 * n, 2 * n), s2(2 * n, 2 * n);
  e2 << rm.a, rm.b, rm.b, rm.a;
  s2 << sigma, rm.delta, -rm.delta, -sigma;
  sol.e2 = e2;
  sol.s2 = s2;

  Eigen::JacobiSVD<Matrix> svd_sigma(sigma);
  const auto& sv = svd_sigma.singularValues();
  sol.cond_sigma = sv(n - 1) == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / sv(n - 1);
  Eigen::JacobiSVD<Matrix> svd_s2(s2);
  sol.sigma_min_s2 = svd_s2.singularValues()(2 * n - 1);
  sol.det_s2 = s2.partialPivLu().determinant();

  Eigen::GeneralizedEigenSolver<Matrix> ges;
  ges.compute(e2, s2, true);
  const auto& alphas = ges.alphas();
  const auto& betas = ges.betas();

  double beta_scale = 0.0;
  for (int k = 0; k < 2 * n; ++k) beta_scale = std::max(beta_scale, std::abs(betas(k)));

  std::vector<int> keep;
  std::vector<std::complex<double>> lambdas(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    if (beta_scale == 0.0 || std::abs(betas(k)) <= 1e-13 * beta_scale) {
      ++sol.n_infinite;
      continue;
    }
    lambdas[k] = alphas(k) / betas(k);
    if (lambdas[k].real() > 1e-10) keep.push_back(k);
  }
  std::sort(keep.begin(), keep.end(),
            [&](int p, int q) { return lambdas[p].real() < lambdas[q].real(); });

  sol.omega.reserve(keep.size());
  sol.x.resize(2 * n, static_cast<int>(keep.size()));
  const auto vecs = ges.eigenvectors();
  for (size_t col = 0; col < keep.size(); ++col) {
    const int k = keep[col];
    sol.omega.push_back(lambdas[k].real());
    sol.max_imag = std::max(sol.max_imag, std::abs(lambdas[k].imag()));
    ComplexVector v = vecs.col(k);
    const double nv = v.norm();
    if (nv > 0) v /= nv;
    sol.x.col(static_cast<int>(col)) = v;
    sol.metric_signature.push_back((v.adjoint() * s2 * v)(0).real());
  }

  const double s2_norm = svd_s2.singularValues()(0);
  const bool det_small = std::abs(sol.det_s2) < 1e-14 * std::pow(s2_norm, 2 * n);
  sol.flagged = sol.cond_sigma > opt.cond_threshold || sol.sigma_min_s2 < opt.metric_floor ||
                det_small || sol.n_infinite > 0;
  return sol;
}

double analytic_metric_det_2in2(Parameterization param, double c_1100, double c_s,
                                double c_0011) {
  const double norm = c_1100 * c_1100 + c_s * c_s + c_0011 * c_0011;
  if (std::abs(norm - 1.0) > 1e-8)
    throw Error("analytic_metric_det_2in2: CI coefficients are not normalized");
  switch (param) {
    case Parameterization::Naive: {
      const double d = c_1100 * c_1100 - c_0011 * c_0011;
      const double o = (c_1100 - c_0011) * c_s;
      return d * d - o * o;
    }
    case Parameterization::Proj: {
      const double s00 =
          c_1100 * c_1100 + c_s * c_s - std::pow(c_1100 * c_s + c_0011 * c_s, 2);
      const double s11 = c_1100 * c_1100 - c_1100 * c_1100 * c_0011 * c_0011;
      const double s01 = c_1100 * c_s - c_1100 * c_0011 * (c_1100 * c_s + c_0011 * c_s);
      return s00 * s11 - s01 * s01;
    }
    default:
      throw Error("analytic_metric_det_2in2: closed forms exist for naive and proj only");
  }
}

SpectrumData compute_spectrum(const ResponseSolution& sol, const ResponseMatrices& rm,
                              const std::array<Matrix, 3>& dipole_mo, const SpectrumOptions& opt) {
  if (sol.flagged && !opt.allow_flagged)
    throw Error("compute_spectrum: solution is flagged singular (pass allow_flagged to force)");

  const SectorBasis& basis = *rm.basis;
  const int n = static_cast<int>(rm.a.rows());
  const int n_states = static_cast<int>(sol.omega.size());

  SpectrumData out;
  out.omega = sol.omega;
  out.oscillator_strength.assign(n_states, 0.0);
  out.reliable.assign(n_states, true);

  // Property gradient of the same parameterization as the Hessian/metric.
  std::array<ComplexVector, 3> v_grad;
  for (int ax = 0; ax < 3; ++ax) {
    const Matrix d = fs::build_one_electron_operator(dipole_mo[ax], basis);
    const Vector d_psi = d * rm.ground;
    ComplexVector v(2 * n);
    for (int k = 0; k < n; ++k) {
      v(k) = rm.r_psi[k].dot(d_psi) - d_psi.dot(rm.rt_psi[k]);      // <0|[R^dag, D]|0>
      v(n + k) = rm.rt_psi[k].dot(d_psi) - d_psi.dot(rm.r_psi[k]);  // <0|[R, D]|0>
    }
    v_grad[ax] = v;
  }

  for (int s = 0; s < n_states; ++s) {
    const double norm2 = sol.metric_signature[s];
    if (std::abs(norm2) < 1e-12) {
      out.reliable[s] = false;
      continue;
    }
    double strength = 0.0;
    for (int ax = 0; ax < 3; ++ax) {
      const std::complex<double> t = sol.x.col(s).dot(v_grad[ax]) / std::sqrt(std::abs(norm2));
      strength += std::norm(t);
    }
    out.oscillator_strength[s] = 2.0 / 3.0 * sol.omega[s] * strength;
  }

  if (n_states > 0 && opt.grid_points > 1) {
    const double s = opt.fwhm / 2.354820045;  // FWHM -> Gaussian sigma
    const double lo = std::max(0.0, *std::min_element(out.omega.begin(), out.omega.end()) - 5 * s);
    const double hi = *std::max_element(out.omega.begin(), out.omega.end()) + 5 * s;
    out.grid.resize(opt.grid_points);
    out.intensity.assign(opt.grid_points, 0.0);
    for (int k = 0; k < opt.grid_points; ++k) {
      const double e = lo + (hi - lo) * k / (opt.grid_points - 1);
      out.grid[k] = e;
      double val = 0.0;
      for (int st = 0; st < n_states; ++st)
        val += out.oscillator_strength[st] *
               std::exp(-0.5 * std::pow((e - out.omega[st]) / s, 2));
      out.intensity[k] = val;
    }
  }
  return out;
}

}  // namespace qlr::response
