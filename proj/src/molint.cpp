// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/molint.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qlr::molint {

namespace {

constexpr double kPi = std::numbers::pi;

double dist2(const std::array<double, 3>& A, const std::array<double, 3>& B) {
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d += (A[k] - B[k]) * (A[k] - B[k]);
  return d;
}

std::array<double, 3> gaussian_product_center(double a, const std::array<double, 3>& A, double b,
                                              const std::array<double, 3>& B) {
  std::array<double, 3> P{};
  for (int k = 0; k < 3; ++k) P[k] = (a * A[k] + b * B[k]) / (a + b);
  return P;
}

std::string to_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

// Fortran-style exponent markers (D/d) appear in Basis Set Exchange files.
double parse_fortran_double(const std::string& tok, int lineno) {
  std::string t = tok;
  for (auto& c : t)
    if (c == 'D' || c == 'd') c = 'E';
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw FormatError("basis parse error at line " + std::to_string(lineno) + ": bad number '" +
                      tok + "'");
  }
  if (used != t.size())
    throw FormatError("basis parse error at line " + std::to_string(lineno) + ": bad number '" +
                      tok + "'");
  return v;
}

}  // namespace

int Molecule::n_electrons() const {
  double z = 0.0;
  for (const auto& a : atoms) z += a.charge;
  return static_cast<int>(std::lround(z)) - charge;
}

void Molecule::validate_geometry() const {
  if (atoms.empty()) throw GeometryError("molecule has no atoms");
  for (const auto& a : atoms)
    for (double x : a.pos)
      if (!std::isfinite(x)) throw GeometryError("non-finite coordinate on atom " + a.symbol);
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = i + 1; j < atoms.size(); ++j)
      if (dist2(atoms[i].pos, atoms[j].pos) < 1e-12)
        throw GeometryError("coincident nuclei: atoms " + std::to_string(i) + " and " +
                            std::to_string(j));
}

void Molecule::validate() const {
  validate_geometry();
  const int ne = n_electrons();
  if (ne <= 0 || ne % 2 != 0)
    throw GeometryError("closed-shell reference requires a positive even electron count, got " +
                        std::to_string(ne));
}

double boys_f0(double t) {
  if (t < 0.0) throw std::domain_error("boys_f0: negative argument");
  constexpr double eps = 1e-10;
  if (t <= eps) {
    // 1 - t/3 + t^2/10 - t^3/42 + t^4/216 - t^5/1320
    return 1.0 + t * (-1.0 / 3.0 +
                      t * (1.0 / 10.0 +
                           t * (-1.0 / 42.0 + t * (1.0 / 216.0 + t * (-1.0 / 1320.0)))));
  }
  const double st = std::sqrt(t);
  return 0.5 * std::sqrt(kPi / t) * std::erf(st);
}

namespace prim {

double norm_s(double exponent) { return std::pow(2.0 * exponent / kPi, 0.75); }

double overlap(double a, const std::array<double, 3>& A, double b,
               const std::array<double, 3>& B) {
  const double p = a + b;
  return std::pow(kPi / p, 1.5) * std::exp(-a * b / p * dist2(A, B));
}

double kinetic(double a, const std::array<double, 3>& A, double b,
               const std::array<double, 3>& B) {
  const double p = a + b;
  const double xi = a * b / p;
  return xi * (3.0 - 2.0 * xi * dist2(A, B)) * overlap(a, A, b, B);
}

double nuclear(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B,
               const std::array<double, 3>& C) {
  const double p = a + b;
  const auto P = gaussian_product_center(a, A, b, B);
  return -2.0 * kPi / p * std::exp(-a * b / p * dist2(A, B)) * boys_f0(p * dist2(P, C));
}

double dipole(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B,
              int axis) {
  const auto P = gaussian_product_center(a, A, b, B);
  return P[axis] * overlap(a, A, b, B);
}

double eri(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B,
           double c, const std::array<double, 3>& C, double d, const std::array<double, 3>& D) {
  const double p = a + b;
  const double q = c + d;
  const auto P = gaussian_product_center(a, A, b, B);
  const auto Q = gaussian_product_center(c, C, d, D);
  const double pref = 2.0 * std::pow(kPi, 2.5) / (p * q * std::sqrt(p + q));
  return pref * std::exp(-a * b / p * dist2(A, B)) * std::exp(-c * d / q * dist2(C, D)) *
         boys_f0(p * q / (p + q) * dist2(P, Q));
}

}  // namespace prim

BasisSet load_basis(const std::string& path, const std::vector<std::string>& elements) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open basis file: " + path);

  std::vector<std::string> wanted;
  wanted.reserve(elements.size());
  for (const auto& e : elements) wanted.push_back(to_upper(e));

  // Shells are parsed per element; atom centers get attached later.
  BasisSet out;
  std::string line;
  int lineno = 0;
  std::string current_element;  // empty when outside an element block
  bool any_element_seen = false;

  auto next_line = [&](std::string& dst) -> bool {
    if (!std::getline(in, dst)) return false;
    ++lineno;
    return true;
  };

  while (next_line(line)) {
    std::istringstream ss(line);
    std::string tok0;
    if (!(ss >> tok0)) continue;               // blank line
    if (tok0[0] == '!') continue;              // comment
    if (tok0 == "****") {
      current_element.clear();
      continue;
    }
    if (current_element.empty()) {
      // element header: "He     0"
      any_element_seen = true;
      current_element = to_upper(tok0);
      continue;
    }
    // shell header: "S   3   1.00"
    const std::string shell_type = to_upper(tok0);
    if (shell_type != "S")
      throw FormatError("unsupported angular momentum '" + tok0 + "' at line " +
                        std::to_string(lineno) + " (only s shells are implemented)");
    int nprim = 0;
    if (!(ss >> nprim) || nprim <= 0)
      throw FormatError("basis parse error at line " + std::to_string(lineno) +
                        ": bad primitive count");
    ContractedShell shell;
    for (int i = 0; i < nprim; ++i) {
      if (!next_line(line))
        throw FormatError("basis parse error at line " + std::to_string(lineno) +
                          ": unexpected end of file inside shell");
      std::istringstream ps(line);
      std::string e_tok, c_tok;
      if (!(ps >> e_tok >> c_tok))
        throw FormatError("basis parse error at line " + std::to_string(lineno) +
                          ": expected exponent and coefficient");
      Primitive prim;
      prim.exponent = parse_fortran_double(e_tok, lineno);
      prim.coefficient = parse_fortran_double(c_tok, lineno);
      if (prim.exponent <= 0.0)
        throw FormatError("basis parse error at line " + std::to_string(lineno) +
                          ": non-positive exponent");
      shell.primitives.push_back(prim);
    }
    const bool keep = wanted.empty() ||
                      std::find(wanted.begin(), wanted.end(), current_element) != wanted.end();
    if (keep) out[current_element].push_back(std::move(shell));
  }
  if (!any_element_seen) throw FormatError("basis file contains no element blocks: " + path);
  for (const auto& e : wanted)
    if (!out.count(e)) throw FormatError("element " + e + " not found in basis file " + path);

  // Fold primitive norms into the coefficients, then normalize the contraction.
  for (auto& [elem, shells] : out) {
    for (auto& shell : shells) {
      for (auto& p : shell.primitives) p.coefficient *= prim::norm_s(p.exponent);
      double self = 0.0;
      const std::array<double, 3> origin{0.0, 0.0, 0.0};
      for (const auto& pi : shell.primitives)
        for (const auto& pj : shell.primitives)
          self += pi.coefficient * pj.coefficient *
                  prim::overlap(pi.exponent, origin, pj.exponent, origin);
      const double scale = 1.0 / std::sqrt(self);
      for (auto& p : shell.primitives) p.coefficient *= scale;
    }
  }
  return out;
}

std::vector<ContractedShell> shells_for(const Molecule& mol, const BasisSet& basis) {
  std::vector<ContractedShell> shells;
  for (size_t ia = 0; ia < mol.atoms.size(); ++ia) {
    const auto key = to_upper(mol.atoms[ia].symbol);
    auto it = basis.find(key);
    if (it == basis.end()) throw FormatError("no basis functions for element " + key);
    for (const auto& proto : it->second) {
      ContractedShell s = proto;
      s.center = static_cast<int>(ia);
      shells.push_back(std::move(s));
    }
  }
  return shells;
}

AOIntegrals build_ao_integrals(const Molecule& mol, const std::vector<ContractedShell>& shells) {
  mol.validate_geometry();
  const int n = static_cast<int>(shells.size());
  AOIntegrals ao;
  ao.n_ao = n;
  ao.S = Matrix::Zero(n, n);
  ao.T = Matrix::Zero(n, n);
  ao.V = Matrix::Zero(n, n);
  for (auto& d : ao.D) d = Matrix::Zero(n, n);
  ao.eri = Tensor4(n);

  auto center = [&](int mu) { return mol.atoms[shells[mu].center].pos; };

  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu; nu < n; ++nu) {
      double s = 0.0, t = 0.0, v = 0.0;
      std::array<double, 3> d{0.0, 0.0, 0.0};
      for (const auto& pi : shells[mu].primitives) {
        for (const auto& pj : shells[nu].primitives) {
          const double cc = pi.coefficient * pj.coefficient;
          s += cc * prim::overlap(pi.exponent, center(mu), pj.exponent, center(nu));
          t += cc * prim::kinetic(pi.exponent, center(mu), pj.exponent, center(nu));
          for (const auto& atom : mol.atoms)
            v += cc * atom.charge *
                 prim::nuclear(pi.exponent, center(mu), pj.exponent, center(nu), atom.pos);
          for (int ax = 0; ax < 3; ++ax)
            d[ax] += cc * prim::dipole(pi.exponent, center(mu), pj.exponent, center(nu), ax);
        }
      }
      ao.S(mu, nu) = ao.S(nu, mu) = s;
      ao.T(mu, nu) = ao.T(nu, mu) = t;
      ao.V(mu, nu) = ao.V(nu, mu) = v;
      for (int ax = 0; ax < 3; ++ax) ao.D[ax](mu, nu) = ao.D[ax](nu, mu) = d[ax];
    }
  }

  // Canonical quartets only; the 8-fold symmetry is then exact by assignment.
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= (r == p ? q : r); ++s) {
          double val = 0.0;
          for (const auto& pa : shells[p].primitives)
            for (const auto& pb : shells[q].primitives)
              for (const auto& pc : shells[r].primitives)
                for (const auto& pd : shells[s].primitives)
                  val += pa.coefficient * pb.coefficient * pc.coefficient * pd.coefficient *
                         prim::eri(pa.exponent, center(p), pb.exponent, center(q), pc.exponent,
                                   center(r), pd.exponent, center(s));
          ao.eri(p, q, r, s) = ao.eri(q, p, r, s) = ao.eri(p, q, s, r) = ao.eri(q, p, s, r) = val;
          ao.eri(r, s, p, q) = ao.eri(s, r, p, q) = ao.eri(r, s, q, p) = ao.eri(s, r, q, p) = val;
        }

  ao.e_nuc = 0.0;
  for (size_t i = 0; i < mol.atoms.size(); ++i)
    for (size_t j = i + 1; j < mol.atoms.size(); ++j) {
      const double r2 = dist2(mol.atoms[i].pos, mol.atoms[j].pos);
      if (r2 < 1e-12) throw GeometryError("coincident nuclei in nuclear repulsion");
      ao.e_nuc += mol.atoms[i].charge * mol.atoms[j].charge / std::sqrt(r2);
    }
  return ao;
}

}  // namespace qlr::molint
