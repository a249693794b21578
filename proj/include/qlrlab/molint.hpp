// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include "qlrlab/core.hpp"

namespace qlr::molint {

struct Atom {
  std::string symbol;
  double charge = 0.0;              // nuclear charge Z
  std::array<double, 3> pos{};      // Bohr
};

struct Molecule {
  std::vector<Atom> atoms;
  int charge = 0;

  int n_electrons() const;
  // Throws GeometryError on coincident or non-finite nuclei.
  void validate_geometry() const;
  // Geometry checks plus the closed-shell electron-count invariant.
  void validate() const;
};

struct Primitive {
  double exponent = 0.0;     // Bohr^-2
  double coefficient = 0.0;  // contraction coefficient (normalized at load)
};

// s-type contracted Gaussian attached to an atom index.
struct ContractedShell {
  int center = -1;
  std::vector<Primitive> primitives;
};

using BasisSet = std::map<std::string, std::vector<ContractedShell>>;

struct AOIntegrals {
  int n_ao = 0;
  Matrix S;                    // overlap
  Matrix T;                    // kinetic
  Matrix V;                    // nuclear attraction
  Tensor4 eri;                 // (pq|rs), chemists' notation
  std::array<Matrix, 3> D;     // dipole x,y,z about the origin (Bohr)
  double e_nuc = 0.0;          // nuclear repulsion (Hartree)
};

// F0(t) = int_0^1 exp(-t u^2) du. erf closed form for t > 1e-10, 6-term
// Taylor series below; both branches agree to ~1e-13 at the switch point.
double boys_f0(double t);

// Parses a Gaussian94-format basis file, keeping only the requested elements
// (case-insensitive). Only s shells are supported; anything else raises
// FormatError with the offending line number. Contractions come back
// normalized to unit self-overlap.
BasisSet load_basis(const std::string& path, const std::vector<std::string>& elements);

// Attaches shells to atoms by element symbol; order follows the atom list.
std::vector<ContractedShell> shells_for(const Molecule& mol, const BasisSet& basis);

AOIntegrals build_ao_integrals(const Molecule& mol, const std::vector<ContractedShell>& shells);

// Primitive-level closed forms over unnormalized s Gaussians, exposed for the
// quadrature cross-checks in the test suite.
namespace prim {
double overlap(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B);
double kinetic(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B);
double nuclear(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B,
               const std::array<double, 3>& C);
double dipole(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B,
              int axis);
double eri(double a, const std::array<double, 3>& A, double b, const std::array<double, 3>& B,
           double c, const std::array<double, 3>& C, double d, const std::array<double, 3>& D);
double norm_s(double exponent);
}  // namespace prim

}  // namespace qlr::molint
