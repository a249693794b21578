// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "oracles.hpp"
#include "qlrlab/molint.hpp"

using namespace qlr;
using namespace qlr::molint;

namespace {

Molecule h2_molecule(double r_bohr) {
  Molecule mol;
  mol.atoms = {{"H", 1.0, {0, 0, 0}}, {"H", 1.0, {0, 0, r_bohr}}};
  return mol;
}

AOIntegrals build_h2(double r_bohr) {
  const Molecule mol = h2_molecule(r_bohr);
  const auto basis = load_basis("data/basis/sto-3g.gbs", {"H"});
  return build_ao_integrals(mol, shells_for(mol, basis));
}

}  // namespace

TEST_CASE("boys_f0 basics") {
  CHECK(boys_f0(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // t -> inf asymptote sqrt(pi/(4t))
  const double t = 50.0;
  CHECK(boys_f0(t) / std::sqrt(M_PI / (4.0 * t)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(boys_f0(-1e-3), std::domain_error);
}

TEST_CASE("boys_f0 against adaptive quadrature of the defining integral") {
  for (double t : {1e-12, 1e-8, 1e-3, 0.5, 1.0, 3.7, 20.0}) {
    const double oracle = testing::adaptive_simpson(
        [t](double u) { return std::exp(-t * u * u); }, 0.0, 1.0, 1e-15);
    CHECK(boys_f0(t) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("boys_f0 branch point continuity") {
  const double eps = 1e-10;
  CHECK(std::abs(boys_f0(eps * (1 + 1e-9)) - boys_f0(eps * (1 - 1e-9))) < 1e-13);
}

TEST_CASE("basis loader: STO-3G hydrogen has one shell of three primitives") {
  const auto basis = load_basis("data/basis/sto-3g.gbs", {"H"});
  REQUIRE(basis.count("H") == 1);
  REQUIRE(basis.at("H").size() == 1);
  CHECK(basis.at("H")[0].primitives.size() == 3);
}

TEST_CASE("basis loader: 6-31G helium has 3+1 shells, case-insensitive lookup") {
  const auto basis = load_basis("data/basis/6-31g.gbs", {"he"});
  REQUIRE(basis.count("HE") == 1);
  REQUIRE(basis.at("HE").size() == 2);
  CHECK(basis.at("HE")[0].primitives.size() == 3);
  CHECK(basis.at("HE")[1].primitives.size() == 1);
}

TEST_CASE("basis loader error paths") {
  {
    std::ofstream f("/tmp/qlr_empty.gbs");
  }
  CHECK_THROWS_AS(load_basis("/tmp/qlr_empty.gbs", {"H"}), FormatError);
  {
    std::ofstream f("/tmp/qlr_pshell.gbs");
    f << "****\nH 0\nP 1 1.00\n 1.0 1.0\n****\n";
  }
  CHECK_THROWS_AS(load_basis("/tmp/qlr_pshell.gbs", {"H"}), FormatError);
  CHECK_THROWS_AS(load_basis("/nonexistent/file.gbs", {"H"}), FormatError);
}

TEST_CASE("normalized contracted self-overlap is 1") {
  for (const char* file : {"data/basis/sto-3g.gbs", "data/basis/6-31g.gbs"}) {
    const auto basis = load_basis(file, {"H"});
    Molecule mol;
    mol.atoms = {{"H", 1.0, {0, 0, 0}}};
    const auto ao = build_ao_integrals(mol, shells_for(mol, basis));
    for (int i = 0; i < ao.n_ao; ++i) CHECK(ao.S(i, i) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("single normalized s function: S=[[1]], (00|00) > 0") {
  Molecule mol;
  mol.atoms = {{"H", 1.0, {0, 0, 0}}};
  const auto basis = load_basis("data/basis/sto-3g.gbs", {"H"});
  const auto ao = build_ao_integrals(mol, shells_for(mol, basis));
  REQUIRE(ao.n_ao == 1);
  CHECK(ao.S(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ao.eri(0, 0, 0, 0) > 0.0);
}

TEST_CASE("locality: off-diagonal overlap vanishes at 50 Bohr") {
  const auto ao = build_h2(50.0);
  CHECK(std::abs(ao.S(0, 1)) < 1e-12);
}

TEST_CASE("H2/STO-3G at 1.4 Bohr matches the quadrature oracles") {
  const double r = 1.4;
  const Molecule mol = h2_molecule(r);
  const auto basis = load_basis("data/basis/sto-3g.gbs", {"H"});
  const auto shells = shells_for(mol, basis);
  const auto ao = build_ao_integrals(mol, shells);

  auto center = [&](int mu) { return mol.atoms[shells[mu].center].pos; };

  // Contract the primitive-level oracles with the stored (normalized)
  // coefficients; linearity makes this exact.
  auto contracted2 = [&](int mu, int nu, auto&& prim_fn) {
    double acc = 0.0;
    for (const auto& pi : shells[mu].primitives)
      for (const auto& pj : shells[nu].primitives)
        acc += pi.coefficient * pj.coefficient *
               prim_fn(pi.exponent, center(mu), pj.exponent, center(nu));
    return acc;
  };

  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) {
      CHECK(ao.S(mu, nu) ==
            doctest::Approx(contracted2(mu, nu,
                                        [](double a, auto A, double b, auto B) {
                                          return testing::prim_oracle::overlap(a, A, b, B);
                                        }))
                .epsilon(1e-8));
      CHECK(ao.T(mu, nu) ==
            doctest::Approx(contracted2(mu, nu,
                                        [](double a, auto A, double b, auto B) {
                                          return testing::prim_oracle::kinetic(a, A, b, B);
                                        }))
                .epsilon(1e-8));
      for (int ax = 0; ax < 3; ++ax) {
        const double oracle = contracted2(mu, nu, [ax](double a, auto A, double b, auto B) {
          return testing::prim_oracle::dipole(a, A, b, B, ax);
        });
        CHECK(std::abs(ao.D[ax](mu, nu) - oracle) < 1e-8);
      }
      double v_oracle = 0.0;
      for (const auto& atom : mol.atoms)
        v_oracle += atom.charge * contracted2(mu, nu, [&](double a, auto A, double b, auto B) {
          return testing::prim_oracle::nuclear(a, A, b, B, atom.pos);
        });
      CHECK(ao.V(mu, nu) == doctest::Approx(v_oracle).epsilon(1e-8));
    }

  auto contracted4 = [&](int p, int q, int r_, int s) {
    double acc = 0.0;
    for (const auto& pa : shells[p].primitives)
      for (const auto& pb : shells[q].primitives)
        for (const auto& pc : shells[r_].primitives)
          for (const auto& pd : shells[s].primitives)
            acc += pa.coefficient * pb.coefficient * pc.coefficient * pd.coefficient *
                   testing::prim_oracle::eri(pa.exponent, center(p), pb.exponent, center(q),
                                             pc.exponent, center(r_), pd.exponent, center(s));
    return acc;
  };
  for (const auto [p, q, r_, s] :
       {std::array{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 1},
        {1, 1, 1, 1}}) {
    CHECK(ao.eri(p, q, r_, s) == doctest::Approx(contracted4(p, q, r_, s)).epsilon(1e-8));
  }

  CHECK(ao.e_nuc == doctest::Approx(1.0 / r).epsilon(1e-14));
}

TEST_CASE("AOIntegrals invariants: symmetry and SPD overlap") {
  const auto ao = build_h2(1.4);
  CHECK((ao.S - ao.S.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ao.T - ao.T.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ao.V - ao.V.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(ao.S);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // 8-fold permutation symmetry of the ERI tensor.
  const int n = ao.n_ao;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = ao.eri(p, q, r, s);
          CHECK(std::abs(v - ao.eri(q, p, r, s)) < 1e-12);
          CHECK(std::abs(v - ao.eri(p, q, s, r)) < 1e-12);
          CHECK(std::abs(v - ao.eri(r, s, p, q)) < 1e-12);
        }
}

TEST_CASE("translation invariance") {
  const auto ao0 = build_h2(1.4);
  Molecule mol = h2_molecule(1.4);
  const std::array<double, 3> t{0.3, -1.2, 2.5};
  for (auto& atom : mol.atoms)
    for (int k = 0; k < 3; ++k) atom.pos[k] += t[k];
  const auto basis = load_basis("data/basis/sto-3g.gbs", {"H"});
  const auto ao1 = build_ao_integrals(mol, shells_for(mol, basis));

  CHECK((ao0.S - ao1.S).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ao0.T - ao1.T).cwiseAbs().maxCoeff() < 1e-12);
  double max_eri_diff = 0.0;
  for (size_t i = 0; i < ao0.eri.data().size(); ++i)
    max_eri_diff = std::max(max_eri_diff, std::abs(ao0.eri.data()[i] - ao1.eri.data()[i]));
  CHECK(max_eri_diff < 1e-12);
  for (int ax = 0; ax < 3; ++ax)
    CHECK((ao1.D[ax] - (ao0.D[ax] + t[ax] * ao0.S)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("nuclear repulsion invariant under atom reordering") {
  Molecule mol;
  mol.atoms = {{"H", 1.0, {0, 0, 0}}, {"H", 1.0, {0, 0, 1.4}}, {"H", 1.0, {0, 1.1, 0.3}},
               {"H", 1.0, {0.9, 0, 0.2}}};
  const auto basis = load_basis("data/basis/sto-3g.gbs", {"H"});
  const auto e1 = build_ao_integrals(mol, shells_for(mol, basis)).e_nuc;
  std::reverse(mol.atoms.begin(), mol.atoms.end());
  const auto e2 = build_ao_integrals(mol, shells_for(mol, basis)).e_nuc;
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-14));
}

TEST_CASE("coincident nuclei rejected") {
  Molecule mol;
  mol.atoms = {{"H", 1.0, {0, 0, 0}}, {"H", 1.0, {0, 0, 0}}};
  const auto basis = load_basis("data/basis/sto-3g.gbs", {"H"});
  CHECK_THROWS_AS(build_ao_integrals(mol, shells_for(mol, basis)), GeometryError);
}
