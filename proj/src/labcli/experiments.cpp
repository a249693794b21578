// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/labcli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

namespace qlr::labcli {

namespace fs = qlr::fockspace;
using response::Parameterization;

PreparedSystem prepare_system(const SystemSpec& spec) {
  PreparedSystem sys;
  for (size_t i = 0; i < spec.elements.size(); ++i) {
    molint::Atom atom;
    atom.symbol = spec.elements[i];
    atom.charge = element_charge(spec.elements[i]);
    atom.pos = spec.geometry_bohr[i];
    sys.mol.atoms.push_back(atom);
  }
  sys.mol.charge = spec.charge;
  sys.mol.validate();

  const std::string path = spec.basis_dir + "/" + spec.basis + ".gbs";
  const auto basis = molint::load_basis(path, spec.elements);
  sys.ao = molint::build_ao_integrals(sys.mol, molint::shells_for(sys.mol, basis));

  sys.scf = scf::rhf_solve(sys.ao, sys.mol.n_electrons());
  if (!sys.scf.converged) {
    scf::RHFOptions hard;
    hard.max_iter = 1000;
    hard.damping = 0.8;
    hard.damping_iters = 1000;
    sys.scf = scf::rhf_solve(sys.ao, sys.mol.n_electrons(), hard);
    if (!sys.scf.converged) throw ConvergenceError("SCF did not converge for this geometry");
  }
  sys.mo = orbrot::transform_to_mo(sys.ao, sys.scf.C);
  return sys;
}

namespace {

orbrot::MOIntegrals rotate_01(const orbrot::MOIntegrals& mo, double kappa) {
  orbrot::KappaParams kp(mo.n_mo);
  kp.set(0, 1, kappa);
  return orbrot::rotate_integrals(mo, kp);
}

struct ScanPoint {
  fs::FCISolution fci;
  Matrix h;
};

double lowest_or_nan(const response::ResponseSolution& sol) {
  return sol.omega.empty() ? std::numeric_limits<double>::quiet_NaN() : sol.omega.front();
}

double det_of(const Matrix& m) { return m.partialPivLu().determinant(); }

}  // namespace

KappaScanResult run_kappa_scan(const ExperimentConfig& cfg) {
  const PreparedSystem sys = prepare_system(cfg.system);
  const int n_mo = sys.ao.n_ao;
  const int n_el = sys.mol.n_electrons();
  if (n_mo != 2 || n_el != 2)
    throw Error("kappa_scan requires a two-electrons-in-two-orbitals system");

  const fs::SectorBasis sector = fs::SectorBasis::particle_sector(2, 2, 0);
  const fs::HamiltonianBuilder hb(sector);
  const response::ExcitationOperatorSet excitations =
      response::build_excitation_basis(sector, sector.csf_onv());
  const response::SolveOptions solve_opt{cfg.cond_threshold, cfg.metric_floor, 0.0};

  // UCCSD backs the sc/st curves; naive/proj run on the direct FCI state.
  const auto generators = ansatz::build_cluster_generators(sector, sector.csf_onv());
  const ansatz::AnsatzProgram uccsd = ansatz::make_uccsd_program(generators);

  auto point_at = [&](double kappa) {
    ScanPoint pt;
    pt.h = hb.build(rotate_01(sys.mo, kappa));
    fs::OperatorMatrix hop{&sector, pt.h, true};
    pt.fci = fs::fci_solve(hop);
    return pt;
  };

  KappaScanResult res;
  res.kappa = linspace(cfg.kappa_min, cfg.kappa_max, cfg.kappa_points);
  for (const auto& p : cfg.parameterizations) res.curves.push_back(ParamCurve{p});

  std::vector<Vector> ground_states;
  std::optional<Vector> theta_prev;
  res.fci_energy = point_at(0.0).fci.e0;

  for (double kappa : res.kappa) {
    const ScanPoint pt = point_at(kappa);
    res.c1100.push_back(*pt.fci.c_1100);
    res.cs.push_back(*pt.fci.c_s);
    res.c0011.push_back(*pt.fci.c_0011);
    res.det_naive_analytic.push_back(response::analytic_metric_det_2in2(
        Parameterization::Naive, *pt.fci.c_1100, *pt.fci.c_s, *pt.fci.c_0011));
    res.det_proj_analytic.push_back(response::analytic_metric_det_2in2(
        Parameterization::Proj, *pt.fci.c_1100, *pt.fci.c_s, *pt.fci.c_0011));
    ground_states.push_back(pt.fci.ground);

    std::optional<ansatz::GroundState> ansatz_gs;
    for (auto& curve : res.curves) {
      const Parameterization param = response::parameterization_from_string(curve.param);
      response::GroundStateRef gs;
      if (param == Parameterization::Naive || param == Parameterization::Proj) {
        gs.state = pt.fci.ground;
      } else {
        if (!ansatz_gs) {
          ansatz::OptimizeOptions oopt;
          oopt.target_energy = pt.fci.e0;
          oopt.target_tol = 1e-9;
          if (theta_prev) {
            oopt.theta0 = theta_prev;
            oopt.quick = true;
          }
          ansatz_gs = ansatz::optimize_ground_state(uccsd, pt.h, oopt);
          theta_prev = ansatz_gs->theta;
        }
        gs.state = ansatz_gs->state;
        gs.program = &uccsd;
        gs.theta = ansatz_gs->theta;
      }
      const response::ResponseMatrices rm =
          response::build_response_matrices(param, gs, pt.h, excitations);
      const response::ResponseSolution sol = response::solve_response(rm, solve_opt);
      curve.omega.push_back(lowest_or_nan(sol));
      curve.flagged.push_back(sol.flagged);
      curve.cond_sigma.push_back(sol.cond_sigma);
      curve.det_sigma.push_back(det_of(rm.sigma));
      curve.sigma_identity_residual.push_back(
          (rm.sigma - Matrix::Identity(rm.sigma.rows(), rm.sigma.cols())).cwiseAbs().maxCoeff());
    }
  }

  // Singular-point refinement. Naive roots: |c1100| = |c0011| (sign change of
  // the difference). Proj roots: c1100 = 0, tracked through the phase
  // convention with state-overlap continuity.
  auto naive_fn = [&](double kappa) {
    const auto fci = point_at(kappa).fci;
    return std::abs(*fci.c_1100) - std::abs(*fci.c_0011);
  };
  for (size_t i = 0; i + 1 < res.kappa.size(); ++i) {
    double fa = std::abs(res.c1100[i]) - std::abs(res.c0011[i]);
    double fb = std::abs(res.c1100[i + 1]) - std::abs(res.c0011[i + 1]);
    if (fa == 0.0) {
      res.naive_roots.push_back(res.kappa[i]);
      continue;
    }
    if (fa * fb >= 0.0) continue;
    double a = res.kappa[i], b = res.kappa[i + 1];
    while (b - a > 1e-10) {
      const double m = 0.5 * (a + b);
      const double fm = naive_fn(m);
      if (fa * fm <= 0.0) {
        b = m;
      } else {
        a = m;
        fa = fm;
      }
    }
    res.naive_roots.push_back(0.5 * (a + b));
  }

  // Continuous-phase c1100 along the grid: flip the sign whenever the
  // phase-fixed eigenvector flips relative to its neighbor.
  std::vector<double> signed_c1100(res.kappa.size());
  std::vector<double> phase(res.kappa.size(), 1.0);
  signed_c1100[0] = res.c1100[0];
  for (size_t i = 1; i < res.kappa.size(); ++i) {
    const double ov = ground_states[i - 1].dot(ground_states[i]);
    phase[i] = phase[i - 1] * (ov < 0 ? -1.0 : 1.0);
    signed_c1100[i] = phase[i] * res.c1100[i];
  }
  for (size_t i = 0; i + 1 < res.kappa.size(); ++i) {
    double fa = signed_c1100[i], fb = signed_c1100[i + 1];
    if (fa == 0.0) {
      res.proj_roots.push_back(res.kappa[i]);
      continue;
    }
    if (fa * fb >= 0.0) continue;
    double a = res.kappa[i], b = res.kappa[i + 1];
    Vector psi_a = phase[i] * ground_states[i];
    while (b - a > 1e-10) {
      const double m = 0.5 * (a + b);
      const auto fci = point_at(m).fci;
      const double sign_m = psi_a.dot(fci.ground) < 0 ? -1.0 : 1.0;
      const double fm = sign_m * *fci.c_1100;
      if (fa * fm <= 0.0) {
        b = m;
      } else {
        a = m;
        fa = fm;
        psi_a = sign_m * fci.ground;
      }
    }
    res.proj_roots.push_back(0.5 * (a + b));
  }
  return res;
}

DissociationResult run_dissociation(const ExperimentConfig& cfg) {
  if (cfg.system.elements != std::vector<std::string>{"H", "H"})
    throw Error("dissociation scan expects an H2 system");

  std::vector<double> grid = linspace(cfg.r_min, cfg.r_max, cfg.r_points);
  grid.insert(grid.end(), cfg.r_extra.begin(), cfg.r_extra.end());
  std::sort(grid.begin(), grid.end());

  DissociationResult res;
  const response::SolveOptions solve_opt{cfg.cond_threshold, cfg.metric_floor, 0.0};
  const fs::SectorBasis sector = fs::SectorBasis::particle_sector(2, 2, 0);
  const fs::HamiltonianBuilder hb(sector);
  const response::ExcitationOperatorSet excitations =
      response::build_excitation_basis(sector, sector.csf_onv());

  std::optional<Vector> theta_prev;
  for (double r_ang : grid) {
    SystemSpec spec = cfg.system;
    spec.geometry_bohr = {{0, 0, 0}, {0, 0, r_ang * kAngstromToBohr}};
    const PreparedSystem sys = prepare_system(spec);
    const Matrix h = hb.build(sys.mo);
    fs::OperatorMatrix hop{&sector, h, true};
    const fs::FCISolution fci = fs::fci_solve(hop);

    res.r_angstrom.push_back(r_ang);
    res.c1100.push_back(*fci.c_1100);
    res.cs.push_back(*fci.c_s);
    res.c0011.push_back(*fci.c_0011);

    const response::ResponseMatrices rm_naive = response::build_response_matrices(
        Parameterization::Naive, {fci.ground, nullptr, Vector()}, h, excitations);
    const response::ResponseSolution sol_naive = response::solve_response(rm_naive, solve_opt);
    res.omega_naive.push_back(lowest_or_nan(sol_naive));
    res.naive_flagged.push_back(sol_naive.flagged);
    res.det_naive.push_back(det_of(rm_naive.sigma));

    const auto generators = ansatz::build_cluster_generators(sector, sector.csf_onv());
    const ansatz::AnsatzProgram uccsd = ansatz::make_uccsd_program(generators);
    ansatz::OptimizeOptions oopt;
    oopt.target_energy = fci.e0;
    oopt.target_tol = 1e-9;
    if (theta_prev) {
      oopt.theta0 = theta_prev;
      oopt.quick = true;
    }
    const ansatz::GroundState gs = ansatz::optimize_ground_state(uccsd, h, oopt);
    theta_prev = gs.theta;
    const response::ResponseMatrices rm_sc = response::build_response_matrices(
        Parameterization::SelfConsistent, {gs.state, &uccsd, gs.theta}, h, excitations);
    const response::ResponseSolution sol_sc = response::solve_response(rm_sc, solve_opt);
    res.omega_sc.push_back(lowest_or_nan(sol_sc));
    res.sc_flagged.push_back(sol_sc.flagged);
  }
  return res;
}

NoiseStudyResult run_noise_study(const ExperimentConfig& cfg) {
  const PreparedSystem sys = prepare_system(cfg.system);
  if (sys.ao.n_ao != 2 || sys.mol.n_electrons() != 2)
    throw Error("noise_study requires a two-electrons-in-two-orbitals system");

  const fs::SectorBasis sector = fs::SectorBasis::particle_sector(2, 2, 0);
  const ansatz::AnsatzProgram program =
      ansatz::make_tups_program(sector, sector.csf_onv(), cfg.layers);

  NoiseStudyResult res;
  for (const auto& pname : cfg.parameterizations) {
    sampler::EnsembleOptions opt;
    opt.param = response::parameterization_from_string(pname);
    opt.kappa_grid = linspace(cfg.kappa_min, cfg.kappa_max, cfg.kappa_points);
    opt.plan = {cfg.shots, cfg.repetitions, cfg.seed};
    opt.solve = {cfg.cond_threshold, cfg.metric_floor, 0.0};
    res.rows[pname] = sampler::run_noise_ensemble(sys.mo, sector, program, opt);
  }
  return res;
}

namespace {

std::vector<double> kappa_vector_to_std(const orbrot::KappaParams& kp) { return kp.values(); }

}  // namespace

CondMaxResult run_cond_max(const ExperimentConfig& cfg) {
  const PreparedSystem sys = prepare_system(cfg.system);
  const int n_mo = sys.ao.n_ao;
  const int n_el = sys.mol.n_electrons();

  const fs::SectorBasis sector = fs::SectorBasis::particle_sector(n_mo, n_el, 0);
  const fs::HamiltonianBuilder hb(sector);
  const Matrix h0 = hb.build(sys.mo);
  fs::OperatorMatrix hop{&sector, h0, true};
  const fs::FCISolution fci = fs::fci_solve(hop);

  const ansatz::AnsatzProgram program =
      ansatz::make_tups_program(sector, sector.csf_onv(), cfg.layers);
  ansatz::OptimizeOptions base_opt;
  base_opt.target_energy = fci.e0;
  base_opt.target_tol = 1e-7;
  const ansatz::GroundState base = ansatz::optimize_ground_state(program, h0, base_opt);

  CondMaxResult res;
  res.fci_energy = fci.e0;
  res.hf_energy = sys.scf.e_hf;

  // Verify that every orbital-rotation parameter is redundant before using it
  // as a search direction.
  ansatz::OptimizeOptions verify_opt;
  verify_opt.restarts = 1;
  for (int p = 0; p < n_mo; ++p)
    for (int q = p + 1; q < n_mo; ++q)
      res.redundancy.push_back(ansatz::check_kappa_redundancy(
          program, sys.mo, p, q, linspace(-M_PI / 2, M_PI / 2, cfg.cm_verify_points), verify_opt));
  for (const auto& rep : res.redundancy)
    if (!rep.redundant)
      throw Error("cond_max: kappa(" + std::to_string(rep.p) + "," + std::to_string(rep.q) +
                  ") failed the redundancy check (drift " + std::to_string(rep.max_drift) + ")");

  const response::ExcitationOperatorSet excitations =
      response::build_excitation_basis(sector, sector.csf_onv());
  const int n_kappa = n_mo * (n_mo - 1) / 2;

  for (const auto& pname : cfg.parameterizations) {
    const Parameterization param = response::parameterization_from_string(pname);
    CondMaxParamResult pr;
    pr.param = pname;

    const response::ResponseMatrices rm_hf = response::build_response_matrices(
        param, {base.state, nullptr, Vector()}, h0, excitations);
    pr.cond_hf = response::condition_number(rm_hf.sigma);

    Vector theta_warm = base.theta;
    auto evaluate = [&](const Vector& kvec, double& cond_out, double& drift_out) -> bool {
      orbrot::KappaParams kp(n_mo);
      std::vector<double> vals(kvec.data(), kvec.data() + kvec.size());
      kp.set_values(vals);
      const orbrot::MOIntegrals mo_rot = orbrot::rotate_integrals(sys.mo, kp);
      const Matrix h = hb.build(mo_rot);
      ansatz::OptimizeOptions oopt;
      oopt.quick = true;
      oopt.theta0 = theta_warm;
      oopt.target_energy = fci.e0;
      oopt.target_tol = 1e-6;  // trials missing FCI by more are rejected
      oopt.restarts = 1;
      oopt.nm_max_iter = 800;
      oopt.bfgs_max_iter = 250;
      ansatz::GroundState gs;
      try {
        gs = ansatz::optimize_ground_state(program, h, oopt);
      } catch (const OptimizationError&) {
        return false;
      }
      theta_warm = gs.theta;
      drift_out = std::abs(gs.energy - fci.e0);
      const response::ResponseMatrices rm = response::build_response_matrices(
          param, {gs.state, nullptr, Vector()}, h, excitations);
      cond_out = response::condition_number(rm.sigma);
      return true;
    };

    auto objective = [&](const Vector& kvec) -> double {
      for (int i = 0; i < kvec.size(); ++i)
        if (std::abs(kvec(i)) > M_PI) return 1e6;
      double cond, drift;
      if (!evaluate(kvec, cond, drift)) {
        ++pr.rejected_trials;
        return 1e6;
      }
      ++pr.accepted_trials;
      pr.max_energy_drift = std::max(pr.max_energy_drift, drift);
      if (!std::isfinite(cond)) return -300.0;
      return -std::log10(std::max(cond, 1.0));
    };

    std::mt19937 rng(static_cast<unsigned>(cfg.seed) ^ static_cast<unsigned>(pname.size() * 7919));
    std::uniform_real_distribution<double> box(-M_PI, M_PI);

    double best_f = std::numeric_limits<double>::infinity();
    Vector best_kappa = Vector::Zero(n_kappa);
    for (int restart = 0; restart < cfg.cm_restarts; ++restart) {
      Vector start = Vector::Zero(n_kappa);
      if (restart > 0)
        for (int i = 0; i < n_kappa; ++i) start(i) = box(rng);
      opt::NelderMeadOptions nm;
      nm.step = 0.3;
      nm.size_tol = 1e-13;
      nm.max_iter = cfg.cm_max_iter;
      const opt::Result r = opt::nelder_mead(objective, start, nm);
      if (r.f < best_f) {
        best_f = r.f;
        best_kappa = r.x;
      }
    }

    double cond_final = 0.0, drift_final = 0.0;
    theta_warm = base.theta;
    if (!evaluate(best_kappa, cond_final, drift_final))
      throw Error("cond_max: final point failed re-optimization");
    pr.cond_div = cond_final;
    pr.final_energy_drift = drift_final;
    orbrot::KappaParams kp(n_mo);
    std::vector<double> vals(best_kappa.data(), best_kappa.data() + best_kappa.size());
    kp.set_values(vals);
    pr.kappa_div = kappa_vector_to_std(kp);
    res.params.push_back(std::move(pr));
  }
  return res;
}

SpectrumResult run_spectrum(const ExperimentConfig& cfg) {
  const PreparedSystem sys = prepare_system(cfg.system);
  const int n_mo = sys.ao.n_ao;
  const int n_el = sys.mol.n_electrons();
  const fs::SectorBasis sector = fs::SectorBasis::particle_sector(n_mo, n_el, 0);
  const fs::HamiltonianBuilder hb(sector);
  fs::OperatorMatrix hop{&sector, hb.build(sys.mo), true};
  const fs::FCISolution fci = fs::fci_solve(hop);

  std::map<std::string, std::vector<double>> kappa_by_param;
  if (cfg.orbitals == "kappa_div") {
    if (cfg.kappa_div_file.empty())
      throw Error("spectrum: orbitals=kappa_div needs kappa_div_file");
    std::ifstream in(cfg.kappa_div_file);
    if (!in) throw Error("spectrum: cannot open " + cfg.kappa_div_file);
    nlohmann::json j;
    in >> j;
    for (const auto& pr : j.at("params"))
      kappa_by_param[pr.at("param").get<std::string>()] =
          pr.at("kappa_div").get<std::vector<double>>();
  }

  const ansatz::AnsatzProgram program =
      ansatz::make_tups_program(sector, sector.csf_onv(), cfg.layers);
  const response::ExcitationOperatorSet excitations =
      response::build_excitation_basis(sector, sector.csf_onv());
  const response::SolveOptions solve_opt{cfg.cond_threshold, cfg.metric_floor, 0.0};
  response::SpectrumOptions spec_opt;
  spec_opt.fwhm = cfg.fwhm;
  spec_opt.allow_flagged = true;

  SpectrumResult res;
  res.fci_energy = fci.e0;

  for (const auto& pname : cfg.parameterizations) {
    const Parameterization param = response::parameterization_from_string(pname);
    SpectrumParamResult pr;
    pr.param = pname;

    orbrot::KappaParams kp(n_mo);
    if (cfg.orbitals == "kappa_div") {
      auto it = kappa_by_param.find(pname);
      if (it == kappa_by_param.end())
        throw Error("spectrum: no kappa_div entry for parameterization " + pname);
      kp.set_values(it->second);
    }
    pr.kappa = kp.values();

    const orbrot::MOIntegrals mo_rot = orbrot::rotate_integrals(sys.mo, kp);
    const Matrix h = hb.build(mo_rot);
    ansatz::OptimizeOptions oopt;
    oopt.target_energy = fci.e0;
    oopt.target_tol = 1e-7;
    const ansatz::GroundState gs = ansatz::optimize_ground_state(program, h, oopt);

    const response::ResponseMatrices rm_ref = response::build_response_matrices(
        param, {gs.state, nullptr, Vector()}, h, excitations);
    const response::ResponseSolution sol_ref = response::solve_response(rm_ref, solve_opt);
    const response::SpectrumData ref = response::compute_spectrum(sol_ref, rm_ref, mo_rot.d, spec_opt);
    pr.reference = {ref.omega, ref.oscillator_strength, ref.omega.empty(), sol_ref.flagged};

    const sampler::ShotPlan plan{cfg.shots, cfg.repetitions, cfg.seed};
    const sampler::NoisyResponseSampler noisy(param, sector, gs.state, mo_rot, excitations, plan);
    for (const auto& rm : noisy.sample_all()) {
      SpectrumRep rep;
      try {
        const response::ResponseSolution sol = response::solve_response(rm, solve_opt);
        rep.flagged = sol.flagged;
        if (sol.omega.empty()) {
          rep.failed = true;
        } else {
          const response::SpectrumData sd = response::compute_spectrum(sol, rm, mo_rot.d, spec_opt);
          rep.omega = sd.omega;
          rep.strength = sd.oscillator_strength;
        }
      } catch (const Error&) {
        rep.failed = true;
      }
      pr.reps.push_back(std::move(rep));
    }
    res.params.push_back(std::move(pr));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Output writers.

void write_outputs(const KappaScanResult& res, const ExperimentConfig& cfg, Manifest& manifest) {
  const std::string dir = cfg.out_dir + "/";
  {
    CsvWriter w(dir + "ci_coeffs.csv", cfg.hash(), cfg.seed,
                {"kappa", "c_1100", "c_1001_0110", "c_0011"});
    for (size_t i = 0; i < res.kappa.size(); ++i)
      w.row(std::vector<double>{res.kappa[i], res.c1100[i], res.cs[i], res.c0011[i]});
    manifest.add_output(dir + "ci_coeffs.csv");
  }
  {
    std::vector<std::string> cols{"kappa"};
    for (const auto& c : res.curves) {
      cols.push_back("omega_" + c.param);
      cols.push_back("flag_" + c.param);
    }
    CsvWriter w(dir + "omega_vs_kappa.csv", cfg.hash(), cfg.seed, cols);
    for (size_t i = 0; i < res.kappa.size(); ++i) {
      std::vector<std::string> row{format_double(res.kappa[i])};
      for (const auto& c : res.curves) {
        // Flagged omegas are written as empty fields so plots show gaps.
        row.push_back(c.flagged[i] ? "" : format_double(c.omega[i]));
        row.push_back(c.flagged[i] ? "1" : "0");
      }
      w.row(row);
    }
    manifest.add_output(dir + "omega_vs_kappa.csv");
  }
  {
    std::vector<std::string> cols{"kappa", "det_naive_analytic", "det_proj_analytic"};
    for (const auto& c : res.curves) {
      cols.push_back("det_sigma_" + c.param);
      cols.push_back("cond_sigma_" + c.param);
    }
    CsvWriter w(dir + "det_sigma.csv", cfg.hash(), cfg.seed, cols);
    for (size_t i = 0; i < res.kappa.size(); ++i) {
      std::vector<double> row{res.kappa[i], res.det_naive_analytic[i], res.det_proj_analytic[i]};
      for (const auto& c : res.curves) {
        row.push_back(c.det_sigma[i]);
        row.push_back(c.cond_sigma[i]);
      }
      w.row(row);
    }
    manifest.add_output(dir + "det_sigma.csv");
  }
  {
    CsvWriter w(dir + "singular_points.csv", cfg.hash(), cfg.seed, {"type", "kappa"});
    for (double k : res.naive_roots) w.row(std::vector<std::string>{"naive", format_double(k)});
    for (double k : res.proj_roots) w.row(std::vector<std::string>{"proj", format_double(k)});
    manifest.add_output(dir + "singular_points.csv");
  }
}

void write_outputs(const DissociationResult& res, const ExperimentConfig& cfg, Manifest& manifest) {
  const std::string dir = cfg.out_dir + "/";
  {
    CsvWriter w(dir + "omega_vs_R.csv", cfg.hash(), cfg.seed,
                {"r_angstrom", "omega_naive", "flag_naive", "omega_sc", "flag_sc",
                 "det_sigma_naive"});
    for (size_t i = 0; i < res.r_angstrom.size(); ++i) {
      std::vector<std::string> row{format_double(res.r_angstrom[i]),
                                   res.naive_flagged[i] ? "" : format_double(res.omega_naive[i]),
                                   res.naive_flagged[i] ? "1" : "0",
                                   res.sc_flagged[i] ? "" : format_double(res.omega_sc[i]),
                                   res.sc_flagged[i] ? "1" : "0",
                                   format_double(res.det_naive[i])};
      w.row(row);
    }
    manifest.add_output(dir + "omega_vs_R.csv");
  }
  {
    CsvWriter w(dir + "coeffs_vs_R.csv", cfg.hash(), cfg.seed,
                {"r_angstrom", "c_1100", "c_1001_0110", "c_0011"});
    for (size_t i = 0; i < res.r_angstrom.size(); ++i)
      w.row(std::vector<double>{res.r_angstrom[i], res.c1100[i], res.cs[i], res.c0011[i]});
    manifest.add_output(dir + "coeffs_vs_R.csv");
  }
}

void write_outputs(const NoiseStudyResult& res, const ExperimentConfig& cfg, Manifest& manifest) {
  for (const auto& [pname, rows] : res.rows) {
    const std::string path = cfg.out_dir + "/noise_" + pname + ".csv";
    CsvWriter w(path, cfg.hash(), cfg.seed,
                {"kappa", "mean_omega", "std_omega", "cond_sigma", "n_excluded", "seed"});
    for (const auto& r : rows) {
      std::vector<std::string> row{format_double(r.kappa),       format_double(r.mean_omega),
                                   format_double(r.std_omega),   format_double(r.cond_sigma),
                                   std::to_string(r.n_excluded), std::to_string(r.seed)};
      w.row(row);
    }
    manifest.add_output(path);
  }
}

void write_outputs(const CondMaxResult& res, const ExperimentConfig& cfg, Manifest& manifest) {
  nlohmann::json j;
  j["fci_energy"] = res.fci_energy;
  j["hf_energy"] = res.hf_energy;
  j["redundancy"] = nlohmann::json::array();
  for (const auto& rep : res.redundancy)
    j["redundancy"].push_back({{"p", rep.p},
                               {"q", rep.q},
                               {"max_drift", rep.max_drift},
                               {"redundant", rep.redundant}});
  j["params"] = nlohmann::json::array();
  for (const auto& pr : res.params)
    j["params"].push_back({{"param", pr.param},
                           {"kappa_div", pr.kappa_div},
                           {"cond_hf", pr.cond_hf},
                           {"cond_div", pr.cond_div},
                           {"max_energy_drift", pr.max_energy_drift},
                           {"final_energy_drift", pr.final_energy_drift},
                           {"accepted_trials", pr.accepted_trials},
                           {"rejected_trials", pr.rejected_trials}});
  const std::string path = cfg.out_dir + "/cond_max_report.json";
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << j.dump(2) << "\n";
  manifest.add_output(path);
}

void write_outputs(const SpectrumResult& res, const ExperimentConfig& cfg, Manifest& manifest) {
  const std::string dir = cfg.out_dir + "/";
  const double sigma = cfg.fwhm / 2.354820045;
  for (const auto& pr : res.params) {
    auto write_rep = [&](const SpectrumRep& rep, const std::string& tag) {
      const std::string sticks = dir + pr.param + "_sticks_" + tag + ".csv";
      CsvWriter w(sticks, cfg.hash(), cfg.seed, {"omega", "oscillator_strength"});
      for (size_t i = 0; i < rep.omega.size(); ++i)
        w.row(std::vector<double>{rep.omega[i], rep.strength[i]});
      manifest.add_output(sticks);
      if (rep.failed)
        manifest.note(pr.param + " " + tag + ": no physical solutions (empty stick list)");

      const std::string broad = dir + pr.param + "_broadened_" + tag + ".csv";
      CsvWriter wb(broad, cfg.hash(), cfg.seed, {"energy", "intensity"});
      if (!rep.omega.empty()) {
        const double lo =
            std::max(0.0, *std::min_element(rep.omega.begin(), rep.omega.end()) - 5 * sigma);
        const double hi = *std::max_element(rep.omega.begin(), rep.omega.end()) + 5 * sigma;
        for (int k = 0; k < 400; ++k) {
          const double e = lo + (hi - lo) * k / 399;
          double intensity = 0.0;
          for (size_t s = 0; s < rep.omega.size(); ++s)
            intensity +=
                rep.strength[s] * std::exp(-0.5 * std::pow((e - rep.omega[s]) / sigma, 2));
          wb.row(std::vector<double>{e, intensity});
        }
      }
      manifest.add_output(broad);
    };
    write_rep(pr.reference, "ref");
    for (size_t k = 0; k < pr.reps.size(); ++k) write_rep(pr.reps[k], "rep" + std::to_string(k));
  }
}

int run_command(const ExperimentConfig& cfg) {
  ensure_directory(cfg.out_dir);
  Manifest manifest;
  manifest.command = cfg.kind;
  manifest.seed = cfg.seed;
  manifest.config_hash = cfg.hash();
  try {
    if (cfg.kind == "kappa_scan") {
      write_outputs(run_kappa_scan(cfg), cfg, manifest);
    } else if (cfg.kind == "dissociation") {
      write_outputs(run_dissociation(cfg), cfg, manifest);
    } else if (cfg.kind == "noise_study") {
      write_outputs(run_noise_study(cfg), cfg, manifest);
    } else if (cfg.kind == "cond_max") {
      write_outputs(run_cond_max(cfg), cfg, manifest);
    } else if (cfg.kind == "spectrum") {
      write_outputs(run_spectrum(cfg), cfg, manifest);
    } else {
      throw Error("unknown experiment kind: " + cfg.kind);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    manifest.note(std::string("error: ") + e.what());
    manifest.write(cfg.out_dir + "/manifest.json");
    return 1;
  }
  manifest.write(cfg.out_dir + "/manifest.json");
  return 0;
}

}  // namespace qlr::labcli
