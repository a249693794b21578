// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>

#include "qlrlab/labcli/config.hpp"
#include "qlrlab/labcli/csv.hpp"
#include "qlrlab/molint.hpp"
#include "qlrlab/sampler.hpp"
#include "qlrlab/scf.hpp"

namespace qlr::labcli {

struct PreparedSystem {
  molint::Molecule mol;
  molint::AOIntegrals ao;
  scf::SCFResult scf;
  orbrot::MOIntegrals mo;  // Hartree-Fock orbital basis
};

// Builds the molecule, runs RHF (escalating the damping if the plain solver
// fails to converge) and transforms the integrals.
PreparedSystem prepare_system(const SystemSpec& spec);

// --------------------------------------------------------------------------
struct ParamCurve {
  std::string param;
  std::vector<double> omega;  // lowest positive; NaN when none
  std::vector<bool> flagged;
  std::vector<double> cond_sigma;
  std::vector<double> det_sigma;
  std::vector<double> sigma_identity_residual;  // max |Sigma - I|
};

struct KappaScanResult {
  std::vector<double> kappa;
  std::vector<double> c1100, cs, c0011;
  std::vector<ParamCurve> curves;
  std::vector<double> det_naive_analytic, det_proj_analytic;
  std::vector<double> naive_roots;  // kappa of |c1100| = |c0011|, bisected
  std::vector<double> proj_roots;   // kappa of c1100 = 0, bisected
  double fci_energy = 0.0;
};

KappaScanResult run_kappa_scan(const ExperimentConfig& cfg);

// --------------------------------------------------------------------------
struct DissociationResult {
  std::vector<double> r_angstrom;
  std::vector<double> c1100, cs, c0011;
  std::vector<double> omega_naive;
  std::vector<bool> naive_flagged;
  std::vector<double> omega_sc;
  std::vector<bool> sc_flagged;
  std::vector<double> det_naive;
};

DissociationResult run_dissociation(const ExperimentConfig& cfg);

// --------------------------------------------------------------------------
struct NoiseStudyResult {
  std::map<std::string, std::vector<sampler::EnsembleRow>> rows;  // per parameterization
};

NoiseStudyResult run_noise_study(const ExperimentConfig& cfg);

// --------------------------------------------------------------------------
struct CondMaxParamResult {
  std::string param;
  std::vector<double> kappa_div;  // packed p<q triangle order
  double cond_hf = 0.0;
  double cond_div = 0.0;
  double max_energy_drift = 0.0;    // over accepted trials
  double final_energy_drift = 0.0;  // at kappa_div
  int accepted_trials = 0;
  int rejected_trials = 0;
};

struct CondMaxResult {
  double fci_energy = 0.0;
  double hf_energy = 0.0;
  std::vector<ansatz::RedundancyReport> redundancy;  // all kappa pairs
  std::vector<CondMaxParamResult> params;
};

CondMaxResult run_cond_max(const ExperimentConfig& cfg);

// --------------------------------------------------------------------------
struct SpectrumRep {
  std::vector<double> omega;
  std::vector<double> strength;
  bool failed = false;   // no physical solutions
  bool flagged = false;  // singularity flag on the solve
};

struct SpectrumParamResult {
  std::string param;
  std::vector<double> kappa;  // orbital rotation actually used
  SpectrumRep reference;      // noiseless
  std::vector<SpectrumRep> reps;
};

struct SpectrumResult {
  std::vector<SpectrumParamResult> params;
  double fci_energy = 0.0;
};

SpectrumResult run_spectrum(const ExperimentConfig& cfg);

// --------------------------------------------------------------------------
// Runs the configured experiment, writes CSV outputs and the manifest into
// cfg.out_dir. Returns a nonzero exit code on hard errors.
int run_command(const ExperimentConfig& cfg);

void write_outputs(const KappaScanResult& res, const ExperimentConfig& cfg, Manifest& manifest);
void write_outputs(const DissociationResult& res, const ExperimentConfig& cfg, Manifest& manifest);
void write_outputs(const NoiseStudyResult& res, const ExperimentConfig& cfg, Manifest& manifest);
void write_outputs(const CondMaxResult& res, const ExperimentConfig& cfg, Manifest& manifest);
void write_outputs(const SpectrumResult& res, const ExperimentConfig& cfg, Manifest& manifest);

}  // namespace qlr::labcli
