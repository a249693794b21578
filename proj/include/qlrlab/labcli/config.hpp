// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlrlab/core.hpp"

namespace qlr::labcli {

struct SystemSpec {
  std::vector<std::string> elements;
  std::vector<std::array<double, 3>> geometry_bohr;
  int charge = 0;
  std::string basis;  // resolved as <basis_dir>/<basis>.gbs
  std::string basis_dir = "data/basis";
};

// One flat config drives every experiment kind; the schema (docs/config.md)
// says which sections apply where. Unknown keys are rejected at parse time.
struct ExperimentConfig {
  std::string kind;
  SystemSpec system;

  // [scan]
  double kappa_min = -1.5707963267948966;
  double kappa_max = 1.5707963267948966;
  int kappa_points = 129;

  // [dissociation] (angstrom)
  double r_min = 0.5;
  double r_max = 10.0;
  int r_points = 96;
  std::vector<double> r_extra;

  // [response]
  std::vector<std::string> parameterizations;
  double cond_threshold = 1e8;
  double metric_floor = 1e-6;

  // [ansatz]
  std::string ansatz = "uccsd";  // uccsd | tups
  int layers = 1;

  // [sampling]
  long shots = 1000;
  int repetitions = 100;
  std::uint64_t seed = 1234;

  // [cond_max]
  int cm_restarts = 5;
  int cm_max_iter = 1500;
  int cm_verify_points = 9;

  // [spectrum]
  std::string orbitals = "hf";  // hf | kappa_div
  std::string kappa_div_file;
  double fwhm = 0.05;

  // [output]
  std::string out_dir = "out";

  std::string canonical_text() const;
  std::uint64_t hash() const;  // FNV-1a 64 over canonical_text()
};

ExperimentConfig default_config(const std::string& kind);
ExperimentConfig load_config(const std::string& path);

// Nuclear charge lookup for the supported light elements.
double element_charge(const std::string& symbol);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace qlr::labcli
