// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "qlrlab/core.hpp"

namespace qlr::labcli {

std::string format_double(double v);  // %.12g; NaN renders as an empty field

// CSV with a leading comment line recording provenance, then a header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed,
            const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& values);

 private:
  std::ofstream out_;
  size_t n_cols_;
};

struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::string> outputs;
  std::vector<std::string> notes;

  void add_output(const std::string& path) { outputs.push_back(path); }
  void note(const std::string& text) { notes.push_back(text); }
  void write(const std::string& path) const;
};

void ensure_directory(const std::string& path);

}  // namespace qlr::labcli
