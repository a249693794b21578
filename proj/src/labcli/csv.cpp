// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/labcli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <json.hpp>

namespace qlr::labcli {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed,
                     const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
  if (!out_) throw Error("cannot open output file: " + path);
  char head[128];
  std::snprintf(head, sizeof(head), "# qlrlab v%s config_hash=%016llx seed=%llu", kVersion,
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out_ << head << "\n";
  for (size_t i = 0; i < columns.size(); ++i) out_ << columns[i] << (i + 1 < n_cols_ ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_) throw Error("CsvWriter: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    out_ << format_double(values[i]) << (i + 1 < n_cols_ ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& values) {
  if (values.size() != n_cols_) throw Error("CsvWriter: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    out_ << values[i] << (i + 1 < n_cols_ ? "," : "");
  out_ << "\n";
}

void Manifest::write(const std::string& path) const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(config_hash));
  j["config_hash"] = hash;
  j["outputs"] = outputs;
  j["notes"] = notes;
  std::ofstream out(path);
  if (!out) throw Error("cannot open manifest file: " + path);
  out << j.dump(2) << "\n";
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error("cannot create output directory " + path + ": " + ec.message());
}

}  // namespace qlr::labcli
