// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include "qlrlab/labcli/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qlr::labcli {

namespace {

std::string to_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

const std::map<std::string, double> kElements = {
    {"H", 1},  {"HE", 2}, {"LI", 3}, {"BE", 4}, {"B", 5},
    {"C", 6},  {"N", 7},  {"O", 8},  {"F", 9},  {"NE", 10}};

}  // namespace

double element_charge(const std::string& symbol) {
  auto it = kElements.find(to_upper(symbol));
  if (it == kElements.end()) throw Error("unsupported element: " + symbol);
  return it->second;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

ExperimentConfig default_config(const std::string& kind) {
  ExperimentConfig c;
  c.kind = kind;
  const double ang = kAngstromToBohr;
  if (kind == "kappa_scan") {
    c.system.elements = {"He"};
    c.system.geometry_bohr = {{0, 0, 0}};
    c.system.basis = "6-31g";
    c.parameterizations = {"naive", "proj", "sc", "st"};
    c.ansatz = "uccsd";
  } else if (kind == "dissociation") {
    c.system.elements = {"H", "H"};
    c.system.geometry_bohr = {{0, 0, 0}, {0, 0, 0.74 * ang}};
    c.system.basis = "sto-3g";
    c.parameterizations = {"naive", "sc"};
    c.ansatz = "uccsd";
  } else if (kind == "noise_study") {
    c.system.elements = {"He"};
    c.system.geometry_bohr = {{0, 0, 0}};
    c.system.basis = "6-31g";
    c.parameterizations = {"naive", "proj"};
    c.ansatz = "tups";
    c.layers = 1;
    c.shots = 1000;
    c.repetitions = 100;
  } else if (kind == "cond_max" || kind == "spectrum") {
    c.system.elements = {"H", "H", "H", "H"};
    c.system.geometry_bohr = {{0, 0, 0},
                              {1.5 * ang, 0, 0},
                              {0, 1.8 * ang, 0},
                              {1.5 * ang, 1.8 * ang, 0}};
    c.system.basis = "sto-3g";
    c.parameterizations = {"naive", "proj"};
    c.ansatz = "tups";
    c.layers = 3;
    if (kind == "spectrum") {
      c.shots = 100000;
      c.repetitions = 10;
    }
  } else {
    throw Error("unknown experiment kind: " + kind);
  }
  return c;
}

namespace {

struct RawConfig {
  // section -> key -> value
  std::map<std::string, std::map<std::string, std::string>> values;
};

RawConfig parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  RawConfig raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t comment = line.find_first_of("#!");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error("config parse error at line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config parse error at line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw Error("config parse error at line " + std::to_string(lineno) + ": key outside section");
    if (raw.values[section].count(key))
      throw Error("config parse error at line " + std::to_string(lineno) + ": duplicate key " + key);
    raw.values[section][key] = value;
  }
  return raw;
}

double to_double(const std::string& v, const std::string& what) {
  try {
    size_t used;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error("config: bad numeric value for " + what + ": '" + v + "'");
  }
}

long to_long(const std::string& v, const std::string& what) {
  const double d = to_double(v, what);
  return static_cast<long>(d);
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  const RawConfig raw = parse_ini(path);

  auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
    auto sit = raw.values.find(sec);
    if (sit == raw.values.end()) return nullptr;
    auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
  };

  const std::string* kind = get("experiment", "kind");
  if (!kind) throw Error("config: missing [experiment] kind");
  ExperimentConfig cfg = default_config(*kind);

  // Schema: every key the loader understands. Anything else is rejected.
  const std::map<std::string, std::set<std::string>> schema = {
      {"experiment", {"kind"}},
      {"system", {"elements", "geometry", "unit", "charge", "basis", "basis_dir"}},
      {"scan", {"kappa_min", "kappa_max", "kappa_points"}},
      {"dissociation", {"r_min", "r_max", "r_points", "r_extra"}},
      {"response", {"parameterizations", "cond_threshold", "metric_floor"}},
      {"ansatz", {"kind", "layers"}},
      {"sampling", {"shots", "repetitions", "seed"}},
      {"cond_max", {"restarts", "max_iter", "verify_grid_points"}},
      {"spectrum", {"orbitals", "kappa_div_file", "fwhm"}},
      {"output", {"directory"}},
  };
  for (const auto& [sec, kv] : raw.values) {
    auto sit = schema.find(sec);
    if (sit == schema.end()) throw Error("config: unknown section [" + sec + "]");
    for (const auto& [key, value] : kv) {
      (void)value;
      if (!sit->second.count(key))
        throw Error("config: unknown key '" + key + "' in section [" + sec + "]");
    }
  }

  if (const auto* v = get("system", "unit")) {
    if (*v != "angstrom" && *v != "bohr") throw Error("config: unit must be angstrom or bohr");
  }
  const bool bohr_units = get("system", "unit") && *get("system", "unit") == "bohr";
  if (const auto* v = get("system", "elements")) cfg.system.elements = split_ws(*v);
  if (const auto* v = get("system", "geometry")) {
    cfg.system.geometry_bohr.clear();
    std::stringstream ss(*v);
    std::string chunk;
    while (std::getline(ss, chunk, ';')) {
      const auto toks = split_ws(chunk);
      if (toks.size() != 3) throw Error("config: geometry entries need three coordinates");
      std::array<double, 3> pos{};
      for (int k = 0; k < 3; ++k)
        pos[k] = to_double(toks[k], "geometry") * (bohr_units ? 1.0 : kAngstromToBohr);
      cfg.system.geometry_bohr.push_back(pos);
    }
  }
  if (cfg.system.elements.size() != cfg.system.geometry_bohr.size())
    throw Error("config: element and geometry counts differ");
  if (const auto* v = get("system", "charge")) cfg.system.charge = static_cast<int>(to_long(*v, "charge"));
  if (const auto* v = get("system", "basis")) cfg.system.basis = *v;
  if (const auto* v = get("system", "basis_dir")) cfg.system.basis_dir = *v;

  if (const auto* v = get("scan", "kappa_min")) cfg.kappa_min = to_double(*v, "kappa_min");
  if (const auto* v = get("scan", "kappa_max")) cfg.kappa_max = to_double(*v, "kappa_max");
  if (const auto* v = get("scan", "kappa_points"))
    cfg.kappa_points = static_cast<int>(to_long(*v, "kappa_points"));

  if (const auto* v = get("dissociation", "r_min")) cfg.r_min = to_double(*v, "r_min");
  if (const auto* v = get("dissociation", "r_max")) cfg.r_max = to_double(*v, "r_max");
  if (const auto* v = get("dissociation", "r_points"))
    cfg.r_points = static_cast<int>(to_long(*v, "r_points"));
  if (const auto* v = get("dissociation", "r_extra")) {
    cfg.r_extra.clear();
    for (const auto& tok : split_ws(*v)) cfg.r_extra.push_back(to_double(tok, "r_extra"));
  }

  if (const auto* v = get("response", "parameterizations")) cfg.parameterizations = split_ws(*v);
  for (const auto& p : cfg.parameterizations)
    if (p != "naive" && p != "proj" && p != "sc" && p != "st")
      throw Error("config: unknown parameterization " + p);
  if (const auto* v = get("response", "cond_threshold"))
    cfg.cond_threshold = to_double(*v, "cond_threshold");
  if (const auto* v = get("response", "metric_floor")) cfg.metric_floor = to_double(*v, "metric_floor");

  if (const auto* v = get("ansatz", "kind")) {
    if (*v != "uccsd" && *v != "tups") throw Error("config: ansatz kind must be uccsd or tups");
    cfg.ansatz = *v;
  }
  if (const auto* v = get("ansatz", "layers")) cfg.layers = static_cast<int>(to_long(*v, "layers"));

  if (const auto* v = get("sampling", "shots")) cfg.shots = to_long(*v, "shots");
  if (const auto* v = get("sampling", "repetitions"))
    cfg.repetitions = static_cast<int>(to_long(*v, "repetitions"));
  if (const auto* v = get("sampling", "seed"))
    cfg.seed = static_cast<std::uint64_t>(to_long(*v, "seed"));

  if (const auto* v = get("cond_max", "restarts"))
    cfg.cm_restarts = static_cast<int>(to_long(*v, "restarts"));
  if (const auto* v = get("cond_max", "max_iter"))
    cfg.cm_max_iter = static_cast<int>(to_long(*v, "max_iter"));
  if (const auto* v = get("cond_max", "verify_grid_points"))
    cfg.cm_verify_points = static_cast<int>(to_long(*v, "verify_grid_points"));

  if (const auto* v = get("spectrum", "orbitals")) {
    if (*v != "hf" && *v != "kappa_div") throw Error("config: orbitals must be hf or kappa_div");
    cfg.orbitals = *v;
  }
  if (const auto* v = get("spectrum", "kappa_div_file")) cfg.kappa_div_file = *v;
  if (const auto* v = get("spectrum", "fwhm")) cfg.fwhm = to_double(*v, "fwhm");

  if (const auto* v = get("output", "directory")) cfg.out_dir = *v;

  if (cfg.kappa_points < 2 && cfg.kind != "dissociation")
    throw Error("config: kappa_points must be at least 2");
  return cfg;
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream ss;
  ss.precision(17);
  ss << "kind=" << kind << "\n";
  ss << "elements=";
  for (const auto& e : system.elements) ss << e << ",";
  ss << "\ngeometry_bohr=";
  for (const auto& g : system.geometry_bohr) ss << g[0] << "," << g[1] << "," << g[2] << ";";
  ss << "\ncharge=" << system.charge << "\nbasis=" << system.basis
     << "\nbasis_dir=" << system.basis_dir << "\nkappa=" << kappa_min << "," << kappa_max << ","
     << kappa_points << "\nr=" << r_min << "," << r_max << "," << r_points << "\nr_extra=";
  for (double r : r_extra) ss << r << ",";
  ss << "\nparams=";
  for (const auto& p : parameterizations) ss << p << ",";
  ss << "\ncond_threshold=" << cond_threshold << "\nmetric_floor=" << metric_floor
     << "\nansatz=" << ansatz << "\nlayers=" << layers << "\nshots=" << shots
     << "\nrepetitions=" << repetitions << "\nseed=" << seed << "\ncm=" << cm_restarts << ","
     << cm_max_iter << "," << cm_verify_points << "\norbitals=" << orbitals
     << "\nkappa_div_file=" << kappa_div_file << "\nfwhm=" << fwhm << "\nout=" << out_dir << "\n";
  return ss.str();
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string text = canonical_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace qlr::labcli
