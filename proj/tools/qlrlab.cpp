// Copyright (c) 2026 qlrlab developers
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>

#include "qlrlab/labcli/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qlrlab - quantum linear response divergence laboratory"};
  app.require_subcommand(1);

  struct Common {
    std::string config;
    std::string out;
    std::string param;
    long shots = -1;
    int reps = -1;
    long long seed = -1;
  };

  const std::vector<std::string> kinds = {"kappa_scan", "dissociation", "noise_study", "cond_max",
                                          "spectrum"};
  std::map<std::string, Common> opts;
  for (const auto& kind : kinds) {
    auto* sub = app.add_subcommand(kind);
    auto& o = opts[kind];
    sub->add_option("--config", o.config, "config file (key = value sections)");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "master RNG seed");
    sub->add_option("--shots", o.shots, "shots per Pauli term");
    sub->add_option("--reps", o.reps, "sampling repetitions");
    sub->add_option("--param", o.param, "restrict to one parameterization (naive|proj|sc|st)");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string kind = app.get_subcommands().front()->get_name();
  const Common& o = opts[kind];
  try {
    qlr::labcli::ExperimentConfig cfg =
        o.config.empty() ? qlr::labcli::default_config(kind) : qlr::labcli::load_config(o.config);
    if (!o.config.empty() && cfg.kind != kind)
      throw qlr::Error("config kind '" + cfg.kind + "' does not match subcommand '" + kind + "'");
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (o.shots >= 0) cfg.shots = o.shots;
    if (o.reps >= 0) cfg.repetitions = o.reps;
    if (!o.param.empty()) cfg.parameterizations = {o.param};
    return qlr::labcli::run_command(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
