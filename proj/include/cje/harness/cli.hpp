#pragma once

// Command-line front end: parses flags with CLI11, merges them over an optional
// config file, runs one command and writes its manifest.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "cje/errors.hpp"
#include "cje/harness/commands.hpp"
#include "cje/harness/config.hpp"
#include "cje/harness/manifest.hpp"

namespace cje::harness {

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitConfigError = 2 };

/// Run the CLI. Data goes to `out` unless --out is given; diagnostics and, in
/// that case, the manifest go to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circular Jacobi ensemble sampler and verifier"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::string> flags;

  const std::vector<std::pair<std::string, std::string>> flag_help{
      {"n", "matrix dimension"},
      {"beta", "inverse temperature"},
      {"delta_re", "Re(delta)"},
      {"delta_im", "Im(delta)"},
      {"d_re", "Re(d) for asymptotic commands (delta = beta' n d)"},
      {"d_im", "Im(d) for asymptotic commands"},
      {"samples", "number of samples"},
      {"bins", "histogram bins"},
      {"seed", "RNG seed"},
      {"stream", "RNG stream id"},
      {"out", "output path; data goes there and the manifest to <out>.manifest.json (verify: the manifest itself)"},
      {"format", "csv or json"},
      {"ladder", "comma-separated dimensions for esd-convergence"},
      {"reps", "replicates per dimension"},
      {"grid", "grid intervals for plot-data"},
      {"table", "plot-data table: density or mft"},
      {"suite", "verify suite: all, deterministic or statistical"},
      {"seeds", "verify: number of seeds in the statistical sweep"},
      {"inject_fault", "test hook: none or ggt-sign"},
      {"threads", "worker threads"}};

  std::vector<CLI::App*> subs;
  for (const auto& [name, help] :
       {std::pair<std::string, std::string>{"sample", "sample spectra to CSV/JSON"},
        {"verify", "run the verification suites"},
        {"esd-convergence", "KS distances to the limit measure along a ladder of n"},
        {"plot-data", "tabulate the limit density, potential and CDF"},
        {"dump-matrix", "dump one sampled matrix"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value config file");
    for (const auto& [key, text] : flag_help) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      sub->add_option("--" + flag, flags[key], text);
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  ExperimentConfig cfg;
  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& [key, text] : flag_help) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (chosen->count("--" + flag) > 0) apply_setting(cfg, key, flags[key], "--" + flag + ": ");
    }
    validate(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  RunManifest manifest(cfg);
  OutputSink sink{cfg, out, manifest};
  int code = kExitPass;
  try {
    if (cfg.command == "sample") cmd_sample(cfg, manifest, sink);
    else if (cfg.command == "esd-convergence") cmd_esd_convergence(cfg, manifest, sink);
    else if (cfg.command == "plot-data") cmd_plot_data(cfg, manifest, sink);
    else if (cfg.command == "dump-matrix") cmd_dump_matrix(cfg, manifest, sink);
    else cmd_verify(cfg, manifest, out);
    code = manifest.passed() ? kExitPass : kExitCheckFailure;
  } catch (const ParameterError& e) {
    // Preconditions that depend on several keys at once (e.g. Re delta for a
    // derived d) surface here rather than in validate().
    err << "config error: " << e.what() << "\n";
    manifest.set_error(e.what());
    code = kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    manifest.set_error(e.what());
    code = kExitCheckFailure;
  }

  const std::string text = manifest.to_json().dump(2) + "\n";
  if (cfg.out.empty()) {
    err << text;
  } else {
    const std::string path = cfg.command == "verify" ? cfg.out : cfg.out + ".manifest.json";
    try {
      write_file(path, text);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitCheckFailure;
    }
  }
  return code;
}

}  // namespace cje::harness
