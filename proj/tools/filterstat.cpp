// filterstat: filtered emission spectra and g2(0) sweeps from a JSON config.
#include <omp.h>

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "filterstat/errors.hpp"
#include "filterstat/sweep.hpp"

using namespace filterstat;

namespace {

void set_threads(int cli, int cfg) {
  int n = cli > 0 ? cli : cfg;
  if (const char* env = std::getenv("FILTERSTAT_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (...) {
      throw ConfigError("FILTERSTAT_THREADS must be an integer");
    }
  }
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtered photon statistics of quantum emitters"};
  app.require_subcommand(1);

  std::string config_path, out_dir, oracle;
  int threads = 0;
  auto* run_cmd = app.add_subcommand("run", "g2(0) sweep with minima");
  run_cmd->add_option("--config", config_path, "JSON config")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides 'output')");
  run_cmd->add_option("--oracle", oracle, "cross-check")->check(CLI::IsMember({"sensor", "kernel", "none"}));
  run_cmd->add_option("--threads", threads, "worker threads");

  auto* spec = app.add_subcommand("spectrum", "emission spectrum only");
  spec->add_option("--config", config_path, "JSON config")->required();
  spec->add_option("--out", out_dir, "output directory (overrides 'output')");
  spec->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (!oracle.empty()) cfg.oracle = oracle;
    if (!out_dir.empty()) cfg.output = out_dir;
    set_threads(threads, cfg.threads);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*spec) {
      const auto r = run_spectrum(cfg);
      write_outputs(cfg, r, cfg.output, false);
      std::cout << "spectrum: " << r.spectrum.size() << " points -> " << cfg.output << "\n";
      return 0;
    }
    const auto r = run(cfg);
    write_outputs(cfg, r, cfg.output, true);
    for (const auto& m : r.minima)
      std::cout << to_string(m.kind) << ": min g2 = " << fmt(m.min.y) << " at " << to_string(cfg.axis) << " = "
                << fmt(m.min.x) << (m.min.boundary ? " (boundary)" : "") << "\n";
    if (r.failed > 0) {
      std::cerr << r.failed << " of " << r.rows.size() << " rows failed (see g2_sweep.csv)\n";
      return 3;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
