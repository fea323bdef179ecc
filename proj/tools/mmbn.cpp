// Experiment runner: sweeps, Monte-Carlo seeds and CSV output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mmbn/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mmbn::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-operator mmWave backhaul simulator"};
  std::string config_path, preset, out_dir, schemes;
  std::size_t seeds = 0;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  bool print_config = false;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "JSON config with 'defaults' and 'experiment' blocks");
  app.add_option("--preset", preset, "fig3, fig4, fig5, fig6, fig7, fig8, fig9 or overhead");
  app.add_option("--out", out_dir, "output directory (default: $MMBN_OUT_DIR or ./results)");
  app.add_option("--seeds", seeds, "number of Monte-Carlo seeds");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--scheme", schemes, "comma-separated: cooperative, noncoop, random, optimal");
  app.add_flag("--print-config", print_config, "print the resolved config and exit");
  app.add_option("overrides", overrides, "key=value parameter overrides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  mmbn::ExperimentConfig cfg;
  try {
    if (!preset.empty()) cfg = mmbn::make_preset(preset);
    if (!config_path.empty()) cfg = mmbn::config_from_text(read_file(config_path), cfg);
    for (const auto& o : overrides) mmbn::apply_override(cfg, o);
    if (seeds > 0) cfg.seeds = seeds;
    if (!schemes.empty()) mmbn::apply_override(cfg, "schemes=" + schemes);
    mmbn::validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  if (print_config) {
    std::cout << mmbn::config_to_json(cfg).dump(2) << '\n';
    return kOk;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv("MMBN_OUT_DIR");
    out_dir = env && *env ? env : "results";
  }

  try {
    mmbn::run_experiment(cfg, out_dir, workers);
  } catch (const mmbn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  std::cout << "wrote " << out_dir << '\n';
  return kOk;
}
