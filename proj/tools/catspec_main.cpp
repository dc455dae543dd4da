// Command-line driver: parse flags, assemble the configuration
// (defaults <- optional --paper-defaults <- --config file <- --set
// overrides), run the requested subcommand and write its outputs.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "catspec/config.hpp"
#include "catspec/errors.hpp"
#include "catspec/runs.hpp"
#include "catspec/version.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"catspec: recoil-amplified single-photon absorption "
               "spectroscopy simulator"};
  app.set_version_flag("--version", catspec::kVersion);

  std::string subcommand;
  app.add_option("subcommand", subcommand,
                 "modes | signal | kickscan | excite | pulsescan | spectrum "
                 "| dvr | validate")
      ->required();

  std::string config_path;
  app.add_option("--config", config_path, "configuration file");
  bool paper_defaults = false;
  app.add_flag("--paper-defaults", paper_defaults,
               "start from the reference parameter set");
  std::vector<std::string> overrides;
  app.add_option("--set", overrides,
                 "override a key, e.g. --set run.eta=0.02 or --set eta=0.02");
  std::string out_base;
  app.add_option("--out", out_base,
                 "output directory (default run.out_dir or $CATSPEC_OUT_DIR)");
  std::string dump_config;
  app.add_option("--dump-config", dump_config,
                 "write the resolved configuration to a file and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    catspec::config::RunConfig config =
        paper_defaults ? catspec::config::RunConfig::paper_defaults()
                       : catspec::config::RunConfig::defaults();
    if (!config_path.empty()) config.merge_file(config_path);
    for (const auto& assignment : overrides) config.set_override(assignment);

    if (!dump_config.empty()) {
      std::ofstream out(dump_config, std::ios::binary);
      if (!out) throw catspec::ConfigError("cannot write " + dump_config);
      out << config.serialize();
      std::cout << "wrote " << dump_config << "\n";
      return 0;
    }

    const auto resolved = catspec::config::resolve(config);
    const auto output = catspec::runs::dispatch(subcommand, resolved);
    std::cout << output.text;

    if (!output.files.empty()) {
      fs::path dir = resolved.out_dir;
      if (!out_base.empty()) {
        dir = out_base;
      } else if (const char* env = std::getenv("CATSPEC_OUT_DIR")) {
        dir = env;
      }
      fs::create_directories(dir);
      for (const auto& file : output.files) {
        const fs::path path = dir / file.name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw catspec::Error("cannot write " + path.string());
        out << file.content;
        std::cout << "wrote " << path.string() << "\n";
      }
    }
    return 0;
  } catch (const catspec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
