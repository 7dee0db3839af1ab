// Command-line front end: `fhc run <config.ini>` executes a configured job
// and writes its artifact tree; `fhc reproduce <manifest.txt>` re-runs a
// recorded experiment and compares outputs.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fhc/config.hpp"
#include "fhc/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fractional Choquard variational toolkit"};
  app.require_subcommand(1);

  std::string config_path, manifest_path;
  CLI::App* cmd_run = app.add_subcommand("run", "execute a run configuration");
  cmd_run->add_option("config", config_path, "INI run configuration")->required();
  CLI::App* cmd_rep =
      app.add_subcommand("reproduce", "re-run a recorded experiment from its manifest");
  cmd_rep->add_option("manifest", manifest_path, "manifest.txt of a previous run")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    fhc::RunResult res;
    if (cmd_run->parsed()) {
      const fhc::RunConfig cfg = fhc::validate_config(fhc::parse_ini_file(config_path));
      res = fhc::run(cfg);
    } else {
      res = fhc::reproduce(manifest_path);
    }
    if (!res.message.empty()) std::fprintf(stderr, "%s\n", res.message.c_str());
    std::printf("artifacts: %s\n", res.artifact_dir.string().c_str());
    return res.exit_code;
  } catch (const fhc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return fhc::exit_config_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
