#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cprsim/config.hpp"
#include "cprsim/io.hpp"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

// CLI flag -> config key; flags override values from --config.
const Flag kFlags[] = {
    {"--model", "model.family", "model family"},
    {"--T", "model.T", "resource growth rate"},
    {"--ec", "model.ec", "normalized cooperator extraction"},
    {"--ed", "model.ed", "normalized defector extraction"},
    {"--w", "model.w", "constant greed (minimal model)"},
    {"--c", "model.c", "resource/conformity weight (rc_linear)"},
    {"--a", "model.a", "quadratic coefficient"},
    {"--n-players", "abm.n_players", "population size"},
    {"--net", "abm.net", "complete, ba or sw"},
    {"--seed", "abm.seed", "master seed"},
    {"--t-end", "abm.t_end", "ABM horizon"},
    {"--r0", "abm.r0", "initial resource"},
    {"--x0", "abm.x0", "initial cooperator fraction"},
    {"--realizations", "sweep.realizations", "ensemble size"},
    {"--threads", "sweep.threads", "worker threads (0 = all cores)"},
    {"--out", "output.dir", "output directory"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common-pool resource / greed dynamics simulator"};
  app.set_version_flag("--version", std::string(CPRSIM_VERSION));

  std::string subcommand;
  std::string config_path;
  std::string grid;
  std::vector<std::string> overrides;
  bool print_config = false;

  std::ostringstream names;
  for (const auto& n : cprsim::subcommand_names()) names << (names.tellp() ? ", " : "") << n;
  app.add_option("subcommand", subcommand, "one of: " + names.str())
      ->required()
      ->check(CLI::IsMember(cprsim::subcommand_names()));
  app.add_option("--config", config_path, "configuration file");

  std::vector<std::string> flag_values(std::size(kFlags));
  for (std::size_t i = 0; i < std::size(kFlags); ++i) {
    app.add_option(kFlags[i].name, flag_values[i], kFlags[i].help);
  }
  app.add_option("--grid", grid, "lattice size N or RxX");
  app.add_option("--set", overrides, "extra section.key=value overrides");
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cprsim::kExitUsage;
  }

  cprsim::ConfigText text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return cprsim::kExitIo;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      text = cprsim::ConfigText::parse(buf.str());
    } catch (const cprsim::ConfigError& e) {
      std::cerr << config_path << ": " << e.what() << "\n";
      return cprsim::kExitUsage;
    }
  }

  for (std::size_t i = 0; i < std::size(kFlags); ++i) {
    if (app.count(kFlags[i].name)) text.set(kFlags[i].key, flag_values[i]);
  }
  if (!grid.empty()) {
    const auto x = grid.find('x');
    text.set("sweep.r0_points", grid.substr(0, x));
    text.set("sweep.x0_points", x == std::string::npos ? grid : grid.substr(x + 1));
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || kv.find('.') > eq) {
      std::cerr << "error: --set expects section.key=value, got '" << kv << "'\n";
      return cprsim::kExitUsage;
    }
    text.set(kv.substr(0, eq), kv.substr(eq + 1));
  }

  cprsim::RunConfig config;
  try {
    config = cprsim::resolve_config(text);
  } catch (const cprsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cprsim::kExitUsage;
  }
  if (print_config) {
    std::cout << cprsim::serialize(config);
    return cprsim::kExitOk;
  }
  const int status = cprsim::run_subcommand(subcommand, config, std::cerr);
  if (status == cprsim::kExitOk) {
    std::cerr << subcommand << ": results written to " << config.output.directory << "\n";
  }
  return status;
}
