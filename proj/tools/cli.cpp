#include "cli.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "geophase/config.hpp"
#include "geophase/errors.hpp"
#include "geophase/runner.hpp"

namespace geophase::cli {

int run(int argc, char** argv) {
  CLI::App app{"Random geometric phase sequences: generation, analysis and Bell-CHSH correlation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;

  const std::array descriptions{
      std::pair{"generate", "write the event logs of both sequences"},
      std::pair{"analyze", "almost-period, randomness, spectrum and commensurability tables"},
      std::pair{"correlate", "correlation E(theta_a, theta_b; t) over the angle settings"},
      std::pair{"residual", "residual term as a function of the horizon"},
      std::pair{"chsh", "CHSH statistic at the configured settings"},
      std::pair{"report", "summarize outputs already present in the output directory"},
  };
  std::vector<CLI::App*> commands;
  std::vector<CLI::Option*> seed_options;
  std::vector<CLI::Option*> out_options;
  for (const auto& [name, help] : descriptions) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment configuration (JSON)")->required();
    out_options.push_back(sub->add_option("--out", out_dir, "output directory"));
    seed_options.push_back(sub->add_option("--seed", seed, "override the configuration seed"));
    commands.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigurationError;
  }

  std::size_t chosen = 0;
  while (chosen < commands.size() && !commands[chosen]->parsed()) ++chosen;
  const auto command = parse_subcommand(commands[chosen]->get_name());

  try {
    ExperimentConfig config = load_config(config_path);
    if (seed_options[chosen]->count() > 0) config.seed = seed;
    std::optional<std::filesystem::path> cli_out;
    if (out_options[chosen]->count() > 0) cli_out = out_dir;
    const auto dir = output_directory(config, cli_out);
    const auto manifest = run_subcommand(config, *command, dir);
    for (const auto& f : manifest.files) {
      std::cout << (dir / f.path).string() << " (" << f.rows << " rows)\n";
    }
    return kSuccess;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigurationError;
  } catch (const ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return kResourceGuard;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigurationError;
  }
}

}  // namespace geophase::cli
