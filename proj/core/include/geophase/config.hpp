#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geophase/correlation.hpp"
#include "geophase/topology.hpp"

namespace geophase {

/// How a winding chain is specified in a configuration file: an explicit
/// coefficient list, the string "random" (drawn from the seed), or, for
/// chain_b only, the string "exchanged" (exchange_chain of chain_a).
struct ChainSpec {
  enum class Kind { coefficients, random, exchanged };

  Kind kind = Kind::coefficients;
  std::vector<std::int64_t> coefficients;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

/// One reproducible experiment. Optional fields fall back to defaults
/// derived from the horizon when the experiment is resolved.
struct ExperimentConfig {
  int genus = 0;
  ChainSpec chain_a;
  ChainSpec chain_b;
  std::vector<double> betas;
  std::vector<double> periods;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::string> output_dir;

  // correlate / chsh / residual
  std::optional<double> t;
  std::size_t angle_grid = 8;
  std::optional<std::vector<double>> angles_a;
  std::optional<std::vector<double>> angles_b;
  std::size_t random_angle_pairs = 0;
  ChshSettings chsh = ChshSettings::canonical();
  AnglePair residual_angles{0.0, 0.0};
  std::optional<std::vector<double>> residual_horizons;

  // analyze
  double epsilon = 0.3;
  std::optional<double> search_bound;
  double sample_step = 0.5;
  std::optional<double> almost_period_window;
  std::size_t n_samples = 100000;
  std::optional<double> randomness_t;
  std::size_t spectrum_points = 257;
  std::optional<double> spectrum_max;
  std::int64_t max_denominator = 64;
  double commensurability_tolerance = 1e-9;

  std::int64_t random_chain_max = 3;
  std::uint64_t event_limit = 100'000'000;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates a JSON configuration. Throws ConfigError naming the
/// offending key path (e.g. "periods[0]").
ExperimentConfig parse_config(std::string_view text);

/// Reads a configuration file; I/O failures raise IoError.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON text: sorted keys, doubles at round-trip precision,
/// unset optional keys omitted.
std::string serialize_config(const ExperimentConfig& config);

/// The experiment with every seeded choice drawn and every default filled in.
struct ResolvedExperiment {
  SurfaceSpec surface;
  WindingChain chain_a;
  WindingChain chain_b;
  CycleAssignment assignment;
  double horizon;
  double t;
  std::vector<AnglePair> settings;  ///< correlate settings (grid or lists, then random draws)
  std::vector<double> residual_horizons;
  double search_bound;
  double almost_period_window;
  double randomness_t;
  double spectrum_max;

  PairConfig pair() const;
};

ResolvedExperiment resolve(const ExperimentConfig& config);

}  // namespace geophase
