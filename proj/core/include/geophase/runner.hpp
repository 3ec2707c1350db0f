#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geophase/config.hpp"

namespace geophase {

enum class Subcommand { generate, analyze, correlate, residual, chsh, report };

std::optional<Subcommand> parse_subcommand(std::string_view name);
std::string_view subcommand_name(Subcommand command);

struct EmittedFile {
  std::string path;  ///< relative to the output directory
  std::size_t rows = 0;
  std::string sha256;

  friend bool operator==(const EmittedFile&, const EmittedFile&) = default;
};

/// Written next to the outputs as manifest_<subcommand>.json.
struct RunManifest {
  std::string subcommand;
  std::string config_digest;  ///< sha256 of serialize_config(config)
  std::string version;
  std::string started_at;  ///< UTC, ISO 8601; the only non-deterministic field
  std::vector<EmittedFile> files;
};

/// Environment variable that replaces the built-in default output directory.
inline constexpr const char* kOutputDirEnv = "GEOPHASE_OUTPUT_DIR";

/// --out wins, then the config's output_dir, then $GEOPHASE_OUTPUT_DIR, then
/// "geophase-out".
std::filesystem::path output_directory(const ExperimentConfig& config,
                                       const std::optional<std::filesystem::path>& cli_out);

/// Events both sequences would emit over the horizon.
std::uint64_t projected_event_count(const ResolvedExperiment& experiment);

/// Runs one subcommand into `out_dir`. Throws ConfigError, ResourceError
/// (projected events above config.event_limit) or IoError.
RunManifest run_subcommand(const ExperimentConfig& config, Subcommand command,
                           const std::filesystem::path& out_dir);

std::string manifest_json(const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// True when every listed file exists and hashes to its recorded digest.
bool verify_manifest(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

}  // namespace geophase
