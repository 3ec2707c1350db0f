#pragma once

namespace geophase::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigurationError = 1,
  kResourceGuard = 2,
  kIoError = 3,
};

/// `geophase <subcommand> --config <path> [--out <dir>] [--seed <u64>]`
int run(int argc, char** argv);

}  // namespace geophase::cli
