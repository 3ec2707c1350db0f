#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "geophase/errors.hpp"
#include "geophase/phase_sequence.hpp"
#include "geophase/runner.hpp"
#include "oracles.hpp"

using namespace geophase;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("geophase_runner_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ExperimentConfig small_torus() {
  return parse_config(R"({
    "genus": 1, "chain_a": [1, 0], "chain_b": "exchanged",
    "betas": [3.883222077450933, 4.59961087822572], "periods": [1.0, 1.4142135623730951],
    "horizon": 400, "seed": 7, "angle_grid": 3, "n_samples": 2000,
    "search_bound": 50, "spectrum_points": 9
  })");
}

}  // namespace

TEST_CASE("subcommand names round trip") {
  for (auto c : {Subcommand::generate, Subcommand::analyze, Subcommand::correlate,
                 Subcommand::residual, Subcommand::chsh, Subcommand::report}) {
    CHECK(parse_subcommand(subcommand_name(c)) == c);
  }
  CHECK(!parse_subcommand("plot").has_value());
}

TEST_CASE("output directory precedence") {
  auto config = small_torus();
  ::setenv(kOutputDirEnv, "from-env", 1);
  CHECK(output_directory(config, std::nullopt) == "from-env");
  config.output_dir = "from-config";
  CHECK(output_directory(config, std::nullopt) == "from-config");
  CHECK(output_directory(config, fs::path("from-cli")) == "from-cli");
  ::unsetenv(kOutputDirEnv);
  config.output_dir.reset();
  CHECK(output_directory(config, std::nullopt) == "geophase-out");
}

TEST_CASE("genus-0 correlate and chsh follow the closed form") {
  const auto config = load_config(GEOPHASE_CONFIG_DIR "/genus0.json");
  const auto dir = scratch("genus0");
  const auto manifest = run_subcommand(config, Subcommand::correlate, dir);
  REQUIRE(manifest.files.size() == 1);
  const auto rows = csv(dir / "correlation.csv");
  CHECK(rows.size() == 64 + 16);
  CHECK(manifest.files[0].rows == rows.size());
  for (const auto& r : rows) {
    const double a = std::stod(r[0]);
    const double b = std::stod(r[1]);
    CHECK(std::abs(std::stod(r[3]) - (std::cos(a + b) + std::cos(a - b))) <= 1e-12);
  }

  run_subcommand(config, Subcommand::chsh, dir);
  const auto summary = csv(dir / "chsh_summary.csv");
  REQUIRE(summary.size() == 1);
  CHECK(std::stod(summary[0][5]) == doctest::Approx(4.0));
  CHECK(summary[0][6] == "1");
}

TEST_CASE("every subcommand writes its tables and a verifiable manifest") {
  const auto dir = scratch("all");
  const auto config = small_torus();
  for (auto c : {Subcommand::generate, Subcommand::analyze, Subcommand::correlate,
                 Subcommand::residual, Subcommand::chsh, Subcommand::report}) {
    const auto m = run_subcommand(config, c, dir);
    const fs::path path = dir / ("manifest_" + std::string(subcommand_name(c)) + ".json");
    REQUIRE(fs::exists(path));
    CHECK(verify_manifest(path));
    const auto back = read_manifest(path);
    CHECK(back.files == m.files);
    CHECK(back.config_digest == m.config_digest);
    CHECK(back.subcommand == subcommand_name(c));
  }
  for (const char* name : {"events_a.csv", "events_b.csv", "structure.csv", "incommensurability.csv",
                           "almost_periods.csv", "randomness.csv", "spectrum.csv", "correlation.csv",
                           "residual.csv", "chsh.csv", "chsh_summary.csv", "report.txt"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }
  const auto report = slurp(dir / "report.txt");
  CHECK(report.find("MISMATCH") == std::string::npos);
  CHECK(report.find("[chsh] digests verified") != std::string::npos);
  CHECK(csv(dir / "spectrum.csv").size() == 2 * 9);

  // Tampering with a table is caught by its manifest and by the report.
  std::ofstream(dir / "residual.csv", std::ios::app) << "1,2\n";
  CHECK(!verify_manifest(dir / "manifest_residual.json"));
  run_subcommand(config, Subcommand::report, dir);
  CHECK(slurp(dir / "report.txt").find("[residual] digests MISMATCH") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical tables") {
  auto config = small_torus();
  config.chain_a.kind = ChainSpec::Kind::random;
  config.random_angle_pairs = 4;
  const auto first = scratch("repro1");
  const auto second = scratch("repro2");
  for (auto c : {Subcommand::generate, Subcommand::analyze, Subcommand::correlate,
                 Subcommand::residual, Subcommand::chsh}) {
    const auto a = run_subcommand(config, c, first);
    const auto b = run_subcommand(config, c, second);
    CHECK(a.files == b.files);
    for (const auto& f : a.files) CHECK(slurp(first / f.path) == slurp(second / f.path));
  }
}

TEST_CASE("generated event logs replay to the closed-form phase") {
  const auto config = small_torus();
  const auto dir = scratch("replay");
  run_subcommand(config, Subcommand::generate, dir);
  const auto ex = resolve(config);
  const auto pair = ex.pair();
  for (const auto& [name, seq] : {std::pair{"events_a.csv", &pair.sequence_a()},
                                  std::pair{"events_b.csv", &pair.sequence_b()}}) {
    std::ifstream in(dir / name);
    const auto events = read_event_log(in);
    CHECK(events.size() == seq->event_count(config.horizon));
    for (double tau : {0.5, 13.7, 200.0, 399.99, 400.0}) {
      std::vector<PhaseEvent> prefix;
      for (const auto& e : events) {
        if (e.time <= tau) prefix.push_back(e);
      }
      CHECK(oracle::arc(replay_phase(prefix), phase_at(*seq, tau)) <= 1e-9);
    }
  }
}

TEST_CASE("resource guard reports the projected event count") {
  auto config = small_torus();
  config.periods = {1e-4, 1e-4};
  config.horizon = 2e4;
  config.search_bound.reset();
  try {
    run_subcommand(config, Subcommand::generate, scratch("guard"));
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.event_count() == 400'000'000);
    CHECK(e.limit() == 100'000'000);
  }
}

TEST_CASE("an output path below a regular file is an I/O error") {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  CHECK_THROWS_AS(run_subcommand(small_torus(), Subcommand::chsh, dir / "file" / "out"), IoError);
}

TEST_CASE("report with nothing to report") {
  const auto dir = scratch("empty");
  run_subcommand(small_torus(), Subcommand::report, dir);
  CHECK(slurp(dir / "report.txt").find("no prior outputs") != std::string::npos);
}

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
