#include "geophase/runner.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "geophase/analysis.hpp"
#include "geophase/correlation.hpp"
#include "geophase/errors.hpp"
#include "geophase/phase_sequence.hpp"

#ifndef GEOPHASE_VERSION
#define GEOPHASE_VERSION "0.0.0"
#endif

namespace geophase {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::array<std::pair<Subcommand, std::string_view>, 6> kSubcommands{{
    {Subcommand::generate, "generate"},
    {Subcommand::analyze, "analyze"},
    {Subcommand::correlate, "correlate"},
    {Subcommand::residual, "residual"},
    {Subcommand::chsh, "chsh"},
    {Subcommand::report, "report"},
}};

std::string num(double x) { return fmt::format("{:.17g}", x); }

struct Table {
  std::string header;
  std::vector<std::string> rows;
};

class OutputWriter {
 public:
  explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content, std::size_t rows) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    out << content;
    out.close();
    if (!out) throw IoError(fmt::format("failed writing {}", path.string()));
    files_.push_back(EmittedFile{name, rows, sha256_hex(content)});
  }

  void write(const std::string& name, const Table& table) {
    std::string content = table.header + "\n";
    for (const auto& row : table.rows) {
      content += row;
      content += '\n';
    }
    write(name, content, table.rows.size());
  }

  std::vector<EmittedFile> take() { return std::move(files_); }

 private:
  fs::path dir_;
  std::vector<EmittedFile> files_;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

// ---------------------------------------------------------------------------
// Subcommands

void run_generate(const ResolvedExperiment& ex, OutputWriter& out) {
  const auto pair = ex.pair();
  for (const auto& [label, seq] : {std::pair{"a", &pair.sequence_a()},
                                   std::pair{"b", &pair.sequence_b()}}) {
    const auto events = events_in(*seq, 0.0, seq->horizon());
    std::ostringstream log;
    write_event_log(log, events);
    out.write(fmt::format("events_{}.csv", label), log.str(), events.size());
  }
}

void run_analyze(const ExperimentConfig& config, const ResolvedExperiment& ex, OutputWriter& out) {
  const auto pair = ex.pair();
  Table structure{
      "sequence,genus,basis_size,active_cycles,distinct_periods,event_count,bohr_mean_magnitude,"
      "bohr_mean_angle",
      {}};
  Table almost{"sequence,shift,discrepancy,mismatch_fraction,source", {}};
  Table randomness{"sequence,t,n_samples,monobit_p,serial_correlation,permutation_entropy", {}};
  Table spectrum{"sequence,lambda,magnitude,angle", {}};

  for (const auto& [label, seq] : {std::pair{"a", &pair.sequence_a()},
                                   std::pair{"b", &pair.sequence_b()}}) {
    const auto mean = bohr_mean(*seq, ex.randomness_t);
    structure.rows.push_back(fmt::format(
        "{},{},{},{},{},{},{},{}", label, ex.surface.genus(), ex.surface.basis_size(),
        seq->active_cycles().size(), seq->distinct_active_periods(),
        seq->event_count(seq->horizon()), num(std::abs(mean)), num(std::arg(mean))));

    const auto report = find_almost_periods(*seq, config.epsilon, ex.search_bound,
                                            config.sample_step, ex.almost_period_window);
    for (const auto& c : report.candidates) {
      almost.rows.push_back(fmt::format(
          "{},{},{},{},{}", label, num(c.shift), num(c.discrepancy), num(c.mismatch_fraction),
          c.source == ShiftSource::period_multiple ? "period_multiple" : "uniform_grid"));
    }

    const auto battery = randomness_battery(*seq, ex.randomness_t, config.n_samples);
    randomness.rows.push_back(fmt::format("{},{},{},{},{},{}", label, num(battery.t),
                                          battery.sample_count, num(battery.monobit_p_value),
                                          num(battery.serial_correlation),
                                          num(battery.permutation_entropy)));

    const std::size_t points = config.spectrum_points;
    for (std::size_t k = 0; k < points; ++k) {
      const double lambda =
          points == 1 ? 0.0
                      : ex.spectrum_max * static_cast<double>(k) / static_cast<double>(points - 1);
      const auto coefficient = fourier_bohr_coefficient(*seq, lambda, ex.randomness_t);
      spectrum.rows.push_back(fmt::format("{},{},{},{}", label, num(lambda),
                                          num(std::abs(coefficient)), num(std::arg(coefficient))));
    }
  }

  Table commensurability{"shorter,longer,ratio,verdict,numerator,denominator", {}};
  const auto cert =
      certify_incommensurable(ex.assignment, config.max_denominator, config.commensurability_tolerance);
  for (const auto& p : cert.pairs) {
    commensurability.rows.push_back(fmt::format(
        "{},{},{},{},{},{}", p.shorter, p.longer, num(p.ratio),
        p.verdict == PairVerdict::commensurable ? "commensurable" : "incommensurable_at_depth",
        p.witness ? std::to_string(p.witness->numerator) : "",
        p.witness ? std::to_string(p.witness->denominator) : ""));
  }

  out.write("structure.csv", structure);
  out.write("incommensurability.csv", commensurability);
  out.write("almost_periods.csv", almost);
  out.write("randomness.csv", randomness);
  out.write("spectrum.csv", spectrum);
}

void run_correlate(const ResolvedExperiment& ex, OutputWriter& out) {
  const auto pair = ex.pair();
  Table table{"theta_a,theta_b,t,E,residual,segments", {}};
  for (const auto& e : correlations(pair, ex.settings, ex.t)) {
    table.rows.push_back(fmt::format("{},{},{},{},{},{}", num(e.theta_a), num(e.theta_b),
                                     num(e.horizon), num(e.value), num(e.residual),
                                     e.segment_count));
  }
  out.write("correlation.csv", table);
}

void run_residual(const ExperimentConfig& config, const ResolvedExperiment& ex, OutputWriter& out) {
  const auto pair = ex.pair();
  Table table{"t,residual", {}};
  for (const auto& p : residual_curve(pair, config.residual_angles.theta_a,
                                      config.residual_angles.theta_b, ex.residual_horizons)) {
    table.rows.push_back(fmt::format("{},{}", num(p.horizon), num(p.residual)));
  }
  out.write("residual.csv", table);
}

void run_chsh(const ExperimentConfig& config, const ResolvedExperiment& ex, OutputWriter& out) {
  const auto result = chsh(ex.pair(), config.chsh, ex.t);
  Table settings{"setting,theta_a,theta_b,E,residual,segments", {}};
  constexpr std::array<const char*, 4> names{"a1b1", "a1b2", "a2b1", "a2b2"};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& e = result.estimates[k];
    settings.rows.push_back(fmt::format("{},{},{},{},{},{}", names[k], num(e.theta_a),
                                        num(e.theta_b), num(e.value), num(e.residual),
                                        e.segment_count));
  }
  Table summary{"a1,a2,b1,b2,t,S,classical_bound_violated", {}};
  summary.rows.push_back(fmt::format("{},{},{},{},{},{},{}", num(config.chsh.a1),
                                     num(config.chsh.a2), num(config.chsh.b1), num(config.chsh.b2),
                                     num(ex.t), num(result.s), std::abs(result.s) > 2.0 ? 1 : 0));
  out.write("chsh.csv", settings);
  out.write("chsh_summary.csv", summary);
}

// ---------------------------------------------------------------------------
// report

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::string summarize(Subcommand command, const fs::path& dir) {
  std::string text;
  switch (command) {
    case Subcommand::generate:
      for (const char* name : {"events_a.csv", "events_b.csv"}) {
        text += fmt::format("  {}: {} events\n", name, read_csv(dir / name).size());
      }
      break;
    case Subcommand::analyze: {
      for (const auto& r : read_csv(dir / "structure.csv")) {
        text += fmt::format(
            "  sequence {}: {} active cycles, {} distinct periods (basis size {}), |Bohr mean| = {}\n",
            r.at(0), r.at(3), r.at(4), r.at(2), r.at(6));
      }
      for (const auto& r : read_csv(dir / "incommensurability.csv")) {
        text += fmt::format("  periods {} / {}: {}{}\n", r.at(0), r.at(1), r.at(3),
                            r.at(4).empty() ? "" : fmt::format(" ({}/{})", r.at(4), r.at(5)));
      }
      std::map<std::string, std::size_t> shifts;
      for (const auto& r : read_csv(dir / "almost_periods.csv")) shifts[r.at(0)]++;
      for (const auto& [seq, count] : shifts) {
        text += fmt::format("  sequence {}: {} almost-period candidates\n", seq, count);
      }
      for (const auto& r : read_csv(dir / "randomness.csv")) {
        text += fmt::format(
            "  sequence {}: monobit p = {}, serial correlation = {}, permutation entropy = {}\n",
            r.at(0), r.at(3), r.at(4), r.at(5));
      }
      break;
    }
    case Subcommand::correlate: {
      const auto rows = read_csv(dir / "correlation.csv");
      double worst = 0.0;
      for (const auto& r : rows) {
        const double gap = to_double(r.at(3)) - std::cos(to_double(r.at(0)) + to_double(r.at(1)));
        worst = std::max(worst, std::abs(gap));
      }
      text += fmt::format("  {} settings, max |E - cos(theta_a + theta_b)| = {}\n", rows.size(),
                          num(worst));
      break;
    }
    case Subcommand::residual: {
      const auto rows = read_csv(dir / "residual.csv");
      if (!rows.empty()) {
        text += fmt::format("  residual {} at t = {}, {} at t = {}\n", rows.front().at(1),
                            rows.front().at(0), rows.back().at(1), rows.back().at(0));
      }
      break;
    }
    case Subcommand::chsh: {
      const auto rows = read_csv(dir / "chsh_summary.csv");
      if (!rows.empty()) {
        const auto& r = rows.front();
        text += fmt::format("  S = {} at t = {} (2 sqrt 2 = {}), classical bound {}\n", r.at(5),
                            r.at(4), num(2.0 * std::sqrt(2.0)),
                            r.at(6) == "1" ? "violated" : "respected");
      }
      break;
    }
    case Subcommand::report:
      break;
  }
  return text;
}

void run_report(const fs::path& dir, OutputWriter& out) {
  std::string text = "geophase report\n";
  bool any = false;
  for (const auto& [command, name] : kSubcommands) {
    if (command == Subcommand::report) continue;
    const fs::path manifest = dir / fmt::format("manifest_{}.json", name);
    if (!fs::exists(manifest)) continue;
    any = true;
    const bool intact = verify_manifest(manifest);
    text += fmt::format("\n[{}] digests {}\n", name, intact ? "verified" : "MISMATCH");
    if (intact) text += summarize(command, dir);
  }
  if (!any) text += "\nno prior outputs found\n";
  out.write("report.txt", text, static_cast<std::size_t>(std::ranges::count(text, '\n')));
}

}  // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) {
  for (const auto& [command, text] : kSubcommands) {
    if (text == name) return command;
  }
  return std::nullopt;
}

std::string_view subcommand_name(Subcommand command) {
  for (const auto& [c, text] : kSubcommands) {
    if (c == command) return text;
  }
  return "unknown";
}

fs::path output_directory(const ExperimentConfig& config, const std::optional<fs::path>& cli_out) {
  if (cli_out) return *cli_out;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "geophase-out";
}

std::uint64_t projected_event_count(const ResolvedExperiment& experiment) {
  const auto pair = experiment.pair();
  return pair.sequence_a().event_count(experiment.horizon) +
         pair.sequence_b().event_count(experiment.horizon);
}

RunManifest run_subcommand(const ExperimentConfig& config, Subcommand command,
                           const fs::path& out_dir) {
  RunManifest manifest;
  manifest.subcommand = std::string(subcommand_name(command));
  manifest.config_digest = sha256_hex(serialize_config(config));
  manifest.version = GEOPHASE_VERSION;
  manifest.started_at = utc_timestamp();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError(fmt::format("cannot create output directory {}", out_dir.string()));
  }

  OutputWriter out(out_dir);
  if (command == Subcommand::report) {
    run_report(out_dir, out);
  } else {
    ResolvedExperiment ex = [&] {
      try {
        return resolve(config);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError("", e.what());
      }
    }();
    const std::uint64_t events = projected_event_count(ex);
    if (events > config.event_limit) throw ResourceError(events, config.event_limit);
    switch (command) {
      case Subcommand::generate:
        run_generate(ex, out);
        break;
      case Subcommand::analyze:
        run_analyze(config, ex, out);
        break;
      case Subcommand::correlate:
        run_correlate(ex, out);
        break;
      case Subcommand::residual:
        run_residual(config, ex, out);
        break;
      case Subcommand::chsh:
        run_chsh(config, ex, out);
        break;
      case Subcommand::report:
        break;
    }
  }
  manifest.files = out.take();

  const fs::path manifest_path = out_dir / fmt::format("manifest_{}.json", manifest.subcommand);
  std::ofstream file(manifest_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(fmt::format("cannot write {}", manifest_path.string()));
  file << manifest_json(manifest);
  if (!file) throw IoError(fmt::format("failed writing {}", manifest_path.string()));
  return manifest;
}

std::string manifest_json(const RunManifest& manifest) {
  json root;
  root["subcommand"] = manifest.subcommand;
  root["config_digest"] = manifest.config_digest;
  root["version"] = manifest.version;
  root["started_at"] = manifest.started_at;
  root["files"] = json::array();
  for (const auto& f : manifest.files) {
    root["files"].push_back({{"path", f.path}, {"rows", f.rows}, {"sha256", f.sha256}});
  }
  return root.dump(2) + "\n";
}

RunManifest read_manifest(const fs::path& path) {
  RunManifest manifest;
  try {
    const json root = json::parse(read_file(path));
    manifest.subcommand = root.at("subcommand").get<std::string>();
    manifest.config_digest = root.at("config_digest").get<std::string>();
    manifest.version = root.at("version").get<std::string>();
    manifest.started_at = root.at("started_at").get<std::string>();
    for (const auto& f : root.at("files")) {
      manifest.files.push_back(EmittedFile{f.at("path").get<std::string>(),
                                           f.at("rows").get<std::size_t>(),
                                           f.at("sha256").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw IoError(fmt::format("malformed manifest {}: {}", path.string(), e.what()));
  }
  return manifest;
}

bool verify_manifest(const fs::path& path) {
  const auto manifest = read_manifest(path);
  const fs::path dir = path.parent_path();
  for (const auto& f : manifest.files) {
    const fs::path file = dir / f.path;
    if (!fs::exists(file)) return false;
    if (sha256_hex(read_file(file)) != f.sha256) return false;
  }
  return true;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace geophase
