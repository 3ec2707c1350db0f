#include "geophase/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "geophase/angle.hpp"
#include "geophase/errors.hpp"

namespace geophase {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "genus",          "chain_a",          "chain_b",
      "betas",          "periods",          "horizon",
      "seed",           "output_dir",       "t",
      "angle_grid",     "angles_a",         "angles_b",
      "random_angle_pairs", "chsh",         "residual_angles",
      "residual_horizons",  "epsilon",      "search_bound",
      "sample_step",    "almost_period_window", "n_samples",
      "randomness_t",   "spectrum_points",  "spectrum_max",
      "max_denominator", "commensurability_tolerance", "random_chain_max",
      "event_limit"};
  return keys;
}

double real_value(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "expected a finite number");
  return x;
}

std::int64_t integer_value(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) throw ConfigError(key, "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t unsigned_value(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(key, "expected a non-negative integer");
  throw ConfigError(key, "expected an integer");
}

std::vector<double> real_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(real_value(v[i], fmt::format("{}[{}]", key, i)));
  }
  return out;
}

ChainSpec chain_value(const json& v, const std::string& key, std::size_t basis_size,
                      bool allow_exchanged) {
  ChainSpec spec;
  if (v.is_string()) {
    const auto word = v.get<std::string>();
    if (word == "random") {
      spec.kind = ChainSpec::Kind::random;
    } else if (word == "exchanged" && allow_exchanged) {
      spec.kind = ChainSpec::Kind::exchanged;
    } else {
      throw ConfigError(key, fmt::format("unknown chain keyword \"{}\"", word));
    }
    return spec;
  }
  if (!v.is_array()) throw ConfigError(key, "expected an integer array or a chain keyword");
  for (std::size_t i = 0; i < v.size(); ++i) {
    spec.coefficients.push_back(integer_value(v[i], fmt::format("{}[{}]", key, i)));
  }
  if (spec.coefficients.size() != basis_size) {
    throw ConfigError(key, fmt::format("dimension mismatch: expected {} coefficients (2 * genus), "
                                       "got {}",
                                       basis_size, spec.coefficients.size()));
  }
  return spec;
}

const json& required(const json& root, const std::string& key) {
  const auto it = root.find(key);
  if (it == root.end()) throw ConfigError(key, "missing required key");
  return *it;
}

template <class T, class Read>
void optional_field(const json& root, const std::string& key, T& field, Read read) {
  const auto it = root.find(key);
  if (it != root.end()) field = read(*it, key);
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

json chain_json(const ChainSpec& spec) {
  switch (spec.kind) {
    case ChainSpec::Kind::random:
      return "random";
    case ChainSpec::Kind::exchanged:
      return "exchanged";
    case ChainSpec::Kind::coefficients:
      break;
  }
  return spec.coefficients;
}

void validate(const ExperimentConfig& c) {
  require(c.genus >= 0, "genus", "must be a non-negative integer");
  const std::size_t basis = 2 * static_cast<std::size_t>(c.genus);
  require(c.chain_a.kind != ChainSpec::Kind::exchanged, "chain_a",
          "\"exchanged\" is only valid for chain_b");
  for (const auto& [key, spec] : {std::pair{"chain_a", &c.chain_a}, std::pair{"chain_b", &c.chain_b}}) {
    if (spec->kind == ChainSpec::Kind::coefficients) {
      require(spec->coefficients.size() == basis, key,
              fmt::format("dimension mismatch: expected {} coefficients (2 * genus), got {}",
                          basis, spec->coefficients.size()));
    }
  }
  require(c.betas.size() == basis, "betas",
          fmt::format("dimension mismatch: expected {} entries (2 * genus), got {}", basis,
                      c.betas.size()));
  require(c.periods.size() == basis, "periods",
          fmt::format("dimension mismatch: expected {} entries (2 * genus), got {}", basis,
                      c.periods.size()));
  for (std::size_t i = 0; i < c.periods.size(); ++i) {
    require(c.periods[i] > 0.0 && std::isfinite(c.periods[i]), fmt::format("periods[{}]", i),
            "period must be positive and finite");
  }
  require(c.horizon > 0.0, "horizon", "must be positive");
  const double t = c.t.value_or(c.horizon);
  if (c.t) require(*c.t > 0.0 && *c.t <= c.horizon, "t", "must lie in (0, horizon]");
  require(c.angle_grid >= 1, "angle_grid", "must be at least 1");
  require(c.angles_a.has_value() == c.angles_b.has_value(), c.angles_a ? "angles_b" : "angles_a",
          "angles_a and angles_b must be given together");
  if (c.residual_horizons) {
    const auto& h = *c.residual_horizons;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto key = fmt::format("residual_horizons[{}]", i);
      require(h[i] > 0.0 && h[i] <= t, key, "must lie in (0, t]");
      require(i == 0 || h[i] >= h[i - 1], key, "residual horizons must be ascending");
    }
  }
  require(c.epsilon > 0.0, "epsilon", "must be positive");
  if (c.search_bound) {
    require(*c.search_bound > 0.0 && *c.search_bound <= 0.5 * c.horizon, "search_bound",
            "must lie in (0, horizon/2]");
  }
  require(c.sample_step > 0.0, "sample_step", "must be positive");
  if (c.almost_period_window) {
    const double bound = c.search_bound.value_or(std::min(0.5 * c.horizon, 64.0));
    require(*c.almost_period_window > 0.0 && *c.almost_period_window + bound <= c.horizon,
            "almost_period_window", "must be positive and fit in horizon - search_bound");
  }
  require(c.n_samples >= 1000, "n_samples", "must be at least 1000");
  if (c.randomness_t) {
    require(*c.randomness_t > 0.0 && *c.randomness_t <= c.horizon, "randomness_t",
            "must lie in (0, horizon]");
  }
  require(c.spectrum_points >= 1, "spectrum_points", "must be at least 1");
  if (c.spectrum_max) require(*c.spectrum_max > 0.0, "spectrum_max", "must be positive");
  require(c.max_denominator >= 1, "max_denominator", "must be at least 1");
  require(c.commensurability_tolerance > 0.0, "commensurability_tolerance", "must be positive");
  require(c.random_chain_max >= 1, "random_chain_max", "must be at least 1");
  require(c.event_limit >= 1, "event_limit", "must be at least 1");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("malformed configuration: {}", e.what()));
  }
  if (!root.is_object()) throw ConfigError("", "configuration must be a JSON object");
  for (const auto& item : root.items()) {
    if (!known_keys().contains(item.key())) throw ConfigError(item.key(), "unknown key");
  }

  ExperimentConfig c;
  const std::int64_t genus = integer_value(required(root, "genus"), "genus");
  require(genus >= 0 && genus <= 1'000'000, "genus", "must be a non-negative integer");
  c.genus = static_cast<int>(genus);
  const std::size_t basis = 2 * static_cast<std::size_t>(c.genus);

  c.chain_a = chain_value(required(root, "chain_a"), "chain_a", basis, false);
  c.chain_b = chain_value(required(root, "chain_b"), "chain_b", basis, true);
  c.betas = real_list(required(root, "betas"), "betas");
  c.periods = real_list(required(root, "periods"), "periods");
  c.horizon = real_value(required(root, "horizon"), "horizon");

  const auto real = [](const json& v, const std::string& k) { return real_value(v, k); };
  const auto size = [](const json& v, const std::string& k) {
    return static_cast<std::size_t>(unsigned_value(v, k));
  };
  const auto list = [](const json& v, const std::string& k) { return real_list(v, k); };

  optional_field(root, "seed", c.seed, [](const json& v, const std::string& k) {
    return unsigned_value(v, k);
  });
  optional_field(root, "output_dir", c.output_dir, [](const json& v, const std::string& k) {
    if (!v.is_string()) throw ConfigError(k, "expected a string");
    return v.get<std::string>();
  });
  optional_field(root, "t", c.t, real);
  optional_field(root, "angle_grid", c.angle_grid, size);
  optional_field(root, "angles_a", c.angles_a, list);
  optional_field(root, "angles_b", c.angles_b, list);
  optional_field(root, "random_angle_pairs", c.random_angle_pairs, size);
  optional_field(root, "chsh", c.chsh, [](const json& v, const std::string& k) {
    const auto a = real_list(v, k);
    if (a.size() != 4) throw ConfigError(k, "expected [a1, a2, b1, b2]");
    return ChshSettings{a[0], a[1], a[2], a[3]};
  });
  optional_field(root, "residual_angles", c.residual_angles,
                 [](const json& v, const std::string& k) {
                   const auto a = real_list(v, k);
                   if (a.size() != 2) throw ConfigError(k, "expected [theta_a, theta_b]");
                   return AnglePair{a[0], a[1]};
                 });
  optional_field(root, "residual_horizons", c.residual_horizons, list);
  optional_field(root, "epsilon", c.epsilon, real);
  optional_field(root, "search_bound", c.search_bound, real);
  optional_field(root, "sample_step", c.sample_step, real);
  optional_field(root, "almost_period_window", c.almost_period_window, real);
  optional_field(root, "n_samples", c.n_samples, size);
  optional_field(root, "randomness_t", c.randomness_t, real);
  optional_field(root, "spectrum_points", c.spectrum_points, size);
  optional_field(root, "spectrum_max", c.spectrum_max, real);
  optional_field(root, "max_denominator", c.max_denominator,
                 [](const json& v, const std::string& k) { return integer_value(v, k); });
  optional_field(root, "commensurability_tolerance", c.commensurability_tolerance, real);
  optional_field(root, "random_chain_max", c.random_chain_max,
                 [](const json& v, const std::string& k) { return integer_value(v, k); });
  optional_field(root, "event_limit", c.event_limit, [](const json& v, const std::string& k) {
    return unsigned_value(v, k);
  });

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open configuration {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json root;
  root["genus"] = c.genus;
  root["chain_a"] = chain_json(c.chain_a);
  root["chain_b"] = chain_json(c.chain_b);
  root["betas"] = c.betas;
  root["periods"] = c.periods;
  root["horizon"] = c.horizon;
  root["seed"] = c.seed;
  if (c.output_dir) root["output_dir"] = *c.output_dir;
  if (c.t) root["t"] = *c.t;
  root["angle_grid"] = c.angle_grid;
  if (c.angles_a) root["angles_a"] = *c.angles_a;
  if (c.angles_b) root["angles_b"] = *c.angles_b;
  root["random_angle_pairs"] = c.random_angle_pairs;
  root["chsh"] = {c.chsh.a1, c.chsh.a2, c.chsh.b1, c.chsh.b2};
  root["residual_angles"] = {c.residual_angles.theta_a, c.residual_angles.theta_b};
  if (c.residual_horizons) root["residual_horizons"] = *c.residual_horizons;
  root["epsilon"] = c.epsilon;
  if (c.search_bound) root["search_bound"] = *c.search_bound;
  root["sample_step"] = c.sample_step;
  if (c.almost_period_window) root["almost_period_window"] = *c.almost_period_window;
  root["n_samples"] = c.n_samples;
  if (c.randomness_t) root["randomness_t"] = *c.randomness_t;
  root["spectrum_points"] = c.spectrum_points;
  if (c.spectrum_max) root["spectrum_max"] = *c.spectrum_max;
  root["max_denominator"] = c.max_denominator;
  root["commensurability_tolerance"] = c.commensurability_tolerance;
  root["random_chain_max"] = c.random_chain_max;
  root["event_limit"] = c.event_limit;
  return root.dump(2) + "\n";
}

PairConfig ResolvedExperiment::pair() const {
  return PairConfig::exchanged(surface, chain_a, chain_b, assignment, horizon);
}

ResolvedExperiment resolve(const ExperimentConfig& c) {
  validate(c);
  const SurfaceSpec surface(c.genus);
  std::mt19937_64 rng(c.seed);

  const auto draw_chain = [&] {
    std::uniform_int_distribution<std::int64_t> coefficient(-c.random_chain_max,
                                                            c.random_chain_max);
    std::vector<std::int64_t> m(surface.basis_size());
    for (auto& x : m) x = coefficient(rng);
    return WindingChain(surface, std::move(m));
  };

  WindingChain chain_a = c.chain_a.kind == ChainSpec::Kind::random
                             ? draw_chain()
                             : WindingChain(surface, c.chain_a.coefficients);
  WindingChain chain_b = [&] {
    switch (c.chain_b.kind) {
      case ChainSpec::Kind::random:
        return draw_chain();
      case ChainSpec::Kind::exchanged:
        return exchange_chain(chain_a);
      case ChainSpec::Kind::coefficients:
        break;
    }
    return WindingChain(surface, c.chain_b.coefficients);
  }();

  CycleAssignment assignment(c.betas, c.periods);
  const double t = c.t.value_or(c.horizon);

  std::vector<AnglePair> settings;
  if (c.angles_a) {
    for (double a : *c.angles_a) {
      for (double b : *c.angles_b) settings.push_back({a, b});
    }
  } else {
    settings = uniform_angle_grid(c.angle_grid);
  }
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (std::size_t k = 0; k < c.random_angle_pairs; ++k) {
    const double a = angle(rng);
    const double b = angle(rng);
    settings.push_back({a, b});
  }

  std::vector<double> horizons;
  if (c.residual_horizons) {
    horizons = *c.residual_horizons;
  } else {
    // Ten points per decade over four decades, ending exactly at t.
    for (int k = 0; k <= 40; ++k) horizons.push_back(t * std::pow(10.0, (k - 40) / 10.0));
    horizons.back() = t;
  }

  const double search_bound = c.search_bound.value_or(std::min(0.5 * c.horizon, 64.0));
  const double window =
      c.almost_period_window.value_or(std::min(c.horizon - search_bound, 512.0));

  double shortest = std::numeric_limits<double>::infinity();
  for (double p : c.periods) shortest = std::min(shortest, p);
  const double spectrum_max =
      c.spectrum_max.value_or(std::isfinite(shortest) ? 2.0 * kTwoPi / shortest : 2.0 * kTwoPi);

  return ResolvedExperiment{surface,
                            std::move(chain_a),
                            std::move(chain_b),
                            std::move(assignment),
                            c.horizon,
                            t,
                            std::move(settings),
                            std::move(horizons),
                            search_bound,
                            window,
                            c.randomness_t.value_or(c.horizon),
                            spectrum_max};
}

}  // namespace geophase
