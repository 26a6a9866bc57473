#pragma once

// Scenario files (TOML). Boundary units are kilometers for the track and
// degrees for angles; targets are given in meters.
//
//   [track]
//   kind = "linear"            # or "circular"
//   start_km = [0.0, 0.0]      # linear
//   end_km = [30.0, 0.0]
//   center_km = [15.0, 0.0]    # circular
//   radius_km = 10.0
//   arc_start_deg = 0.0
//   arc_stop_deg = 180.0
//   samples = 100
//
//   [noise]                    # optional, defaults to noiseless
//   sigma_bearing_deg = 2.0
//   sigma_polarization_deg = 2.0   # defaults to sigma_bearing_deg
//
//   [[targets]]
//   x_m = 15000.0
//   y_m = 15000.0
//   gamma_deg = 25.0           # optional, default 0
//   eta_deg = -20.0            # optional, default 0

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <toml++/toml.hpp>

#include "botl/errors.hpp"
#include "botl/geometry.hpp"
#include "botl/measurement.hpp"
#include "botl/scenario.hpp"

namespace botl {

struct Scenario {
  ReceiverTrack track;
  TargetSet targets;
  double sigma_bearing = 0.0;       // radians
  double sigma_polarization = 0.0;  // radians
};

namespace detail {

inline std::string key_path(std::string_view table, std::string_view key) {
  return std::string(table) + "." + std::string(key);
}

inline double required_number(const toml::table& t, std::string_view table,
                              std::string_view key) {
  const auto* node = t.get(key);
  if (!node) throw InvalidConfiguration("missing key '" + key_path(table, key) + "'");
  const auto v = node->value<double>();
  if (!v) throw InvalidConfiguration("key '" + key_path(table, key) + "' must be a number");
  return *v;
}

inline std::optional<double> optional_number(const toml::table& t, std::string_view table,
                                             std::string_view key) {
  if (!t.contains(key)) return std::nullopt;
  return required_number(t, table, key);
}

inline Point2 required_pair(const toml::table& t, std::string_view table,
                            std::string_view key) {
  const auto* arr = t.get_as<toml::array>(key);
  if (!arr) {
    throw InvalidConfiguration("key '" + key_path(table, key) +
                               (t.contains(key) ? "' must be an array [x, y]" : "' is missing"));
  }
  if (arr->size() != 2) {
    throw InvalidConfiguration("key '" + key_path(table, key) + "' must have exactly 2 entries");
  }
  Point2 p;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto v = (*arr)[i].value<double>();
    if (!v) throw InvalidConfiguration("key '" + key_path(table, key) + "' must hold numbers");
    p[static_cast<Eigen::Index>(i)] = *v;
  }
  return p;
}

inline std::size_t required_count(const toml::table& t, std::string_view table,
                                  std::string_view key) {
  const auto* node = t.get(key);
  if (!node) throw InvalidConfiguration("missing key '" + key_path(table, key) + "'");
  const auto v = node->value<std::int64_t>();
  if (!v || *v < 0) {
    throw InvalidConfiguration("key '" + key_path(table, key) +
                               "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(*v);
}

inline ReceiverTrack parse_track(const toml::table& root) {
  const auto* track = root.get_as<toml::table>("track");
  if (!track) throw InvalidConfiguration("missing table '[track]'");
  const auto kind = (*track)["kind"].value<std::string>();
  if (!kind) throw InvalidConfiguration("missing key 'track.kind' (\"linear\" or \"circular\")");
  const std::size_t samples = required_count(*track, "track", "samples");
  if (*kind == "linear") {
    return generate_track(LinearPreset{1000.0 * required_pair(*track, "track", "start_km"),
                                       1000.0 * required_pair(*track, "track", "end_km"),
                                       samples});
  }
  if (*kind == "circular") {
    return generate_track(CircularPreset{
        1000.0 * required_pair(*track, "track", "center_km"),
        1000.0 * required_number(*track, "track", "radius_km"),
        deg_to_rad(required_number(*track, "track", "arc_start_deg")),
        deg_to_rad(required_number(*track, "track", "arc_stop_deg")), samples});
  }
  throw InvalidConfiguration("key 'track.kind' must be \"linear\" or \"circular\", got \"" +
                             *kind + "\"");
}

inline TargetSet parse_targets(const toml::table& root) {
  const auto* arr = root.get_as<toml::array>("targets");
  if (!arr || arr->empty()) throw InvalidConfiguration("missing '[[targets]]' entries");
  std::vector<Target> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const auto* t = (*arr)[i].as_table();
    const std::string name = "targets[" + std::to_string(i) + "]";
    if (!t) throw InvalidConfiguration("'" + name + "' must be a table");
    Target target;
    target.position = Point2(required_number(*t, name, "x_m"), required_number(*t, name, "y_m"));
    target.polarization.gamma = deg_to_rad(optional_number(*t, name, "gamma_deg").value_or(0.0));
    target.polarization.eta =
        wrap_angle(deg_to_rad(optional_number(*t, name, "eta_deg").value_or(0.0)));
    out.push_back(target);
  }
  try {
    return TargetSet(std::move(out));
  } catch (const InvalidInput& e) {
    throw InvalidConfiguration(std::string("targets: ") + e.what());
  }
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text, std::string_view source = "<string>") {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw InvalidConfiguration(std::string(source) + ": " + std::string(e.description()));
  }
  double sigma_b = 0.0;
  std::optional<double> sigma_p;
  if (root.contains("noise")) {
    const auto* noise = root.get_as<toml::table>("noise");
    if (!noise) throw InvalidConfiguration("'noise' must be a table");
    sigma_b = detail::optional_number(*noise, "noise", "sigma_bearing_deg").value_or(0.0);
    sigma_p = detail::optional_number(*noise, "noise", "sigma_polarization_deg");
    if (sigma_b < 0.0) throw InvalidConfiguration("key 'noise.sigma_bearing_deg' must be >= 0");
    if (sigma_p && *sigma_p < 0.0) {
      throw InvalidConfiguration("key 'noise.sigma_polarization_deg' must be >= 0");
    }
  }
  auto track = [&] {
    try {
      return detail::parse_track(root);
    } catch (const InvalidPreset& e) {
      throw InvalidConfiguration(std::string("track: ") + e.what());
    }
  }();
  return Scenario{std::move(track), detail::parse_targets(root), deg_to_rad(sigma_b),
                  deg_to_rad(sigma_p.value_or(sigma_b))};
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

}  // namespace botl
