#include <gtest/gtest.h>

#include <string>

#include "botl/config.hpp"

namespace botl {
namespace {

constexpr const char* kLinear = R"(
[track]
kind = "linear"
start_km = [0.0, 0.0]
end_km = [30.0, 0.0]
samples = 100

[noise]
sigma_bearing_deg = 2.0

[[targets]]
x_m = 15000.0
y_m = 15000.0
gamma_deg = 30.0
eta_deg = 190.0
)";

std::string message_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const InvalidConfiguration& e) {
    return e.what();
  }
  return "";
}

TEST(Config, LinearScenario) {
  const auto s = parse_scenario(kLinear);
  ASSERT_EQ(s.track.size(), 100u);
  EXPECT_EQ(s.track[99], Point2(30000.0, 0.0));
  ASSERT_EQ(s.targets.size(), 1u);
  EXPECT_EQ(s.targets[0].position, Point2(15000.0, 15000.0));
  EXPECT_NEAR(s.targets[0].polarization.gamma, kPi / 6, 1e-15);
  EXPECT_NEAR(s.targets[0].polarization.eta, deg_to_rad(-170.0), 1e-12);
  EXPECT_NEAR(s.sigma_bearing, deg_to_rad(2.0), 1e-18);
  EXPECT_EQ(s.sigma_polarization, s.sigma_bearing);
}

TEST(Config, CircularScenario) {
  const auto s = parse_scenario(R"(
[track]
kind = "circular"
center_km = [1.0, 2.0]
radius_km = 3.0
arc_start_deg = 0.0
arc_stop_deg = 90.0
samples = 3
[[targets]]
x_m = 0.0
y_m = 0.0
)");
  EXPECT_NEAR((s.track[0] - Point2(4000, 2000)).norm(), 0.0, 1e-9);
  EXPECT_NEAR((s.track[2] - Point2(1000, 5000)).norm(), 0.0, 1e-9);
  EXPECT_EQ(s.sigma_bearing, 0.0);
}

TEST(Config, ErrorsNameTheKey) {
  std::string t = kLinear;
  EXPECT_NE(message_of(std::string(t).replace(t.find("samples"), 7, "sample")).find("track.samples"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(t).replace(t.find("y_m"), 3, "yy")).find("targets[0].y_m"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(t).replace(t.find("\"linear\""), 8, "\"spiral\"")).find("track.kind"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(t).replace(t.find("[30.0, 0.0]"), 11, "[30.0]")).find("track.end_km"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(t).replace(t.find("2.0"), 3, "-1.0")).find("noise.sigma_bearing_deg"),
            std::string::npos);
  EXPECT_NE(message_of("[track\n").size(), 0u);
}

TEST(Config, InvalidValuesRejected) {
  std::string t = kLinear;
  EXPECT_FALSE(message_of(std::string(t).replace(t.find("gamma_deg = 30.0"), 16, "gamma_deg = 95.0")).empty());
  EXPECT_FALSE(message_of(std::string(t).replace(t.find("samples = 100"), 13, "samples = 1")).empty());
  EXPECT_THROW(load_scenario("/nonexistent/scenario.toml"), InvalidInput);
}

TEST(Config, ShippedScenariosLoad) {
  for (const char* name : {"single_target", "two_targets", "perpendicular_pair", "circular_orbit"}) {
    const auto s = load_scenario(std::string(BOTL_SCENARIO_DIR) + "/" + name + ".toml");
    EXPECT_TRUE(check_observability(s.track, s.targets).ok()) << name;
  }
}

}  // namespace
}  // namespace botl
