#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "botl/experiments.hpp"

namespace botl {
namespace {

TEST(Rmse, Examples) {
  const Point2 truth(100.0, -50.0);
  const std::vector<Point2> same{truth, truth, truth};
  EXPECT_EQ(rmse(same, truth), 0.0);
  const std::vector<Point2> one{truth + Point2(3, 4)};
  EXPECT_DOUBLE_EQ(rmse(one, truth), 5.0);
  const std::vector<Point2> pair{truth + Point2(1, 0), truth + Point2(-1, 0)};
  EXPECT_DOUBLE_EQ(rmse(pair, truth), 1.0);
  EXPECT_THROW(rmse(std::vector<Point2>{}, truth), InvalidInput);
}

PresetOptions small(std::size_t trials) {
  PresetOptions opt;
  opt.trials = trials;
  opt.threads = 1;
  return opt;
}

TEST(MonteCarlo, NoiselessSingleTrial) {
  auto opt = small(1);
  opt.sigma_bearing = 0.0;
  opt.sweep = std::vector<double>{15.0};
  const auto table = preset_y_sweep(opt);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_LT(table.at(0, "rmse_nls_m"), 1e-5);
  EXPECT_EQ(table.at(0, "failures_nls"), 0.0);
}

TEST(MonteCarlo, SpecValidation) {
  auto spec = y_sweep_spec(small(1));
  spec.trials = 0;
  EXPECT_THROW(run_monte_carlo(spec), InvalidConfiguration);
  spec = y_sweep_spec(small(1));
  spec.points.clear();
  EXPECT_THROW(run_monte_carlo(spec), InvalidConfiguration);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  auto opt = small(12);
  opt.sweep = std::vector<double>{0.5, 4.0};
  std::ostringstream a, b, c;
  preset_estimator_comparison(opt).write_csv(a);
  preset_estimator_comparison(opt).write_csv(b);
  opt.threads = 4;
  preset_estimator_comparison(opt).write_csv(c);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
}

TEST(MonteCarlo, SeedChangesOutput) {
  auto opt = small(5);
  opt.sweep = std::vector<double>{20.0};
  const auto a = preset_y_sweep(opt);
  opt.seed += 1;
  const auto b = preset_y_sweep(opt);
  EXPECT_NE(a.at(0, "rmse_nls_m"), b.at(0, "rmse_nls_m"));
}

// Aggregate recomputed independently from the stored per-trial records.
TEST(MonteCarlo, AggregateMatchesRecords) {
  auto opt = small(20);
  opt.sweep = std::vector<double>{0.0, 90.0};
  const auto table = preset_orientation_sweep(Method::kClusterByBearing, opt);
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    double sq = 0.0, cerr = 0.0;
    std::size_t ok = 0, terms = 0;
    for (const auto& r : table.records) {
      if (r.point != row || r.failed) continue;
      ++ok;
      cerr += r.clustering_error;
      for (double e : r.squared_errors) {
        sq += e;
        ++terms;
      }
    }
    ASSERT_GT(ok, 0u);
    EXPECT_EQ(table.at(row, "rmse_bearing_m"), std::sqrt(sq / static_cast<double>(terms)));
    EXPECT_NEAR(table.at(row, "cluster_error_bearing"), cerr / static_cast<double>(ok), 1e-15);
    EXPECT_EQ(table.at(row, "failures_bearing"), static_cast<double>(20 - ok));
  }
}

TEST(MonteCarlo, RowInvariants) {
  auto opt = small(10);
  const auto table = preset_noise_sweep(opt);
  ASSERT_EQ(table.rows.size(), 7u);
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    for (const char* m : {"bearing", "polarization"}) {
      const double r = table.at(row, std::string("rmse_") + m + "_m");
      const double c = table.at(row, std::string("cluster_error_") + m);
      EXPECT_TRUE(std::isfinite(r));
      EXPECT_GE(r, 0.0);
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
    }
    EXPECT_EQ(table.at(row, "trials"), 10.0);
  }
}

TEST(Presets, Shapes) {
  auto opt = small(1);
  EXPECT_EQ(y_sweep_spec(opt).points.size(), 8u);
  EXPECT_EQ(x_sweep_spec(opt).points.size(), 11u);
  EXPECT_EQ(estimator_comparison_spec(opt).points.size(), 5u);
  EXPECT_EQ(orientation_sweep_spec(Method::kClusterByPolarization, opt).points.size(), 18u);
  EXPECT_EQ(noise_sweep_spec(opt).points.size(), 7u);
  EXPECT_THROW(orientation_sweep_spec(Method::kNls, opt), InvalidConfiguration);
}

TEST(Presets, YSweepIsLogarithmic) {
  const auto spec = y_sweep_spec(small(1));
  EXPECT_DOUBLE_EQ(spec.points.front().value, 1.0);
  EXPECT_DOUBLE_EQ(spec.points.back().value, 100.0);
  for (std::size_t i = 1; i < spec.points.size(); ++i) {
    EXPECT_NEAR(spec.points[i].value / spec.points[i - 1].value, std::pow(100.0, 1.0 / 7.0),
                1e-12);
    EXPECT_EQ(spec.points[i].targets[0].position.x(), 15000.0);
  }
}

TEST(Presets, OrientationGeometry) {
  const auto spec = orientation_sweep_spec(Method::kClusterByBearing, small(1));
  for (const auto& p : spec.points) {
    const Point2 mid = 0.5 * (p.targets[0].position + p.targets[1].position);
    EXPECT_NEAR((mid - Point2(17500, 15000)).norm(), 0.0, 1e-9);
    EXPECT_NEAR((p.targets[0].position - p.targets[1].position).norm(), 6000.0, 1e-9);
  }
  // 90 degrees: line through targets perpendicular to the track.
  const auto& p90 = spec.points[9];
  EXPECT_EQ(p90.value, 90.0);
  EXPECT_NEAR(p90.targets[0].position.x(), p90.targets[1].position.x(), 1e-9);
}

TEST(Presets, NoiseSweepMetadata) {
  const auto table = preset_noise_sweep([] {
    auto o = small(1);
    o.sweep = std::vector<double>{0.1};
    return o;
  }());
  std::ostringstream out;
  table.write_csv(out);
  EXPECT_NE(out.str().find("# meta: targets_m=14500 15000; 20500 15000"), std::string::npos);
}

TEST(Presets, CrlbColumnsBelowRmseAtModerateNoise) {
  auto opt = small(200);
  opt.sweep = std::vector<double>{1.0};
  const auto t = preset_estimator_comparison(opt);
  EXPECT_GE(t.at(0, "rmse_nls_m") + 2 * t.at(0, "rmse_nls_se_m"), t.at(0, "crlb_position_m"));
  EXPECT_GT(t.at(0, "crlb_angular"), 0.0);
}

}  // namespace
}  // namespace botl
