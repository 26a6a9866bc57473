#include <cmath>

#include <gtest/gtest.h>

#include "botl/scenario.hpp"

namespace botl {
namespace {

TEST(GenerateTrack, ReferenceLinearTrack) {
  const auto track = generate_track(LinearPreset{{0, 0}, {30000, 0}, 100});
  ASSERT_EQ(track.size(), 100u);
  EXPECT_EQ(track[0], Point2(0, 0));
  EXPECT_EQ(track[99], Point2(30000, 0));
  const double spacing = 30000.0 / 99.0;
  for (std::size_t i = 1; i < track.size(); ++i) {
    EXPECT_NEAR((track[i] - track[i - 1]).norm(), spacing, 1e-9 * spacing);
    EXPECT_EQ(track[i].y(), 0.0);
  }
}

TEST(GenerateTrack, TwoSampleEndpoints) {
  const auto track = generate_track(LinearPreset{{0, 0}, {0, 10}, 2});
  ASSERT_EQ(track.size(), 2u);
  EXPECT_EQ(track[0], Point2(0, 0));
  EXPECT_EQ(track[1], Point2(0, 10));
}

TEST(GenerateTrack, HalfCircle) {
  const auto track = generate_track(CircularPreset{{0, 0}, 1.0, 0.0, kPi, 3});
  ASSERT_EQ(track.size(), 3u);
  EXPECT_NEAR((track[0] - Point2(1, 0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((track[1] - Point2(0, 1)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((track[2] - Point2(-1, 0)).norm(), 0.0, 1e-12);
}

TEST(GenerateTrack, Deterministic) {
  const TrajectoryPreset p = CircularPreset{{3, -2}, 7.5, 0.3, 2.9, 41};
  const auto a = generate_track(p);
  const auto b = generate_track(p);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x(), b[i].x());
    EXPECT_EQ(a[i].y(), b[i].y());
  }
}

TEST(GenerateTrack, DegeneratePresets) {
  EXPECT_THROW(generate_track(LinearPreset{{1, 1}, {1, 1}, 5}), InvalidPreset);
  EXPECT_THROW(generate_track(LinearPreset{{0, 0}, {1, 1}, 1}), InvalidPreset);
  EXPECT_THROW(generate_track(CircularPreset{{0, 0}, 0.0, 0.0, 1.0, 5}), InvalidPreset);
  EXPECT_THROW(generate_track(CircularPreset{{0, 0}, 1.0, 0.5, 0.5, 5}), InvalidPreset);
  EXPECT_THROW(generate_track(LinearPreset{{0, NAN}, {1, 1}, 3}), InvalidPreset);
}

TargetSet single(const Point2& p) { return TargetSet({Target{p, {}}}); }

TEST(Observability, ColinearTargetFailsAssumption2) {
  const ReceiverTrack track({{0, 0}, {1, 0}});
  const auto report = check_observability(track, single({2, 0}));
  EXPECT_TRUE(report.assumption1());
  EXPECT_FALSE(report.assumption2());
  EXPECT_NE(report.describe().find("assumption 2"), std::string::npos);
}

TEST(Observability, TriangleGeometryPasses) {
  const ReceiverTrack track({{0, 0}, {1, 0}});
  const auto report = check_observability(track, single({0.5, 1}));
  EXPECT_TRUE(report.assumption1());
  EXPECT_TRUE(report.assumption2());
  EXPECT_TRUE(report.describe().empty());
}

TEST(Observability, SingleLocationFailsAssumption1) {
  const ReceiverTrack track({{0, 0}, {0, 0}});
  const auto report = check_observability(track, single({4, 5}));
  EXPECT_FALSE(report.assumption1());
  EXPECT_FALSE(report.ok());
}

TEST(Observability, PerTargetReport) {
  const auto track = generate_track(LinearPreset{{0, 0}, {10, 0}, 11});
  const TargetSet targets({Target{{5, 5}, {}}, Target{{20, 0}, {}}});
  const auto report = check_observability(track, targets);
  ASSERT_EQ(report.target_not_colinear.size(), 2u);
  EXPECT_TRUE(report.target_not_colinear[0]);
  EXPECT_FALSE(report.target_not_colinear[1]);
}

TEST(Observability, RotationInvariant) {
  const auto track = generate_track(LinearPreset{{0, 0}, {10, 0}, 11});
  const auto on_line = single({20, 0});
  const auto off_line = single({20, 3});
  for (double angle : {0.1, 0.7, 1.3, 2.2, 3.0, -1.1}) {
    const RigidMotion motion{angle, {123.4, -56.7}};
    const auto rt = track.transformed(motion);
    EXPECT_EQ(check_observability(rt, on_line.transformed(motion)).assumption2(),
              check_observability(track, on_line).assumption2());
    EXPECT_EQ(check_observability(rt, off_line.transformed(motion)).assumption2(),
              check_observability(track, off_line).assumption2());
  }
}

TEST(TargetSet, Invariants) {
  EXPECT_THROW(TargetSet({}), InvalidInput);
  EXPECT_THROW(TargetSet({Target{{0, 0}, {2.0, 0}}}), InvalidInput);
  EXPECT_THROW(TargetSet({Target{{0, 0}, {0.1, -kPi}}}), InvalidInput);
  EXPECT_THROW(TargetSet({Target{{1, 1}, {}}, Target{{1, 1}, {}}}), InvalidInput);
  EXPECT_NO_THROW(TargetSet({Target{{0, 0}, {kPi / 2, kPi}}}));
}

TEST(ReceiverTrack, NeedsTwoPositions) {
  EXPECT_THROW(ReceiverTrack({{0, 0}}), InvalidInput);
}

}  // namespace
}  // namespace botl
