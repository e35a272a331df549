#include <doctest.h>

#include "itamp/initialization.hpp"
#include "itamp/layout.hpp"
#include "support/scenarios.hpp"

using namespace itamp;

TEST_SUITE("scene") {
  TEST_CASE("variable counts for the line family") {
    // 131 per six-joint manipulator (spline 120 + weights 9 + grasp 2) on
    // top of the 174-variable object block (spline 120 + rest weights 54).
    for (int arms = 1; arms <= 5; ++arms) {
      const Scenario sc = testing::line_scenario(arms);
      CHECK(count_variables(sc) == 174 + 131 * arms);
    }
    CHECK(count_variables(testing::line_scenario(1)) == 305);
    CHECK(count_variables(testing::line_scenario(5)) == 829);
  }

  TEST_CASE("layout blocks are disjoint and cover the whole vector") {
    const Scenario sc = testing::check_scenario();
    const VariableLayout l = VariableLayout::build(sc);
    std::vector<int> hits(l.total(), 0);

    for (int i = 0; i < l.manipulator_count(); ++i) {
      for (int s = 0; s < l.node_count(); ++s) {
        for (int k = 0; k < l.manipulator_dof(i); ++k) {
          hits[l.joint_value(i, s, k)]++;
          hits[l.joint_tangent(i, s, k)]++;
        }
      }
    }
    for (int j = 0; j < l.object_count(); ++j) {
      for (int s = 0; s < l.node_count(); ++s) {
        for (int c = 0; c < 6; ++c) {
          hits[l.object_value(j, s, c)]++;
          hits[l.object_tangent(j, s, c)]++;
        }
      }
      for (int d = 0; d < l.rest_pose_count(j); ++d) {
        for (int s = 0; s < l.segment_count(); ++s) hits[l.rest_weight(j, d, s)]++;
      }
    }
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      for (int s = 0; s < l.segment_count(); ++s) hits[l.weight(p, s)]++;
      hits[l.grasp_delta(p)]++;
      hits[l.grasp_theta(p)]++;
      if (l.pairs()[p].graspable.is_object) {
        for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
          for (int s = 0; s < l.segment_count(); ++s) {
            hits[l.orientation_weight(p, k, s)]++;
          }
        }
      }
    }
    for (int v = 0; v < l.total(); ++v) CHECK(hits[v] == 1);
  }

  TEST_CASE("grasp pairs: interactive manipulators") {
    const Scenario sc = testing::drawer_scenario();
    const auto pairs = grasp_pairs(sc);
    // arm->box, arm->drawer handle, drawer->box
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].manipulator == 0);
    CHECK(pairs[0].graspable.is_object);
    CHECK(pairs[1].manipulator == 0);
    CHECK_FALSE(pairs[1].graspable.is_object);
    CHECK(pairs[1].graspable.index == 1);
    CHECK(pairs[2].manipulator == 1);
    CHECK(pairs[2].graspable.is_object);
  }

  TEST_CASE("count is additive over manipulators and objects") {
    Scenario sc = testing::pick_and_place_scenario();
    const int base = count_variables(sc);
    const int N = sc.node_count();
    sc.manipulators.push_back(testing::planar_arm("arm2", 1.0, 0.0));
    // adding a 3-dof arm: spline 3*N*2, weights (N-1) per object, grasp 2
    CHECK(count_variables(sc) == base + 3 * N * 2 + (N - 1) + 2);
    sc.objects.push_back(testing::upright_object("box2", 0.2, 0.2, -0.2, 0.2));
    // adding an object: spline 6*N*2 + rest 6*(N-1) + per-arm weights+grasp
    CHECK(count_variables(sc) ==
          base + (3 * N * 2 + (N - 1) + 2) + (6 * N * 2 + 6 * (N - 1)) +
              2 * ((N - 1) + 2));
  }

  TEST_CASE("scenario validation rejects bad inputs") {
    Scenario sc = testing::pick_and_place_scenario();
    SUBCASE("negative horizon") {
      sc.horizon = -1.0;
      CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    }
    SUBCASE("rest configuration outside the limits") {
      sc.manipulators[0].rest_configuration[0] = 100.0;
      CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    }
    SUBCASE("delta limits beyond the half-length") {
      sc.objects[0].delta_min = -0.5;
      CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    }
    SUBCASE("rate limits with the wrong signs") {
      sc.extensions.weight_rate_limits = true;
      sc.extensions.rate_lower = 0.1;
      CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    }
    SUBCASE("non-unit joint axis") {
      sc.manipulators[0].chain.joints[0].axis *= 2.0;
      CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    }
  }

  TEST_CASE("cuboid rest poses") {
    const auto poses = ObjectSpec::cuboid_rest_poses({0.06, 0.06, 0.2}, 0.0);
    REQUIRE(poses.size() == 6);
    double long_axis_count = 0;
    for (const RestPose& rp : poses) {
      CHECK(rp.axis.norm() == doctest::Approx(1.0));
      if (std::abs(rp.axis[2]) > 0.5) {
        CHECK(rp.elevation == doctest::Approx(0.1));
        ++long_axis_count;
      } else {
        CHECK(rp.elevation == doctest::Approx(0.03));
      }
    }
    CHECK(long_axis_count == 2);
  }
}
