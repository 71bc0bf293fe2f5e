#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "singprop/errors.hpp"
#include "singprop/oracle.hpp"

using namespace singprop;

TEST_CASE("numeric gradient of a smooth quadratic is exact to rounding") {
  auto fn = fixtures::smooth_bowl();
  NumericGradient ng = numeric_gradient(fn, {0.3, -0.2}, 1e-5);
  REQUIRE(ng.differentiable);
  CHECK(ng.grad.x == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(ng.grad.y == doctest::Approx(-0.4).epsilon(1e-10));
}

TEST_CASE("numeric gradient detects symmetric kinks") {
  // At (0.3, 0) the two central differences agree (both are 0) but the
  // one-sided differences disagree by 2.
  auto fn = fixtures::two_lines();
  NumericGradient ng = numeric_gradient(fn, {0.3, 0.0}, 1e-5);
  CHECK_FALSE(ng.differentiable);

  // A huge consistency factor accepts anything.
  ng = numeric_gradient(fn, {0.3, 0.0}, 1e-5, 1e12);
  CHECK(ng.differentiable);
}

TEST_CASE("numeric gradient detects asymmetric kinks") {
  auto fn = fixtures::parabola();
  CHECK_FALSE(numeric_gradient(fn, {0.5, 0.25}, 1e-5).differentiable);
  CHECK(numeric_gradient(fn, {0.5, 0.6}, 1e-5).differentiable);
}

TEST_CASE("numeric gradient needs margin from the boundary") {
  auto fn = fixtures::smooth_bowl();
  CHECK_THROWS_AS(numeric_gradient(fn, {1.0 - 1e-6, 0.0}, 1e-5),
                  std::invalid_argument);
  CHECK_THROWS_AS(numeric_gradient(fn, {0.0, 0.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("grid scan flags exactly the cells along the ridge") {
  auto fn = fixtures::two_lines();
  ScanResult scan = grid_singularity_scan(fn, 0.25);
  CHECK(scan.nx == 8);
  CHECK(scan.ny == 8);
  CHECK(scan.cell_w == 0.25);
  CHECK(scan.cell_h == 0.25);
  // The ridge x2 = 0 is an edge between rows 3 and 4; both get flagged by
  // the corner activity change.
  CHECK(scan.flagged.size() == 16);
  CHECK(scan.flagged[0].x == -0.875);  // row-major: y outer, x inner
  CHECK(scan.flagged[0].y == -0.125);

  CHECK(scan_flags_point(fn.domain(), scan, {0.1, 0.01}));
  CHECK_FALSE(scan_flags_point(fn.domain(), scan, {0.1, 0.5}));

  Vec2 c = scan_cell_center(fn.domain(), scan, {0.99, -0.99});
  CHECK(c.x == 0.875);
  CHECK(c.y == -0.875);
}

TEST_CASE("grid scan is quiet on a smooth function") {
  auto fn = fixtures::smooth_bowl();
  ScanResult scan = grid_singularity_scan(fn, 0.25);
  CHECK(scan.flagged.empty());
}

TEST_CASE("grid scan validates the cell size") {
  auto fn = fixtures::smooth_bowl();
  CHECK_THROWS_AS(grid_singularity_scan(fn, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(grid_singularity_scan(fn, 0.0), std::invalid_argument);
}

TEST_CASE("sampled gradients recover both branch gradients at a kink") {
  auto fn = fixtures::two_lines();
  GradientSet gs = sampled_reachable_gradients(fn, {0.3, 0.0}, 0.01, 256);
  REQUIRE(gs.size() == 2);
  std::vector<Vec2> pts = gs.points;
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.y < b.y; });
  CHECK(std::fabs(pts[0].x) <= 1e-8);
  CHECK(pts[0].y == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(pts[1].y == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sampled gradients agree with the active-set computation") {
  auto fn = fixtures::parabola();
  Vec2 x{0.5, 0.25};
  // Radius small enough that the per-branch gradient spread (~4*radius here)
  // stays chained under the cluster threshold.
  GradientSet numeric = sampled_reachable_gradients(fn, x, 0.001, 256);
  GradientSet analytic = reachable_gradients(fn, x, 1e-9);
  REQUIRE(numeric.size() == analytic.size());

  auto by_xy = [](Vec2 a, Vec2 b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  };
  std::vector<Vec2> np = numeric.points, ap = analytic.points;
  std::sort(np.begin(), np.end(), by_xy);
  std::sort(ap.begin(), ap.end(), by_xy);
  for (std::size_t k = 0; k < np.size(); ++k) {
    // Cluster means average the gradient field over a half-disk of radius
    // 0.001, so they sit within O(radius) of the center values.
    CHECK(dist(np[k], ap[k]) < 0.01);
  }
}

TEST_CASE("sampled gradients give one cluster at a smooth point") {
  auto fn = fixtures::double_bowl();
  GradientSet gs = sampled_reachable_gradients(fn, {0.0, 0.0}, 1e-4, 128);
  REQUIRE(gs.size() == 1);
  CHECK(norm(gs.points[0]) < 5e-4);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  auto fn = fixtures::parabola();
  GradientSet a = sampled_reachable_gradients(fn, {0.5, 0.25}, 0.01, 128, 7u);
  GradientSet b = sampled_reachable_gradients(fn, {0.5, 0.25}, 0.01, 128, 7u);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.points[k].x == b.points[k].x);
    CHECK(a.points[k].y == b.points[k].y);
  }
}

TEST_CASE("sampling validates its arguments") {
  auto fn = fixtures::parabola();
  CHECK_THROWS_AS(sampled_reachable_gradients(fn, {0.5, 0.25}, 0.01, 32),
                  std::invalid_argument);
  CHECK_THROWS_AS(sampled_reachable_gradients(fn, {0.5, 0.25}, 0.0, 128),
                  std::invalid_argument);
}
