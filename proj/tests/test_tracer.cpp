#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "singprop/errors.hpp"

using namespace singprop;

TEST_CASE("seed directions at a two-branch kink") {
  auto fn = fixtures::two_lines();
  auto dirs = seed_directions(fn, {0.0, 0.0}, 1e-9);
  REQUIRE(dirs.size() == 2);
  CHECK(dirs[0].pair == std::pair<int, int>{0, 1});
  CHECK(dirs[1].pair == std::pair<int, int>{0, 1});
  CHECK(std::fabs(dirs[0].q.x + 1.0) <= 1e-15);
  CHECK(std::fabs(dirs[0].q.y) <= 1e-15);
  CHECK(std::fabs(dirs[1].q.x - 1.0) <= 1e-15);
  CHECK(std::fabs(dirs[1].q.y) <= 1e-15);
}

TEST_CASE("seed directions at a triple point keep one ray per pair") {
  auto fn = fixtures::three_affine();
  auto dirs = seed_directions(fn, {0.0, 0.0}, 1e-9);
  REQUIRE(dirs.size() == 3);
  const double c = 1.0 / std::sqrt(5.0);

  CHECK(dirs[0].pair == std::pair<int, int>{0, 1});
  CHECK(std::fabs(dirs[0].q.x + 1.0) <= 1e-12);
  CHECK(std::fabs(dirs[0].q.y) <= 1e-12);

  CHECK(dirs[1].pair == std::pair<int, int>{0, 2});
  CHECK(std::fabs(dirs[1].q.x - c) <= 1e-12);
  CHECK(std::fabs(dirs[1].q.y + 2.0 * c) <= 1e-12);

  CHECK(dirs[2].pair == std::pair<int, int>{1, 2});
  CHECK(std::fabs(dirs[2].q.x - c) <= 1e-12);
  CHECK(std::fabs(dirs[2].q.y - 2.0 * c) <= 1e-12);
}

TEST_CASE("seed directions require a singular point") {
  auto fn = fixtures::two_lines();
  CHECK_THROWS_AS(seed_directions(fn, {0.0, 0.5}, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("tracing the straight ridge") {
  auto fn = fixtures::two_lines();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  CHECK(arc.stop_reason == StopReason::left_domain);
  CHECK(arc.length() == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(arc.samples.size() >= 3);
  CHECK(arc.samples.back().x.x == doctest::Approx(1.0).epsilon(1e-12));

  double prev = -1.0;
  for (const ArcSample& smp : arc.samples) {
    CHECK(std::fabs(smp.x.y) <= 1e-10);
    CHECK(smp.s > prev);
    prev = smp.s;
    CHECK(smp.tangent.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(smp.dplus_diam == 2.0);
    CHECK(smp.pair == std::pair<int, int>{0, 1});
  }
}

TEST_CASE("tracing follows the parabola to the corner") {
  auto fn = fixtures::parabola();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  CHECK(arc.stop_reason == StopReason::left_domain);
  CHECK(std::fabs(arc.samples.back().x.x - 1.0) <= 1e-8);
  CHECK(std::fabs(arc.samples.back().x.y - 1.0) <= 1e-8);
  // Chord length converges to the closed form from below at O(step^2).
  CHECK(std::fabs(arc.length() - 1.4789428575445975) <= 2e-5);
  for (const ArcSample& smp : arc.samples)
    CHECK(std::fabs(smp.x.y - smp.x.x * smp.x.x) <= 1e-10);
}

TEST_CASE("tracing stops at triple points") {
  auto fn = fixtures::three_affine();
  // Start on the pair-(0,1) ray and head for the origin where branch 2 joins.
  SingularArc arc =
      trace_arc(fn, {-0.5, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  CHECK(arc.stop_reason == StopReason::triple_point);
  CHECK(std::fabs(arc.samples.back().x.x) <= 1e-8);
  CHECK(std::fabs(arc.samples.back().x.y) <= 1e-8);
  CHECK(std::fabs(arc.length() - 0.5) <= 1e-8);
}

TEST_CASE("tracing stops when the pair gradients coalesce") {
  auto fn = fixtures::coalescing();
  // Follow x2 = x1^2 from (0.5, 0.25) toward the origin, where both branch
  // gradients vanish.
  Vec2 q = normalized({-1.0, -1.0});
  SingularArc arc = trace_arc(fn, {0.5, 0.25}, {0, 1}, q, 5e-5, 10.0);
  CHECK(arc.stop_reason == StopReason::gradient_coalescence);
  Vec2 last = arc.samples.back().x;
  CHECK(norm(last) < 0.1);    // got close to the coalescence point
  CHECK(norm(last) > 1e-3);   // but never reached it
  CHECK(arc.length() > 0.45);
}

TEST_CASE("tracing respects the length cap") {
  auto fn = fixtures::two_lines();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 0.1);
  CHECK(arc.stop_reason == StopReason::max_length);
  CHECK(arc.length() >= 0.1);
  CHECK(arc.length() <= 0.1 + 0.005 + 1e-12);
}

TEST_CASE("trace_arc validates its inputs") {
  auto fn = fixtures::two_lines();
  CHECK_THROWS_AS(trace_arc(fn, {0, 0}, {0, 1}, {1, 0}, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(trace_arc(fn, {0, 0}, {0, 1}, {2, 0}, 0.005, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(trace_arc(fn, {0, 0.5}, {0, 1}, {1, 0}, 0.005, 1.0),
                  std::invalid_argument);

  // Singular point, but the chosen pair has identical gradients.
  SemiconcaveFn dup({Branch({{0, 1, 1.0}}), Branch({{0, 1, 1.0}}),
                     Branch({{0, 1, -1.0}})},
                    Domain{-1, 1, -1, 1});
  CHECK_THROWS_AS(trace_arc(dup, {0, 0}, {0, 1}, {1, 0}, 0.005, 1.0),
                  std::invalid_argument);
}

TEST_CASE("propagation report on a traced arc") {
  auto fn = fixtures::parabola();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);

  CyReport rep = verify_cy(arc, 1e-6);
  CHECK(rep.initial_angle <= 1e-6);
  CHECK(rep.initial_ok);
  CHECK(rep.min_diam == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.diam_ok);
  CHECK(rep.lipschitz_ratio <= 1.0 + 1e-6);
  CHECK(rep.lipschitz_ok);
  CHECK(rep.passed);

  // An unattainable diameter floor fails the report but nothing else.
  CyReport strict = verify_cy(arc, 3.0);
  CHECK_FALSE(strict.diam_ok);
  CHECK_FALSE(strict.passed);
  CHECK(strict.initial_ok);
}

TEST_CASE("verify_cy rejects empty arcs") {
  SingularArc arc;
  CHECK_THROWS_AS(verify_cy(arc, 1e-6), std::invalid_argument);
}
