#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "singprop/errors.hpp"

using namespace singprop;

TEST_CASE("jordan split of |x| matches the hand computation") {
  std::vector<double> xs{-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<double> gs{1.0, 0.5, 0.0, 0.5, 1.0};
  DCDecomposition dc = jordan_dc(xs, gs);

  // slopes are (-1,-1,1,1): y1 picks up max(s0,0)=0 plus positive variation
  // 2 after the kink, y2 the constant 1 = max(-s0,0).
  std::vector<double> y1{0.0, 0.0, 0.0, 1.0, 2.0};
  std::vector<double> y2{0.0, 0.5, 1.0, 1.5, 2.0};
  REQUIRE(dc.y1.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(dc.y1[k] == y1[k]);
    CHECK(dc.y2[k] == y2[k]);
  }
  CHECK(dc.offset == 1.0);
  for (int k = 0; k < 5; ++k)
    CHECK(dc.y1[k] - dc.y2[k] + dc.offset == gs[k]);
}

TEST_CASE("jordan split of a linear function needs one side only") {
  DCDecomposition dc = jordan_dc({0.0, 1.0, 2.0}, {0.0, 2.0, 4.0});
  CHECK(dc.y1[2] == 4.0);
  CHECK(dc.y2[0] == 0.0);
  CHECK(dc.y2[1] == 0.0);
  CHECK(dc.y2[2] == 0.0);
  CHECK(dc.offset == 0.0);
}

TEST_CASE("jordan components are convex and reconstruct g") {
  // Deterministic wiggly data.
  std::vector<double> xs, gs;
  fixtures::Lcg rng(0xd00du);
  double x = 0.0;
  for (int k = 0; k < 60; ++k) {
    xs.push_back(x);
    gs.push_back(std::sin(3.0 * x) + rng.uniform(-0.2, 0.2));
    x += rng.uniform(0.01, 0.05);
  }
  DCDecomposition dc = jordan_dc(xs, gs);
  for (std::size_t k = 0; k < xs.size(); ++k)
    CHECK(std::fabs(dc.y1[k] - dc.y2[k] + dc.offset - gs[k]) <= 1e-12);
  for (std::size_t k = 2; k < xs.size(); ++k) {
    double s1a = (dc.y1[k - 1] - dc.y1[k - 2]) / (xs[k - 1] - xs[k - 2]);
    double s1b = (dc.y1[k] - dc.y1[k - 1]) / (xs[k] - xs[k - 1]);
    CHECK(s1b >= s1a - 1e-9);
    double s2a = (dc.y2[k - 1] - dc.y2[k - 2]) / (xs[k - 1] - xs[k - 2]);
    double s2b = (dc.y2[k] - dc.y2[k - 1]) / (xs[k] - xs[k - 1]);
    CHECK(s2b >= s2a - 1e-9);
  }
}

TEST_CASE("jordan split validates its input") {
  CHECK_THROWS_AS(jordan_dc({0.0, 1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(jordan_dc({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(jordan_dc({0.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("reparametrize writes the arc as a graph over its chord frame") {
  auto fn = fixtures::parabola();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  GraphParam gp = reparametrize(arc);

  REQUIRE(gp.xs.size() >= 3);
  CHECK(gp.xs[0] == 0.0);
  CHECK(gp.gs[0] == 0.0);
  for (std::size_t k = 1; k < gp.xs.size(); ++k) CHECK(gp.xs[k] > gp.xs[k - 1]);

  // Identity frame here, so the graph is x2 = x1^2 until the slope rule
  // cuts it off at slope sqrt(3), i.e. x1 = 0.866.
  for (std::size_t k = 0; k < gp.xs.size(); ++k)
    CHECK(std::fabs(gp.gs[k] - gp.xs[k] * gp.xs[k]) <= 1e-9);
  CHECK(std::fabs(gp.xs.back() - std::sqrt(3.0) / 2.0) <= 0.01);
  CHECK(gp.slope_bound <= std::sqrt(3.0) + 1e-9);
  CHECK(gp.slope_bound >= 1.5);
}

TEST_CASE("reparametrize needs at least three surviving samples") {
  SingularArc arc;
  arc.seed = {0.0, 0.0};
  arc.q = {1.0, 0.0};
  arc.samples.resize(2);
  arc.samples[0].x = {0.0, 0.0};
  arc.samples[1].x = {0.1, 0.0};
  CHECK_THROWS_AS(reparametrize(arc), NumericError);
}

TEST_CASE("support envelope is the max of its lines") {
  std::vector<std::array<double, 3>> lines{{0.0, 0.0, -1.0},
                                           {1.0, 0.0, 1.0}};
  CHECK(support_envelope(lines, 0.0) == 0.0);
  CHECK(support_envelope(lines, 1.0) == 0.0);
  CHECK(support_envelope(lines, 0.5) == -0.5);
  CHECK(support_envelope(lines, 2.0) == 1.0);
  CHECK_THROWS_AS(support_envelope({}, 0.0), std::invalid_argument);
}

TEST_CASE("support construction on the straight ridge") {
  auto fn = fixtures::two_lines();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.01, 10.0);
  GraphParam gp = reparametrize(arc);
  SemiconcaveFn local = transform(fn, gp.frame);
  Step3Result s3 = step3_construct(local, gp, 1e-9);

  // The vertical subdifferential slice is [-1, 1] everywhere: delta = 2,
  // L = 1.05, so the level mesh has 3 intervals and every point uses the
  // middle pair.
  CHECK(s3.delta == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s3.lipschitz_bound == doctest::Approx(1.05).epsilon(1e-12));
  CHECK(s3.classification.levels.size() == 4);
  for (int a : s3.classification.assignment) CHECK(a == 2);
  REQUIRE(s3.phis.size() == 1);
  CHECK(s3.phis[0].level_index == 2);
  for (double v : s3.phis[0].values) CHECK(std::fabs(v) <= 1e-12);
  CHECK(s3.selection_residual <= 1e-12);
}

TEST_CASE("support construction reproduces the parabola graph exactly") {
  auto fn = fixtures::parabola();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  GraphParam gp = reparametrize(arc);
  SemiconcaveFn local = transform(fn, gp.frame);
  Step3Result s3 = step3_construct(local, gp, 1e-9);

  CHECK(s3.delta >= 1.9);
  CHECK(s3.selection_residual <= 1e-12);
  // Each used level pair reproduces g on its own set, not only the residual
  // at the selected index.
  for (const auto& [idx, members] : s3.classification.sets) {
    const PhiFunction* phi = nullptr;
    for (const auto& f : s3.phis)
      if (f.level_index == idx) phi = &f;
    REQUIRE(phi != nullptr);
    for (int k : members)
      CHECK(std::fabs(phi->values[k] - gp.gs[k]) <= 1e-12);
  }
}

TEST_CASE("mixing_select validates and splits a selection") {
  std::vector<double> xs{0.0, 0.5, 1.0};
  std::vector<std::vector<double>> phis{{0.0, 0.5, 1.0}, {1.0, 0.5, 0.0}};
  std::vector<double> h{0.0, 0.5, 0.0};

  MixingResult mr = mixing_select(xs, phis, h);
  CHECK(mr.selected == std::vector<int>{0, 0, 1});
  CHECK(mr.dc.y1 == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(mr.dc.y2 == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(mr.dc.offset == 0.0);

  SUBCASE("pointwise mismatch") {
    CHECK_THROWS_AS(mixing_select(xs, phis, {0.0, 0.3, 0.0}), NumericError);
  }
  SUBCASE("jump above the family Lipschitz bound") {
    std::vector<std::vector<double>> flat{{0.0, 0.0, 0.0}, {5.0, 5.0, 5.0}};
    CHECK_THROWS_AS(mixing_select(xs, flat, {0.0, 5.0, 0.0}), NumericError);
  }
}

TEST_CASE("polyline turn") {
  CHECK(turn({{0, 0}, {1, 0}, {2, 0}}) == 0.0);
  CHECK(turn({{0, 0}, {1, 0}, {1, 1}}) ==
        doctest::Approx(1.5707963267948966).epsilon(1e-15));
  CHECK_THROWS_AS(turn({{0, 0}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(turn({{0, 0}, {0, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("turn of a graph equals the variation of slope angles") {
  std::vector<Vec2> poly{{0, 0}, {1, 1}, {2, 3}, {3, 3}};
  double expect = std::fabs(std::atan(2.0) - std::atan(1.0)) +
                  std::fabs(std::atan(0.0) - std::atan(2.0));
  CHECK(turn(poly) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("arc turn restores the endpoint tangents") {
  auto fn = fixtures::parabola();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  CHECK(std::fabs(arc_turn(arc) - std::atan(2.0)) <= 1e-4);

  auto lines = fixtures::two_lines();
  SingularArc flat = trace_arc(lines, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005,
                               10.0);
  CHECK(arc_turn(flat) <= 1e-12);
}

TEST_CASE("turn certificate compares against a half-step retrace") {
  auto fn = fixtures::parabola();
  SingularArc arc = trace_arc(fn, {0.0, 0.0}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  TurnCertificate cert = finite_turn_certificate(fn, arc, 1e-3);
  CHECK(cert.converged);
  CHECK(std::fabs(cert.turn_fine - cert.turn_coarse) <= 1e-3);
  CHECK(std::fabs(cert.turn_coarse - std::atan(2.0)) <= 1e-4);

  // On the cubic ridge the half-step retrace shifts the turn by ~4e-6, so a
  // tolerance far below that gap must report non-convergence. (The parabola
  // is unusable here: its endpoint-corrected turns agree to the last bit.)
  auto mixed = fixtures::mixed_curvature();
  SingularArc ridge =
      trace_arc(mixed, {-0.5, 0.025}, {0, 1}, {1.0, 0.0}, 0.005, 10.0);
  TurnCertificate tight = finite_turn_certificate(mixed, ridge, 1e-9);
  CHECK_FALSE(tight.converged);
  CHECK(std::fabs(tight.turn_fine - tight.turn_coarse) > 1e-9);
}
