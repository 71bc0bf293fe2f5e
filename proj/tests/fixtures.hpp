#pragma once

#include <cstdint>

#include "singprop/pipeline.hpp"

// Closed-form test functions. Expected values in the tests were computed by
// hand from these definitions; keep the coefficients in sync.
namespace fixtures {

using namespace singprop;

// min(x2, -x2) = -|x2|; singular set {x2 = 0}, gradient gap 2.
inline SemiconcaveFn two_lines() {
  return SemiconcaveFn({Branch({{0, 1, 1.0}}), Branch({{0, 1, -1.0}})},
                       Domain{-1, 1, -1, 1});
}

// -|x2 - x1^2|; singular set is the parabola x2 = x1^2.
inline SemiconcaveFn parabola() {
  return SemiconcaveFn({Branch({{0, 1, 1.0}, {2, 0, -1.0}}),
                        Branch({{0, 1, -1.0}, {2, 0, 1.0}})},
                       Domain{-1, 1, -1, 1});
}

// min(x1 + x2, x1 - x2, -x1); three singular rays meet at the origin.
inline SemiconcaveFn three_affine() {
  return SemiconcaveFn({Branch({{1, 0, 1.0}, {0, 1, 1.0}}),
                        Branch({{1, 0, 1.0}, {0, 1, -1.0}}),
                        Branch({{1, 0, -1.0}})},
                       Domain{-1, 1, -1, 1});
}

// three_affine plus a branch whose gradient (0.2, 0) falls strictly inside
// the hull of the other three.
inline SemiconcaveFn four_affine() {
  return SemiconcaveFn({Branch({{1, 0, 1.0}, {0, 1, 1.0}}),
                        Branch({{1, 0, 1.0}, {0, 1, -1.0}}),
                        Branch({{1, 0, -1.0}}), Branch({{1, 0, 0.2}})},
                       Domain{-1, 1, -1, 1});
}

// min(x2, x1^3 - 0.3 x1); curvature varies along the singular cubic.
inline SemiconcaveFn mixed_curvature() {
  return SemiconcaveFn(
      {Branch({{0, 1, 1.0}}), Branch({{3, 0, 1.0}, {1, 0, -0.3}})},
      Domain{-1, 1, -1, 1});
}

// min(e*(x2^2 - x1^4), 0) with e = 1e-5; branch gradients coalesce at the
// origin. The small scale keeps the gradient gap under the tracer's
// coalescence threshold over a window much wider than the corrector
// tolerance, so the stop is observable.
inline SemiconcaveFn coalescing() {
  return SemiconcaveFn({Branch({{0, 2, 1e-5}, {4, 0, -1e-5}}),
                        Branch({{0, 0, 0.0}})},
                       Domain{-1, 1, -1, 1});
}

// Single smooth branch x1^2 + x2^2; no singular points.
inline SemiconcaveFn smooth_bowl() {
  return SemiconcaveFn({Branch({{2, 0, 1.0}, {0, 2, 1.0}})},
                       Domain{-1, 1, -1, 1});
}

// min(r^2, 2 r^2); the branches touch only at the origin where their
// gradients agree.
inline SemiconcaveFn double_bowl() {
  return SemiconcaveFn({Branch({{2, 0, 1.0}, {0, 2, 1.0}}),
                        Branch({{2, 0, 2.0}, {0, 2, 2.0}})},
                       Domain{-1, 1, -1, 1});
}

// Deterministic 64-bit mix for reproducible pseudo-random test inputs.
struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state;
  }
  double uniform(double lo, double hi) {
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
};

}  // namespace fixtures
