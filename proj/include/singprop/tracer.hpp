#pragma once

#include <string>
#include <utility>
#include <vector>

#include "singprop/subdiff.hpp"

namespace singprop {

enum class StopReason { left_domain, triple_point, gradient_coalescence, max_length };

const char* to_string(StopReason r);

struct ArcSample {
  Vec2 x;
  double s = 0.0;  // accumulated chord arclength, strictly increasing
  std::pair<int, int> pair{0, 0};
  Vec2 tangent{1.0, 0.0};  // unit, sign-continuous along the arc
  double dplus_diam = 0.0;  // diam of the superdifferential at x, > 0
};

struct SingularArc {
  Vec2 seed;
  Vec2 q;  // initial direction, unit
  std::pair<int, int> pair{0, 0};
  double step = 0.0;
  double max_len = 0.0;
  double tol_active = 1e-9;
  std::vector<ArcSample> samples;
  StopReason stop_reason = StopReason::max_length;

  double length() const { return samples.empty() ? 0.0 : samples.back().s; }
};

struct SeedDirection {
  std::pair<int, int> pair;
  Vec2 q;
};

// Two gradients closer than this are treated as coalescent.
inline constexpr double kCoalescenceTol = 1e-7;
// Corrector convergence threshold on |f_i - f_j|.
inline constexpr double kCorrectorTol = 1e-10;
// Predictor steps are halved on corrector failure down to this floor.
inline constexpr double kMinStep = 1e-8;

// Candidate arc directions at a singular point: for every active pair (i,j)
// with distinct gradients, the unit vectors orthogonal to grad f_i - grad f_j
// along which the pair stays minimal (probed at t_probe and t_probe/2).
// Throws std::invalid_argument when x0 is not singular. May be empty.
std::vector<SeedDirection> seed_directions(const SemiconcaveFn& fn, Vec2 x0,
                                           double tol_active,
                                           double t_probe = 1e-4);

// Predictor-corrector continuation of {f_i = f_j} from x0 in direction q.
// Samples are corrected to |f_i - f_j| <= kCorrectorTol and parametrized by
// accumulated chord length. Stops on domain exit (final sample bisected onto
// the boundary), on a third branch joining the active set (final sample
// bisected onto the triple point), on gradient coalescence (point not
// recorded), or at max_len. Throws NumericError when the corrector fails
// above the minimum step.
SingularArc trace_arc(const SemiconcaveFn& fn, Vec2 x0,
                      std::pair<int, int> pair, Vec2 q, double step,
                      double max_len, double tol_active = 1e-9);

struct CyReport {
  double initial_angle = 0.0;    // angle(samples[0].tangent, q)
  double early_max_angle = 0.0;  // max angle(tangent, q) over s <= 0.1 total
  double min_diam = 0.0;         // min superdifferential diameter on the arc
  double delta_min = 0.0;
  double lipschitz_ratio = 0.0;  // max |x(s)-x(s')| / |s-s'| over sample pairs
  bool initial_ok = false;       // initial_angle <= 1e-6
  bool diam_ok = false;          // min_diam >= delta_min
  bool lipschitz_ok = false;     // ratio <= 1 + 1e-6
  bool passed = false;
};

CyReport verify_cy(const SingularArc& arc, double delta_min);

}  // namespace singprop
