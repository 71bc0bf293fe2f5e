#include "singprop/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "singprop/errors.hpp"

namespace singprop {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::left_domain: return "left_domain";
    case StopReason::triple_point: return "triple_point";
    case StopReason::gradient_coalescence: return "gradient_coalescence";
    case StopReason::max_length: return "max_length";
  }
  return "unknown";
}

namespace {

struct PairCurve {
  const SemiconcaveFn& fn;
  int i, j;

  double h(Vec2 x) const {
    return fn.branches()[i].value(x) - fn.branches()[j].value(x);
  }
  Vec2 grad_h(Vec2 x) const {
    return fn.branches()[i].gradient(x) - fn.branches()[j].gradient(x);
  }

  // Newton along the current normal direction; 25 iterations to reach
  // |h| <= kCorrectorTol.
  std::optional<Vec2> correct(Vec2 y) const {
    for (int it = 0; it < 25; ++it) {
      double v = h(y);
      if (std::fabs(v) <= kCorrectorTol) return y;
      Vec2 g = grad_h(y);
      double g2 = dot(g, g);
      if (!(g2 > 1e-28)) return std::nullopt;  // flat residual, no progress
      y = y - (v / g2) * g;
      if (!std::isfinite(y.x) || !std::isfinite(y.y)) return std::nullopt;
    }
    return std::nullopt;
  }

  // Unit tangent with sign chosen against `prev`.
  Vec2 tangent(Vec2 x, Vec2 prev) const {
    Vec2 t = normalized(perp(grad_h(x)));
    return dot(t, prev) < 0.0 ? -t : t;
  }

  // Signed margin of the pair against the other branches:
  // min over k not in {i,j} of f_k(x) - (f_i(x)+f_j(x))/2.
  double other_margin(Vec2 x) const {
    const auto& br = fn.branches();
    double pairval = 0.5 * (br[i].value(x) + br[j].value(x));
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < br.size(); ++k)
      if (static_cast<int>(k) != i && static_cast<int>(k) != j)
        m = std::min(m, br[k].value(x) - pairval);
    return m;
  }
};

std::string point_str(Vec2 x) {
  std::ostringstream os;
  os << "(" << x.x << ", " << x.y << ")";
  return os.str();
}

}  // namespace

std::vector<SeedDirection> seed_directions(const SemiconcaveFn& fn, Vec2 x0,
                                           double tol_active, double t_probe) {
  if (!is_singular(fn, x0, tol_active))
    throw std::invalid_argument("seed_directions: point is not singular: " +
                                point_str(x0));
  std::vector<int> act = active_set(fn, x0, tol_active);

  std::vector<SeedDirection> dirs;
  for (std::size_t a = 0; a < act.size(); ++a)
    for (std::size_t b = a + 1; b < act.size(); ++b) {
      PairCurve curve{fn, act[a], act[b]};
      Vec2 gap = curve.grad_h(x0);
      if (norm(gap) < kCoalescenceTol) continue;  // no transversal crossing

      for (double sign : {1.0, -1.0}) {
        Vec2 q = sign * normalized(perp(gap));
        bool ok = true;
        // The pair must stay minimal along x0 + t q; probe the corrected
        // curve at t_probe and t_probe/2.
        for (double t : {t_probe, t_probe / 2}) {
          Vec2 probe = x0 + t * q;
          if (!fn.domain().contains(probe)) {
            ok = false;
            break;
          }
          auto corrected = curve.correct(probe);
          if (!corrected || !fn.domain().contains(*corrected) ||
              dist(*corrected, x0) < t / 2) {
            ok = false;
            break;
          }
          double m = eval_min(fn, *corrected);
          double tol = active_tolerance(tol_active, m);
          if (curve.other_margin(*corrected) < -tol) {
            ok = false;  // another branch undercuts the pair
            break;
          }
          if (norm(curve.grad_h(*corrected)) < kCoalescenceTol) {
            ok = false;
            break;
          }
        }
        if (ok) dirs.push_back({{act[a], act[b]}, q});
      }
    }
  return dirs;
}

namespace {

ArcSample make_sample(const SemiconcaveFn& fn, Vec2 x, double s,
                      std::pair<int, int> pair, Vec2 tangent,
                      double tol_active) {
  ArcSample smp;
  smp.x = x;
  smp.s = s;
  smp.pair = pair;
  smp.tangent = tangent;
  smp.dplus_diam = diam(superdifferential(reachable_gradients(fn, x, tol_active)));
  return smp;
}

}  // namespace

SingularArc trace_arc(const SemiconcaveFn& fn, Vec2 x0,
                      std::pair<int, int> pair, Vec2 q, double step,
                      double max_len, double tol_active) {
  if (!(step > 0.0) || !(max_len > 0.0))
    throw std::invalid_argument("trace_arc: step and max_len must be positive");
  if (std::fabs(norm(q) - 1.0) > 1e-9)
    throw std::invalid_argument("trace_arc: q must be a unit vector");
  if (!is_singular(fn, x0, tol_active))
    throw std::invalid_argument("trace_arc: seed is not singular: " +
                                point_str(x0));

  PairCurve curve{fn, pair.first, pair.second};
  if (norm(curve.grad_h(x0)) < kCoalescenceTol)
    throw std::invalid_argument("trace_arc: seed pair gradients coalesce");

  SingularArc arc;
  arc.seed = x0;
  arc.q = normalized(q);
  arc.pair = pair;
  arc.step = step;
  arc.max_len = max_len;
  arc.tol_active = tol_active;
  arc.stop_reason = StopReason::max_length;

  Vec2 cur = x0;
  Vec2 cur_tan = curve.tangent(x0, arc.q);
  double s = 0.0;
  arc.samples.push_back(make_sample(fn, cur, s, pair, cur_tan, tol_active));

  const Domain& dom = fn.domain();
  const double dom_tol = 1e-12 * std::max({1.0, dom.extent_x(), dom.extent_y()});

  // Corrected point at fraction beta of the current predictor step.
  auto curve_point = [&](double beta) -> Vec2 {
    auto p = curve.correct(cur + beta * cur_tan);
    if (!p)
      throw NumericError("trace_arc: corrector failed during bisection near " +
                         point_str(cur));
    return *p;
  };

  while (s < max_len) {
    double cur_step = step;
    std::optional<Vec2> next;
    while (true) {
      next = curve.correct(cur + cur_step * cur_tan);
      // Guard against the corrector collapsing back onto the previous point.
      if (next && dist(*next, cur) < cur_step * 0.1) next = std::nullopt;
      if (next) break;
      cur_step /= 2;
      if (cur_step < kMinStep)
        throw NumericError(
            "trace_arc: corrector failed above the minimum step near " +
            point_str(cur) + " (pair " + std::to_string(pair.first) + "," +
            std::to_string(pair.second) + ")");
    }

    Vec2 x_new = *next;
    if (norm(curve.grad_h(x_new)) < kCoalescenceTol) {
      arc.stop_reason = StopReason::gradient_coalescence;
      return arc;
    }

    // Snap points that drifted within dom_tol outside back onto the box; the
    // perturbation stays below the corrector tolerance.
    if (!dom.contains(x_new) && dom.contains(x_new, dom_tol)) {
      x_new.x = std::clamp(x_new.x, dom.xmin, dom.xmax);
      x_new.y = std::clamp(x_new.y, dom.ymin, dom.ymax);
    }

    double m = eval_min(fn, dom.contains(x_new) ? x_new : cur);
    double tol = active_tolerance(tol_active, m);

    bool stop = false;
    StopReason reason = StopReason::max_length;
    double beta_end = cur_step;  // predictor fraction of the accepted point

    if (!dom.contains(x_new, dom_tol)) {
      // Bisect the exit point onto the boundary.
      double lo = 0.0, hi = cur_step;
      while (hi - lo > 1e-14) {
        double mid = 0.5 * (lo + hi);
        if (dom.contains(curve_point(mid), dom_tol)) lo = mid;
        else hi = mid;
      }
      beta_end = lo;
      x_new = curve_point(lo);
      x_new.x = std::clamp(x_new.x, dom.xmin, dom.xmax);
      x_new.y = std::clamp(x_new.y, dom.ymin, dom.ymax);
      stop = true;
      reason = StopReason::left_domain;
    }

    if (curve.other_margin(x_new) < -tol) {
      // Overshot a triple point; bisect the margin sign change. The margin
      // at the current point is above -tol or the previous iteration would
      // have stopped.
      double lo = 0.0, hi = beta_end;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double margin = curve.other_margin(curve_point(mid));
        if (std::fabs(margin) <= 0.5 * tol) {
          lo = mid;
          break;
        }
        if (margin > 0.0) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-15) break;
      }
      x_new = curve_point(lo);
      stop = true;
      reason = StopReason::triple_point;
    } else if (!stop && curve.other_margin(x_new) <= tol) {
      stop = true;
      reason = StopReason::triple_point;
    }

    // A sample already sitting on the boundary or on a triple point bisects
    // to itself; end the arc there instead of appending a duplicate.
    if (stop && dist(x_new, cur) <= 10 * dom_tol) {
      arc.stop_reason = reason;
      return arc;
    }
    if (dist(x_new, cur) == 0.0)
      throw NumericError("trace_arc: zero-length step near " + point_str(cur));

    cur_tan = curve.tangent(x_new, cur_tan);
    s += dist(x_new, cur);
    cur = x_new;
    arc.samples.push_back(make_sample(fn, cur, s, pair, cur_tan, tol_active));

    if (stop) {
      arc.stop_reason = reason;
      return arc;
    }
  }
  arc.stop_reason = StopReason::max_length;
  return arc;
}

CyReport verify_cy(const SingularArc& arc, double delta_min) {
  if (arc.samples.empty())
    throw std::invalid_argument("verify_cy: empty arc");

  CyReport rep;
  rep.delta_min = delta_min;
  rep.initial_angle = angle_between(arc.samples[0].tangent, arc.q);

  double total = arc.length();
  rep.early_max_angle = 0.0;
  rep.min_diam = std::numeric_limits<double>::infinity();
  for (const ArcSample& smp : arc.samples) {
    if (smp.s <= 0.1 * total)
      rep.early_max_angle =
          std::max(rep.early_max_angle, angle_between(smp.tangent, arc.q));
    rep.min_diam = std::min(rep.min_diam, smp.dplus_diam);
  }

  rep.lipschitz_ratio = 0.0;
  for (std::size_t a = 0; a < arc.samples.size(); ++a)
    for (std::size_t b = a + 1; b < arc.samples.size(); ++b) {
      double ds = arc.samples[b].s - arc.samples[a].s;
      if (ds <= 0.0) continue;
      rep.lipschitz_ratio = std::max(
          rep.lipschitz_ratio, dist(arc.samples[b].x, arc.samples[a].x) / ds);
    }

  rep.initial_ok = rep.initial_angle <= 1e-6;
  rep.diam_ok = rep.min_diam >= delta_min;
  rep.lipschitz_ok = rep.lipschitz_ratio <= 1.0 + 1e-6;
  rep.passed = rep.initial_ok && rep.diam_ok && rep.lipschitz_ok;
  return rep;
}

}  // namespace singprop
