#include "singprop/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "singprop/errors.hpp"

namespace singprop {

namespace {

bool lex_less(Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }

// Perpendicular distance from p to the line through a and b (|a-b| > 0).
double dist_to_line(Vec2 p, Vec2 a, Vec2 b) {
  return std::fabs(cross(b - a, p - a)) / dist(a, b);
}

}  // namespace

GradientSet make_gradient_set(const std::vector<Vec2>& raw) {
  GradientSet gs;
  for (Vec2 p : raw) {
    bool dup = false;
    for (Vec2 q : gs.points)
      if (dist(p, q) <= kGradientDedupTol) {
        dup = true;
        break;
      }
    if (!dup) gs.points.push_back(p);
  }
  if (gs.points.empty())
    throw std::invalid_argument("gradient set must be nonempty");
  return gs;
}

ConvexPolygon convex_hull(const std::vector<Vec2>& pts) {
  if (pts.empty()) throw std::invalid_argument("convex_hull: empty input");

  std::vector<Vec2> p = pts;
  std::sort(p.begin(), p.end(), lex_less);
  // Dedup at the gradient-set tolerance so near-coincident inputs collapse.
  std::vector<Vec2> u;
  for (Vec2 v : p) {
    bool dup = false;
    for (Vec2 w : u)
      if (dist(v, w) <= kGradientDedupTol) {
        dup = true;
        break;
      }
    if (!dup) u.push_back(v);
  }

  if (u.size() == 1) return ConvexPolygon({u[0]});

  // Farthest pair spans the hull's longest chord; it also decides the
  // collinear (segment) case.
  std::size_t ia = 0, ib = 1;
  double best = -1.0;
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      double d = dist(u[a], u[b]);
      if (d > best) {
        best = d;
        ia = a;
        ib = b;
      }
    }
  bool collinear = true;
  for (Vec2 v : u)
    if (dist_to_line(v, u[ia], u[ib]) > kHullCollinearTol) {
      collinear = false;
      break;
    }
  if (collinear) {
    Vec2 a = u[ia], b = u[ib];
    if (!lex_less(a, b)) std::swap(a, b);
    return ConvexPolygon({a, b});
  }

  if (u.size() == 3) {
    // Direct case: orient counterclockwise, start at the smallest vertex.
    std::vector<Vec2> v = u;  // already lexicographically sorted
    if (cross(v[1] - v[0], v[2] - v[0]) < 0.0) std::swap(v[1], v[2]);
    return ConvexPolygon(std::move(v));
  }

  // Monotone chain. A vertex within kHullCollinearTol of the chord closing
  // over it is not extreme and gets popped.
  auto build = [&](std::vector<Vec2>& chain, Vec2 next) {
    while (chain.size() >= 2) {
      Vec2 a = chain[chain.size() - 2];
      Vec2 b = chain[chain.size() - 1];
      double c = cross(b - a, next - a);
      if (c > kHullCollinearTol * dist(a, next)) break;
      chain.pop_back();
    }
    chain.push_back(next);
  };

  std::vector<Vec2> lower, upper;
  for (Vec2 v : u) build(lower, v);
  for (auto it = u.rbegin(); it != u.rend(); ++it) build(upper, *it);

  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  return ConvexPolygon(std::move(lower));
}

double diam(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  double best = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      best = std::max(best, dist(v[a], v[b]));
  return best;
}

Interval slice(const ConvexPolygon& poly, Vec2 v) {
  if (std::fabs(norm(v) - 1.0) > 1e-12)
    throw std::invalid_argument("slice: direction must be a unit vector");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Vec2 p : poly.vertices()) {
    double t = dot(v, p);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {lo, hi};
}

Interval horizontal_slice(const ConvexPolygon& poly, double y, double tol) {
  const auto& v = poly.vertices();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto add = [&](double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  };

  if (v.size() == 1) {
    if (std::fabs(v[0].y - y) <= tol) add(v[0].x);
  } else {
    std::size_t edges = v.size() == 2 ? 1 : v.size();
    for (std::size_t k = 0; k < edges; ++k) {
      Vec2 a = v[k];
      Vec2 b = v[(k + 1) % v.size()];
      if (std::fabs(a.y - y) <= tol) add(a.x);
      if (std::fabs(b.y - y) <= tol) add(b.x);
      if ((a.y - y) * (b.y - y) < 0.0) {
        double t = (y - a.y) / (b.y - a.y);
        add(a.x + t * (b.x - a.x));
      }
    }
  }
  if (lo > hi)
    throw NumericError("horizontal_slice: line at height " + std::to_string(y) +
                       " misses the polygon");
  return {lo, hi};
}

GradientSet reachable_gradients(const SemiconcaveFn& fn, Vec2 x,
                                double tol_active) {
  std::vector<int> act = active_set(fn, x, tol_active);
  std::vector<Vec2> grads;
  grads.reserve(act.size());
  for (int b : act) grads.push_back(fn.branches()[b].gradient(x));
  return make_gradient_set(grads);
}

ConvexPolygon superdifferential(const GradientSet& gs) {
  return convex_hull(gs.points);
}

ConvexPolygon subdiff_f(const SemiconcaveFn& fn, Vec2 x, double tol_active) {
  ConvexPolygon dplus = superdifferential(reachable_gradients(fn, x, tol_active));
  std::vector<Vec2> mapped;
  mapped.reserve(dplus.size());
  for (Vec2 p : dplus.vertices()) mapped.push_back(2.0 * fn.K() * x - p);
  // The map has linear part -I, so extreme points stay extreme; rebuilding
  // restores counterclockwise order.
  return convex_hull(mapped);
}

bool propagation_criterion(const GradientSet& gs) {
  // For a finite set the hull boundary holds a point outside the set exactly
  // when there are at least two points (any open edge works).
  return gs.points.size() >= 2;
}

bool is_singular(const SemiconcaveFn& fn, Vec2 x, double tol_active) {
  return reachable_gradients(fn, x, tol_active).size() >= 2;
}

std::vector<int> hull_interior_members(const GradientSet& gs) {
  ConvexPolygon hull = convex_hull(gs.points);
  const auto& v = hull.vertices();
  std::vector<int> inside;
  if (v.size() < 3) return inside;  // boundary is the whole hull
  for (std::size_t k = 0; k < gs.points.size(); ++k) {
    Vec2 p = gs.points[k];
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < v.size(); ++e) {
      Vec2 a = v[e];
      Vec2 b = v[(e + 1) % v.size()];
      Vec2 ab = b - a;
      double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
      d = std::min(d, dist(p, a + t * ab));
    }
    if (d > kHullCollinearTol) inside.push_back(static_cast<int>(k));
  }
  return inside;
}

}  // namespace singprop
