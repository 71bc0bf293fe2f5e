#pragma once

#include <vector>

#include "singprop/core.hpp"

namespace singprop {

// Finite set of pairwise-distinct points (separation > 1e-10).
struct GradientSet {
  std::vector<Vec2> points;
  std::size_t size() const { return points.size(); }
};

// Dedup threshold for gradient sets.
inline constexpr double kGradientDedupTol = 1e-10;

// Drops points within kGradientDedupTol of an earlier kept point.
GradientSet make_gradient_set(const std::vector<Vec2>& raw);

// Convex polygon given by its extreme points in counterclockwise order,
// starting at the lexicographically smallest vertex. One vertex encodes a
// point, two a segment.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  explicit ConvexPolygon(std::vector<Vec2> vertices)
      : vertices_(std::move(vertices)) {}
  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

 private:
  std::vector<Vec2> vertices_;
};

// Collinearity tolerance (perpendicular distance) for hull construction.
inline constexpr double kHullCollinearTol = 1e-10;

// Convex hull of a small point set. Three or fewer points are handled by
// direct case analysis, larger sets by a monotone chain; points within
// kHullCollinearTol of a supporting chord are not vertices.
ConvexPolygon convex_hull(const std::vector<Vec2>& pts);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Largest pairwise vertex distance; 0 for a single point.
double diam(const ConvexPolygon& poly);

// [min <v,p>, max <v,p>] over vertices. Requires |v| = 1 within 1e-12.
Interval slice(const ConvexPolygon& poly, Vec2 v);

// x-extent of the polygon's intersection with the horizontal line at height
// y. Throws NumericError when the line misses the polygon by more than tol.
Interval horizontal_slice(const ConvexPolygon& poly, double y,
                          double tol = 1e-9);

// Gradients of the active branches, deduplicated.
GradientSet reachable_gradients(const SemiconcaveFn& fn, Vec2 x,
                                double tol_active);

// Convex hull of a reachable-gradient set.
ConvexPolygon superdifferential(const GradientSet& gs);

// {2Kx - p : p in superdifferential}, i.e. the subdifferential at x of
// f(z) = K|z|^2 - u(z). Re-oriented counterclockwise.
ConvexPolygon subdiff_f(const SemiconcaveFn& fn, Vec2 x, double tol_active);

// True when the superdifferential boundary contains a point outside the
// gradient set; for finite sets this is |gs| >= 2.
bool propagation_criterion(const GradientSet& gs);

// At least two distinct active gradients.
bool is_singular(const SemiconcaveFn& fn, Vec2 x, double tol_active);

// Indices of set members strictly inside the hull (farther than
// kHullCollinearTol from its boundary). Non-generic inputs only; used for
// diagnostics.
std::vector<int> hull_interior_members(const GradientSet& gs);

}  // namespace singprop
