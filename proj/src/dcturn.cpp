#include "singprop/dcturn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "singprop/errors.hpp"

namespace singprop {

GraphParam reparametrize(const SingularArc& arc) {
  if (arc.samples.size() < 3)
    throw NumericError("arc too short for graph reparametrization");

  Frame frame = make_frame(arc.seed, arc.q);
  std::vector<Vec2> pts;
  pts.reserve(arc.samples.size());
  for (const ArcSample& smp : arc.samples) pts.push_back(frame.apply(smp.x));

  // Keep the longest prefix on which the arc is a steep-free graph over the
  // first coordinate: every chord must advance in x by at least half its
  // length. This bounds |dg/dx| by sqrt(3).
  std::size_t keep = 1;
  while (keep < pts.size()) {
    Vec2 a = pts[keep - 1], b = pts[keep];
    double d = dist(a, b);
    if (!(b.x - a.x >= 0.5 * d) || !(d > 0.0)) break;
    ++keep;
  }
  if (keep < 3)
    throw NumericError("arc too short for graph reparametrization");

  GraphParam gp;
  gp.frame = frame;
  gp.xs.reserve(keep);
  gp.gs.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    gp.xs.push_back(pts[k].x);
    gp.gs.push_back(pts[k].y);
  }
  for (std::size_t k = 0; k + 1 < keep; ++k) {
    double slope = (gp.gs[k + 1] - gp.gs[k]) / (gp.xs[k + 1] - gp.xs[k]);
    gp.slope_bound = std::max(gp.slope_bound, std::fabs(slope));
  }
  return gp;
}

DCDecomposition jordan_dc(const std::vector<double>& xs,
                          const std::vector<double>& gs) {
  if (xs.size() != gs.size())
    throw std::invalid_argument("jordan_dc: size mismatch");
  if (xs.size() < 2)
    throw std::invalid_argument("jordan_dc: need at least 2 points");
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    if (!(xs[k + 1] > xs[k]))
      throw std::invalid_argument("jordan_dc: xs not strictly increasing");

  std::size_t m = xs.size();
  std::vector<double> s(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k)
    s[k] = (gs[k + 1] - gs[k]) / (xs[k + 1] - xs[k]);

  DCDecomposition dc;
  dc.xs = xs;
  dc.offset = gs[0];
  dc.y1.assign(m, 0.0);
  dc.y2.assign(m, 0.0);

  // Slopes of y1 and y2 are the Jordan variations of the slope sequence,
  // shifted so both start nonnegative; their difference is s[k] exactly.
  double pos = 0.0, neg = 0.0;
  double base1 = std::max(s[0], 0.0), base2 = std::max(-s[0], 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (k > 0) {
      double d = s[k] - s[k - 1];
      pos += std::max(d, 0.0);
      neg += std::max(-d, 0.0);
    }
    double dx = xs[k + 1] - xs[k];
    dc.y1[k + 1] = dc.y1[k] + (base1 + pos) * dx;
    dc.y2[k + 1] = dc.y2[k] + (base2 + neg) * dx;
  }
  return dc;
}

DCDecomposition jordan_dc(const GraphParam& gp) {
  return jordan_dc(gp.xs, gp.gs);
}

double support_envelope(const std::vector<std::array<double, 3>>& lines,
                        double t) {
  if (lines.empty())
    throw std::invalid_argument("support_envelope: no lines");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& ln : lines)
    best = std::max(best, ln[1] + ln[2] * (t - ln[0]));
  return best;
}

namespace {

double convex_conjugate_value(const SemiconcaveFn& fn, Vec2 z) {
  return fn.K() * dot(z, z) - eval_min(fn, z);
}

}  // namespace

Step3Result step3_construct(const SemiconcaveFn& fn_transformed,
                            const GraphParam& gp, double tol_active) {
  const std::size_t m = gp.xs.size();
  if (m < 2 || gp.gs.size() != m)
    throw std::invalid_argument("step3_construct: malformed graph");

  // Vertical extent of the convex subdifferential at every graph point.
  std::vector<ConvexPolygon> polys(m);
  std::vector<Interval> vext(m);
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    Vec2 z{gp.xs[k], gp.gs[k]};
    polys[k] = subdiff_f(fn_transformed, z, tol_active);
    vext[k] = slice(polys[k], Vec2{0.0, 1.0});
    delta = std::min(delta, vext[k].length());
  }
  if (!(delta > 1e-12))
    throw NumericError("vertical subdifferential slice collapses");

  // Uniform levels finer than half the smallest slice, so every slice
  // contains a consecutive level pair.
  const double eps = 1e-6;
  const double L = fn_transformed.L();
  const double lo = -L - eps, hi = L + eps;
  const int p = static_cast<int>(std::ceil((hi - lo) / (delta / 2.01)));
  const double mesh = (hi - lo) / p;

  Step3Result out;
  out.delta = delta;
  out.lipschitz_bound = L;
  out.classification.levels.resize(p + 1);
  for (int i = 0; i <= p; ++i)
    out.classification.levels[i] = lo + i * mesh;
  const std::vector<double>& lv = out.classification.levels;

  const double otol = 1e-12;
  out.classification.assignment.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    int found = -1;
    for (int i = 1; i <= p; ++i) {
      if (lv[i - 1] >= vext[k].lo - otol && lv[i] <= vext[k].hi + otol) {
        found = i;
        break;
      }
    }
    if (found < 0)
      throw NumericError("no admissible level pair at a grid point");
    out.classification.assignment[k] = found;
    out.classification.sets[found].push_back(static_cast<int>(k));
  }

  // One support line per member point and level: f on the graph minorized by
  // w + p (t - x) with (p, y) a subgradient at (x, g(x)), touching at x.
  auto lines_at_level = [&](const std::vector<int>& members, double y) {
    std::vector<std::array<double, 3>> lines;
    lines.reserve(members.size());
    for (int k : members) {
      Vec2 z{gp.xs[k], gp.gs[k]};
      Interval hs = horizontal_slice(polys[k], y);
      double w = convex_conjugate_value(fn_transformed, z) - y * gp.gs[k];
      lines.push_back({gp.xs[k], w, 0.5 * (hs.lo + hs.hi)});
    }
    return lines;
  };

  for (const auto& [i, members] : out.classification.sets) {
    auto upper = lines_at_level(members, lv[i]);      // level y_i
    auto lower = lines_at_level(members, lv[i - 1]);  // level y_{i-1}
    PhiFunction phi;
    phi.level_index = i;
    phi.values.resize(m);
    double dy = lv[i] - lv[i - 1];
    for (std::size_t k = 0; k < m; ++k) {
      double c1 = support_envelope(upper, gp.xs[k]);
      double c2 = support_envelope(lower, gp.xs[k]);
      phi.values[k] = (c2 - c1) / dy;
    }
    out.phis.push_back(std::move(phi));
  }

  for (std::size_t k = 0; k < m; ++k) {
    int i = out.classification.assignment[k];
    auto it = std::find_if(out.phis.begin(), out.phis.end(),
                           [i](const PhiFunction& f) { return f.level_index == i; });
    out.selection_residual = std::max(
        out.selection_residual, std::fabs(it->values[k] - gp.gs[k]));
  }
  return out;
}

MixingResult mixing_select(const std::vector<double>& xs,
                           const std::vector<std::vector<double>>& phis,
                           const std::vector<double>& h) {
  if (phis.empty())
    throw std::invalid_argument("mixing_select: no phi functions");
  if (xs.size() != h.size() || xs.size() < 2)
    throw std::invalid_argument("mixing_select: size mismatch");
  for (const auto& row : phis)
    if (row.size() != xs.size())
      throw std::invalid_argument("mixing_select: phi size mismatch");

  const double match_tol = 1e-8;
  MixingResult out;
  out.selected.resize(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    int sel = -1;
    for (std::size_t j = 0; j < phis.size(); ++j) {
      if (std::fabs(phis[j][k] - h[k]) <= match_tol) {
        sel = static_cast<int>(j);
        break;
      }
    }
    if (sel < 0)
      throw NumericError("h is not a selection of the phi family");
    out.selected[k] = sel;
  }

  // A continuous selection inherits the family Lipschitz constant; verify it
  // interval by interval on the grid.
  double lip = 0.0;
  for (const auto& row : phis)
    for (std::size_t k = 0; k + 1 < xs.size(); ++k)
      lip = std::max(lip,
                     std::fabs(row[k + 1] - row[k]) / (xs[k + 1] - xs[k]));
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    double bound = lip * (xs[k + 1] - xs[k]) * (1.0 + 1e-9) + 1e-12;
    if (std::fabs(h[k + 1] - h[k]) > bound)
      throw NumericError("selection jumps exceed the family Lipschitz bound");
  }

  out.dc = jordan_dc(xs, h);
  return out;
}

double turn(const std::vector<Vec2>& polyline) {
  if (polyline.size() < 3)
    throw std::invalid_argument("turn: need at least 3 points");
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k)
    if (!(dist(polyline[k], polyline[k + 1]) > 0.0))
      throw std::invalid_argument("turn: repeated consecutive points");

  double total = 0.0;
  for (std::size_t k = 1; k + 1 < polyline.size(); ++k)
    total += angle_between(polyline[k] - polyline[k - 1],
                           polyline[k + 1] - polyline[k]);
  return total;
}

double arc_turn(const SingularArc& arc) {
  const auto& smp = arc.samples;
  if (smp.size() < 2)
    throw std::invalid_argument("arc_turn: need at least 2 samples");

  std::vector<Vec2> pts;
  pts.reserve(smp.size());
  for (const ArcSample& a : smp) pts.push_back(a.x);

  double total = pts.size() >= 3 ? turn(pts) : 0.0;
  // End corrections: rotation from the stored tangents to the end chords.
  // Without them the inscribed polyline underestimates by O(step) at the
  // endpoints, which dominates the interior O(step^2) error.
  total += angle_between(smp.front().tangent, pts[1] - pts[0]);
  total += angle_between(pts[pts.size() - 1] - pts[pts.size() - 2],
                         smp.back().tangent);
  return total;
}

TurnCertificate finite_turn_certificate(const SemiconcaveFn& fn,
                                        const SingularArc& arc, double tol) {
  TurnCertificate cert;
  cert.tol = tol;
  cert.turn_coarse = arc_turn(arc);
  SingularArc fine = trace_arc(fn, arc.seed, arc.pair, arc.q, 0.5 * arc.step,
                               arc.max_len, arc.tol_active);
  cert.turn_fine = arc_turn(fine);
  cert.converged = std::isfinite(cert.turn_coarse) &&
                   std::isfinite(cert.turn_fine) &&
                   std::fabs(cert.turn_fine - cert.turn_coarse) <= tol;
  return cert;
}

}  // namespace singprop
