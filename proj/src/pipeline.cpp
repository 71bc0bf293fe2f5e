#include "singprop/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "singprop/errors.hpp"

namespace singprop {

Vec2 refine_seed(const SemiconcaveFn& fn, Vec2 approx, double tol_active) {
  const auto& branches = fn.branches();
  if (branches.size() < 2)
    throw NumericError("refine_seed: fewer than two branches");
  if (!fn.domain().contains(approx))
    throw NumericError("refine_seed: point outside domain");

  // Newton on the difference of the two smallest branches.
  int bi = 0, bj = 1;
  {
    double vi = std::numeric_limits<double>::infinity();
    double vj = vi;
    for (std::size_t b = 0; b < branches.size(); ++b) {
      double v = branches[b].value(approx);
      if (v < vi) {
        vj = vi;
        bj = bi;
        vi = v;
        bi = static_cast<int>(b);
      } else if (v < vj) {
        vj = v;
        bj = static_cast<int>(b);
      }
    }
  }

  Vec2 y = approx;
  for (int it = 0; it < 50; ++it) {
    double h = branches[bi].value(y) - branches[bj].value(y);
    if (std::fabs(h) <= kCorrectorTol) break;
    Vec2 g = branches[bi].gradient(y) - branches[bj].gradient(y);
    double g2 = dot(g, g);
    if (!(g2 > 1e-28))
      throw NumericError("refine_seed: vanishing gradient difference");
    y = y - (h / g2) * g;
    if (!std::isfinite(y.x) || !std::isfinite(y.y))
      throw NumericError("refine_seed: diverged");
  }
  y.x = std::clamp(y.x, fn.domain().xmin, fn.domain().xmax);
  y.y = std::clamp(y.y, fn.domain().ymin, fn.domain().ymax);
  if (std::fabs(branches[bi].value(y) - branches[bj].value(y)) > 1e-8)
    throw NumericError("refine_seed: no convergence");
  if (!is_singular(fn, y, tol_active))
    throw NumericError("refine_seed: refined point is not singular");
  return y;
}

namespace {

double dist_to_arcs(const std::vector<SingularArc>& arcs, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const SingularArc& arc : arcs)
    for (const ArcSample& smp : arc.samples)
      best = std::min(best, dist(smp.x, p));
  return best;
}

void trace_from(const SemiconcaveFn& fn, Vec2 seed,
                const PipelineOptions& opts, std::vector<SingularArc>* arcs) {
  auto dirs = seed_directions(fn, seed, opts.tol_active, opts.t_probe);
  for (const SeedDirection& d : dirs)
    arcs->push_back(trace_arc(fn, seed, d.pair, d.q, opts.step, opts.max_len,
                              opts.tol_active));
}

}  // namespace

std::vector<SingularArc> trace_all(const SemiconcaveFn& fn,
                                   const std::vector<Vec2>& seeds,
                                   const PipelineOptions& opts) {
  std::vector<SingularArc> arcs;
  if (!seeds.empty()) {
    for (Vec2 s : seeds) {
      Vec2 refined;
      try {
        refined = refine_seed(fn, s, opts.tol_active);
      } catch (const NumericError&) {
        continue;  // seed does not meet a singular point
      }
      trace_from(fn, refined, opts, &arcs);
    }
    return arcs;
  }

  ScanResult scan =
      grid_singularity_scan(fn, opts.grid_h, 10.0, opts.tol_active);
  for (Vec2 center : scan.flagged) {
    Vec2 refined;
    try {
      refined = refine_seed(fn, center, opts.tol_active);
    } catch (const NumericError&) {
      continue;  // flagged by a kink the refiner cannot pin down
    }
    if (dist_to_arcs(arcs, refined) < 1.5 * opts.grid_h) continue;
    trace_from(fn, refined, opts, &arcs);
  }
  return arcs;
}

DcMetrics dc_metrics(const DCDecomposition& dc,
                     const std::vector<double>& gs) {
  const std::size_t m = dc.xs.size();
  if (m < 2 || dc.y1.size() != m || dc.y2.size() != m || gs.size() != m)
    throw std::invalid_argument("dc_metrics: size mismatch");

  DcMetrics out;
  for (std::size_t k = 0; k < m; ++k)
    out.reconstruction_error =
        std::max(out.reconstruction_error,
                 std::fabs(dc.y1[k] - dc.y2[k] + dc.offset - gs[k]));

  std::vector<double> sg(m - 1), s1(m - 1), s2(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    double dx = dc.xs[k + 1] - dc.xs[k];
    sg[k] = (gs[k + 1] - gs[k]) / dx;
    s1[k] = (dc.y1[k + 1] - dc.y1[k]) / dx;
    s2[k] = (dc.y2[k + 1] - dc.y2[k]) / dx;
    out.max_slope = std::max({out.max_slope, std::fabs(s1[k]),
                              std::fabs(s2[k])});
  }

  out.min_second_diff = std::numeric_limits<double>::infinity();
  if (m == 2) out.min_second_diff = 0.0;
  double variation = 0.0;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    out.min_second_diff = std::min({out.min_second_diff, s1[k] - s1[k - 1],
                                    s2[k] - s2[k - 1]});
    variation += std::fabs(sg[k] - sg[k - 1]);
  }
  double lip_g = 0.0;
  for (double s : sg) lip_g = std::max(lip_g, std::fabs(s));
  out.slope_budget = lip_g + variation;

  out.ok = out.reconstruction_error <= 1e-10 &&
           out.min_second_diff >= -1e-12 &&
           out.max_slope <= out.slope_budget + 1e-9 * (1.0 + out.slope_budget);
  return out;
}

ArcCertificate certify_arc(const SemiconcaveFn& fn, const SingularArc& arc,
                           const PipelineOptions& opts) {
  ArcCertificate out;
  out.arc = arc;
  out.cy = verify_cy(arc, opts.delta_min);
  out.gp = reparametrize(arc);
  SemiconcaveFn local = transform(fn, out.gp.frame);
  out.s3 = step3_construct(local, out.gp, opts.tol_active);
  out.dc = jordan_dc(out.gp);
  out.dcm = dc_metrics(out.dc, out.gp.gs);
  out.cert = finite_turn_certificate(fn, arc, opts.turn_tol);
  out.selection_ok = out.s3.selection_residual <= 1e-6;
  out.pass = out.cy.passed && out.dcm.ok && out.selection_ok &&
             out.cert.converged;
  return out;
}

AnalyzeResult analyze_point(const SemiconcaveFn& fn, Vec2 x,
                            double tol_active) {
  AnalyzeResult out;
  out.dstar = reachable_gradients(fn, x, tol_active);
  out.dplus = superdifferential(out.dstar);
  out.diameter = diam(out.dplus);
  out.criterion = propagation_criterion(out.dstar);
  out.singular = out.dstar.size() >= 2;
  return out;
}

}  // namespace singprop
