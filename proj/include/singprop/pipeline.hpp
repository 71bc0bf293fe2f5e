#pragma once

#include <string>
#include <vector>

#include "singprop/dcturn.hpp"
#include "singprop/scenario.hpp"

namespace singprop {

// Newton-polishes an approximate singular point onto the nearest branch
// equality curve and checks it is singular. Throws NumericError on failure.
Vec2 refine_seed(const SemiconcaveFn& fn, Vec2 approx, double tol_active);

// Traces every valid direction from the given seeds. With no seeds, runs the
// grid scan, refines flagged cell centers and skips candidates that land on
// an already-traced arc. Arcs appear in deterministic seed-major order.
std::vector<SingularArc> trace_all(const SemiconcaveFn& fn,
                                   const std::vector<Vec2>& seeds,
                                   const PipelineOptions& opts);

struct DcMetrics {
  double reconstruction_error = 0.0;  // max |y1 - y2 + offset - g|
  double min_second_diff = 0.0;       // min slope increment of y1 and y2
  double max_slope = 0.0;             // max |slope| of y1 and y2
  double slope_budget = 0.0;          // L_g + total slope variation of g
  bool ok = false;
};

DcMetrics dc_metrics(const DCDecomposition& dc, const std::vector<double>& gs);

struct ArcCertificate {
  std::string arc_id;
  SingularArc arc;
  CyReport cy;
  GraphParam gp;
  DCDecomposition dc;
  DcMetrics dcm;
  Step3Result s3;
  TurnCertificate cert;
  bool selection_ok = false;  // s3 residual <= 1e-6
  bool pass = false;
};

// Full certification of one traced arc: CY checks, reparametrization,
// support-line construction, Jordan DC split and the finite-turn certificate.
ArcCertificate certify_arc(const SemiconcaveFn& fn, const SingularArc& arc,
                           const PipelineOptions& opts);

struct AnalyzeResult {
  GradientSet dstar;
  ConvexPolygon dplus;
  double diameter = 0.0;
  bool criterion = false;
  bool singular = false;
};

AnalyzeResult analyze_point(const SemiconcaveFn& fn, Vec2 x, double tol_active);

}  // namespace singprop
