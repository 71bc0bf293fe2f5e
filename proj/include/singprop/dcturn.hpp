#pragma once

#include <array>
#include <map>
#include <vector>

#include "singprop/tracer.hpp"

namespace singprop {

// Arc rewritten as a graph x -> g(x) in a frame where the seed sits at the
// origin and the initial direction is (1,0). xs is strictly increasing with
// xs[0] = 0.
struct GraphParam {
  std::vector<double> xs;
  std::vector<double> gs;
  Frame frame;
  double slope_bound = 0.0;  // max |discrete slope of g|
};

// g = y1 - y2 + offset on xs, y1 and y2 convex (nondecreasing slopes) with
// y1(xs[0]) = y2(xs[0]) = 0.
struct DCDecomposition {
  std::vector<double> xs;
  std::vector<double> y1;
  std::vector<double> y2;
  double offset = 0.0;
};

// Partition of the vertical-slope range and the level-pair assignment.
// assignment[k] = i means levels[i-1], levels[i] both lie in the vertical
// slice of the subdifferential at grid point k.
struct PartitionClassification {
  std::vector<double> levels;
  std::vector<int> assignment;
  std::map<int, std::vector<int>> sets;  // i -> grid indices with i_x = i
};

struct PhiFunction {
  int level_index = 0;  // the i of the pair (levels[i-1], levels[i])
  std::vector<double> values;  // sampled on the full grid
};

struct Step3Result {
  PartitionClassification classification;
  std::vector<PhiFunction> phis;
  double selection_residual = 0.0;  // max |phi_{i_x}(x) - g(x)| over the grid
  double delta = 0.0;               // min vertical slice diameter over the grid
  double lipschitz_bound = 0.0;     // L used for the level range
};

struct TurnCertificate {
  double turn_coarse = 0.0;
  double turn_fine = 0.0;
  double tol = 0.0;
  bool converged = false;
};

struct MixingResult {
  DCDecomposition dc;
  std::vector<int> selected;  // smallest phi index matching h at each grid point
};

// Frame A(seed) = 0, A(q) = e1; samples transformed and truncated at the
// first interval whose discrete slope of the first coordinate drops below
// 1/2. Throws NumericError when fewer than 3 samples survive.
GraphParam reparametrize(const SingularArc& arc);

// Jordan split of the slope sequence: with slopes s_k, cumulative positive
// variation p_k and negative variation n_k, y1 has slopes max(s_0,0) + p_k
// and y2 has slopes max(-s_0,0) + n_k; both integrate from 0, offset = g(0).
DCDecomposition jordan_dc(const std::vector<double>& xs,
                          const std::vector<double>& gs);
DCDecomposition jordan_dc(const GraphParam& gp);

// Support-line construction on the graph of g. Builds the level partition
// over [-L-eps, L+eps] with uniform mesh delta/2.01, assigns each grid point
// the smallest admissible level pair, forms the two support-line envelopes
// per used pair and returns the quotient functions phi_i together with the
// classification. fn_transformed must be the function in gp's frame.
Step3Result step3_construct(const SemiconcaveFn& fn_transformed,
                            const GraphParam& gp, double tol_active);

// Validates that h is a continuous selection of the phis (pointwise match
// within 1e-8, jumps bounded by the phi Lipschitz constant times the grid
// step) and returns its Jordan DC split plus the realizing index per point.
MixingResult mixing_select(const std::vector<double>& xs,
                           const std::vector<std::vector<double>>& phis,
                           const std::vector<double>& h);

// Sum of unsigned exterior angles over interior vertices. Requires >= 3
// points and no repeated consecutive points.
double turn(const std::vector<Vec2>& polyline);

// Turn of a traced arc: polyline turn of the samples plus the rotation from
// the stored end tangents to the end chords. The end terms restore the O(h)
// boundary deficit of the inscribed polyline.
double arc_turn(const SingularArc& arc);

// Re-traces the arc at half step and compares arc turns.
TurnCertificate finite_turn_certificate(const SemiconcaveFn& fn,
                                        const SingularArc& arc, double tol);

// max over lines (x_k, w_k, p_k) of w_k + p_k (t - x_k).
double support_envelope(const std::vector<std::array<double, 3>>& lines,
                        double t);

}  // namespace singprop
