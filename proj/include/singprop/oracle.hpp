#pragma once

#include <cstdint>
#include <vector>

#include "singprop/subdiff.hpp"

namespace singprop {

// Default seed for oracle sampling. The CLI overrides it from SINGPROP_SEED.
inline constexpr std::uint64_t kOracleSeed = 0x53494E47u;

struct NumericGradient {
  bool differentiable = false;
  Vec2 grad{0.0, 0.0};  // h/2 central-difference estimate when differentiable
};

// Finite-difference differentiability probe. Per axis it compares central
// differences at h and h/2 and forward against backward differences at h/2;
// the point passes when every discrepancy stays below richardson_factor * h.
// (Central differences alone cancel at symmetric kinks; the one-sided pair
// catches those.) Requires x at distance > h from the domain boundary.
NumericGradient numeric_gradient(const SemiconcaveFn& fn, Vec2 x, double h,
                                 double richardson_factor = 10.0);

struct ScanResult {
  int nx = 0, ny = 0;
  double cell_w = 0.0, cell_h = 0.0;
  std::vector<Vec2> flagged;  // cell centers, row-major (y outer, x inner)
};

// Covers the domain with cells of size ~h (h snapped so the cells tile the
// rectangle exactly) and flags every cell whose center fails numeric_gradient
// or whose corners show an active-set change with gradients farther apart
// than kCoalescenceTol. Requires h <= min extent / 8.
ScanResult grid_singularity_scan(const SemiconcaveFn& fn, double h,
                                 double richardson_factor = 10.0,
                                 double tol_active = 1e-9);

// Center of the scan cell containing x (clamped to the grid).
Vec2 scan_cell_center(const Domain& domain, const ScanResult& scan, Vec2 x);

// True when the cell containing x was flagged.
bool scan_flags_point(const Domain& domain, const ScanResult& scan, Vec2 x);

// Numeric gradients at n uniform random points in the disk B(x, radius),
// single-linkage clustered at threshold 1e-3 (above finite-difference
// noise); returns the cluster means. Points with a nondifferentiable verdict
// are skipped; if every point is skipped this throws NumericError. Requires
// n >= 64. Deterministic for a fixed seed.
GradientSet sampled_reachable_gradients(const SemiconcaveFn& fn, Vec2 x,
                                        double radius, int n,
                                        std::uint64_t seed = kOracleSeed);

}  // namespace singprop
