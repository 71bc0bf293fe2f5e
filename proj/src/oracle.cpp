#include "singprop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "singprop/errors.hpp"
#include "singprop/tracer.hpp"

namespace singprop {

namespace {

// Uniform double in [0,1) from the top 53 bits; identical across platforms.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct AxisProbe {
  bool consistent;
  double value;  // h/2 central difference
};

AxisProbe probe_axis(const SemiconcaveFn& fn, Vec2 x, Vec2 e, double h,
                     double factor) {
  double f0 = eval_min(fn, x);
  double fp = eval_min(fn, x + h * e);
  double fm = eval_min(fn, x - h * e);
  double fp2 = eval_min(fn, x + (h / 2) * e);
  double fm2 = eval_min(fn, x - (h / 2) * e);
  double c1 = (fp - fm) / (2 * h);
  double c2 = (fp2 - fm2) / h;
  double fwd = (fp2 - f0) / (h / 2);
  double bwd = (f0 - fm2) / (h / 2);
  bool ok = std::fabs(c1 - c2) < factor * h && std::fabs(fwd - bwd) < factor * h;
  return {ok, c2};
}

}  // namespace

NumericGradient numeric_gradient(const SemiconcaveFn& fn, Vec2 x, double h,
                                 double richardson_factor) {
  if (!(h > 0.0)) throw std::invalid_argument("numeric_gradient: h <= 0");
  const Domain& d = fn.domain();
  if (x.x - h < d.xmin || x.x + h > d.xmax || x.y - h < d.ymin ||
      x.y + h > d.ymax)
    throw std::invalid_argument(
        "numeric_gradient: point violates the margin h to the boundary");

  AxisProbe px = probe_axis(fn, x, {1.0, 0.0}, h, richardson_factor);
  AxisProbe py = probe_axis(fn, x, {0.0, 1.0}, h, richardson_factor);
  if (!px.consistent || !py.consistent) return {false, {0.0, 0.0}};
  return {true, {px.value, py.value}};
}

ScanResult grid_singularity_scan(const SemiconcaveFn& fn, double h,
                                 double richardson_factor, double tol_active) {
  const Domain& d = fn.domain();
  double ext = std::min(d.extent_x(), d.extent_y());
  if (!(h > 0.0) || h > ext / 8.0)
    throw std::invalid_argument(
        "grid_singularity_scan: need 0 < h <= min extent / 8");

  ScanResult res;
  res.nx = std::max(8, static_cast<int>(std::lround(d.extent_x() / h)));
  res.ny = std::max(8, static_cast<int>(std::lround(d.extent_y() / h)));
  res.cell_w = d.extent_x() / res.nx;
  res.cell_h = d.extent_y() / res.ny;

  // Corner tables: active sets and their gradients at every node.
  int cnx = res.nx + 1, cny = res.ny + 1;
  std::vector<std::vector<int>> corner_active(
      static_cast<std::size_t>(cnx) * cny);
  std::vector<std::vector<Vec2>> corner_grads(
      static_cast<std::size_t>(cnx) * cny);
  for (int jy = 0; jy < cny; ++jy)
    for (int jx = 0; jx < cnx; ++jx) {
      Vec2 p{d.xmin + jx * res.cell_w, d.ymin + jy * res.cell_h};
      p.x = std::min(p.x, d.xmax);
      p.y = std::min(p.y, d.ymax);
      auto act = active_set(fn, p, tol_active);
      auto& g = corner_grads[static_cast<std::size_t>(jy) * cnx + jx];
      for (int b : act) g.push_back(fn.branches()[b].gradient(p));
      corner_active[static_cast<std::size_t>(jy) * cnx + jx] = std::move(act);
    }

  double h_fd = std::min(1e-4, std::min(res.cell_w, res.cell_h) / 4.0);

  for (int jy = 0; jy < res.ny; ++jy)
    for (int jx = 0; jx < res.nx; ++jx) {
      Vec2 center{d.xmin + (jx + 0.5) * res.cell_w,
                  d.ymin + (jy + 0.5) * res.cell_h};
      bool flag = !numeric_gradient(fn, center, h_fd, richardson_factor)
                       .differentiable;
      if (!flag) {
        const std::size_t c00 = static_cast<std::size_t>(jy) * cnx + jx;
        const std::size_t idx[4] = {c00, c00 + 1, c00 + cnx, c00 + cnx + 1};
        bool same = true;
        for (int k = 1; k < 4 && same; ++k)
          same = corner_active[idx[k]] == corner_active[idx[0]];
        if (!same) {
          // Active set changes across the cell; require genuinely distinct
          // gradients so coincident-gradient crossings stay unflagged.
          double sep = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b)
              for (Vec2 ga : corner_grads[idx[a]])
                for (Vec2 gb : corner_grads[idx[b]])
                  sep = std::max(sep, dist(ga, gb));
          flag = sep > kCoalescenceTol;
        }
      }
      if (flag) res.flagged.push_back(center);
    }
  return res;
}

Vec2 scan_cell_center(const Domain& domain, const ScanResult& scan, Vec2 x) {
  int jx = static_cast<int>(std::floor((x.x - domain.xmin) / scan.cell_w));
  int jy = static_cast<int>(std::floor((x.y - domain.ymin) / scan.cell_h));
  jx = std::clamp(jx, 0, scan.nx - 1);
  jy = std::clamp(jy, 0, scan.ny - 1);
  return {domain.xmin + (jx + 0.5) * scan.cell_w,
          domain.ymin + (jy + 0.5) * scan.cell_h};
}

bool scan_flags_point(const Domain& domain, const ScanResult& scan, Vec2 x) {
  Vec2 c = scan_cell_center(domain, scan, x);
  double tol = 1e-9 * std::max(scan.cell_w, scan.cell_h);
  for (Vec2 f : scan.flagged)
    if (std::fabs(f.x - c.x) <= tol && std::fabs(f.y - c.y) <= tol) return true;
  return false;
}

GradientSet sampled_reachable_gradients(const SemiconcaveFn& fn, Vec2 x,
                                        double radius, int n,
                                        std::uint64_t seed) {
  if (n < 64)
    throw std::invalid_argument("sampled_reachable_gradients: n < 64");
  if (!(radius > 0.0))
    throw std::invalid_argument("sampled_reachable_gradients: radius <= 0");

  double h_fd = std::min(1e-5, radius / 8.0);
  std::mt19937_64 rng(seed);
  const Domain& d = fn.domain();

  std::vector<Vec2> grads;
  for (int k = 0; k < n; ++k) {
    double r = radius * std::sqrt(uniform01(rng));
    double th = 2.0 * std::numbers::pi * uniform01(rng);
    Vec2 p = x + r * Vec2{std::cos(th), std::sin(th)};
    if (p.x - h_fd < d.xmin || p.x + h_fd > d.xmax || p.y - h_fd < d.ymin ||
        p.y + h_fd > d.ymax)
      continue;  // margin violation; skip the sample
    NumericGradient g = numeric_gradient(fn, p, h_fd);
    if (g.differentiable) grads.push_back(g.grad);
  }
  if (grads.empty())
    throw NumericError(
        "sampled_reachable_gradients: no differentiable sample in B(x, r)");

  // Single-linkage clustering at threshold 1e-3 via union-find.
  const double link = 1e-3;
  std::vector<int> parent(grads.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < grads.size(); ++a)
    for (std::size_t b = a + 1; b < grads.size(); ++b)
      if (dist(grads[a], grads[b]) <= link) {
        int ra = find(static_cast<int>(a)), rb = find(static_cast<int>(b));
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }

  std::vector<Vec2> centers;
  std::vector<int> roots;
  for (std::size_t a = 0; a < grads.size(); ++a) {
    int r = find(static_cast<int>(a));
    auto it = std::find(roots.begin(), roots.end(), r);
    std::size_t ci;
    if (it == roots.end()) {
      roots.push_back(r);
      centers.push_back({0.0, 0.0});
      ci = centers.size() - 1;
    } else {
      ci = static_cast<std::size_t>(it - roots.begin());
    }
    centers[ci] = centers[ci] + grads[a];
  }
  for (std::size_t c = 0; c < centers.size(); ++c) {
    int count = 0;
    for (std::size_t a = 0; a < grads.size(); ++a)
      if (find(static_cast<int>(a)) == roots[c]) ++count;
    centers[c] = (1.0 / count) * centers[c];
  }
  return make_gradient_set(centers);
}

}  // namespace singprop
