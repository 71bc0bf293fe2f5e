#include "singprop/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "singprop/errors.hpp"

namespace singprop {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

double lambda_max_sym(double a, double b, double c) {
  double m = 0.5 * (a + c);
  double d = 0.5 * (a - c);
  return m + std::sqrt(d * d + b * b);
}

}  // namespace

Branch::Branch(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::set<std::pair<int, int>> seen;
  for (const Term& t : terms_) {
    if (t.i < 0 || t.j < 0)
      throw std::invalid_argument("branch term with negative exponent");
    if (t.i + t.j > kMaxTotalDegree)
      throw std::invalid_argument("branch term exceeds degree cap " +
                                  std::to_string(kMaxTotalDegree));
    if (!std::isfinite(t.c))
      throw std::invalid_argument("branch term with non-finite coefficient");
    if (!seen.insert({t.i, t.j}).second)
      throw std::invalid_argument("duplicate branch term exponents (" +
                                  std::to_string(t.i) + ", " +
                                  std::to_string(t.j) + ")");
    degree_ = std::max(degree_, t.i + t.j);
  }
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
}

double Branch::value(Vec2 p) const {
  double v = 0.0;
  for (const Term& t : terms_) v += t.c * ipow(p.x, t.i) * ipow(p.y, t.j);
  return v;
}

Vec2 Branch::gradient(Vec2 p) const {
  Vec2 g{0.0, 0.0};
  for (const Term& t : terms_) {
    if (t.i > 0) g.x += t.c * t.i * ipow(p.x, t.i - 1) * ipow(p.y, t.j);
    if (t.j > 0) g.y += t.c * t.j * ipow(p.x, t.i) * ipow(p.y, t.j - 1);
  }
  return g;
}

std::array<double, 3> Branch::hessian(Vec2 p) const {
  double xx = 0.0, xy = 0.0, yy = 0.0;
  for (const Term& t : terms_) {
    if (t.i > 1)
      xx += t.c * t.i * (t.i - 1) * ipow(p.x, t.i - 2) * ipow(p.y, t.j);
    if (t.i > 0 && t.j > 0)
      xy += t.c * t.i * t.j * ipow(p.x, t.i - 1) * ipow(p.y, t.j - 1);
    if (t.j > 1)
      yy += t.c * t.j * (t.j - 1) * ipow(p.x, t.i) * ipow(p.y, t.j - 2);
  }
  return {xx, xy, yy};
}

double Branch::hessian_lambda_max(Vec2 p) const {
  auto h = hessian(p);
  return lambda_max_sym(h[0], h[1], h[2]);
}

Frame make_frame(Vec2 origin, Vec2 q) {
  if (std::fabs(norm(q) - 1.0) > 1e-9)
    throw std::invalid_argument("frame direction must be a unit vector");
  Vec2 u = normalized(q);  // renormalize to tighten the rotation
  Frame f;
  f.rotation = {u.x, u.y, -u.y, u.x};
  f.origin = origin;
  return f;
}

void validate_frame(const Frame& frame) {
  const auto& r = frame.rotation;
  double n0 = r[0] * r[0] + r[1] * r[1];
  double n1 = r[2] * r[2] + r[3] * r[3];
  double orth = r[0] * r[2] + r[1] * r[3];
  double det = r[0] * r[3] - r[1] * r[2];
  if (std::fabs(n0 - 1.0) > 1e-12 || std::fabs(n1 - 1.0) > 1e-12 ||
      std::fabs(orth) > 1e-12 || std::fabs(det - 1.0) > 1e-12)
    throw std::invalid_argument("frame rotation is not a det +1 rotation");
}

Constants derive_constants(const std::vector<Branch>& branches,
                           const Domain& domain, int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("derive_constants: grid_n < 16");
  if (branches.empty())
    throw std::invalid_argument("derive_constants: no branches");
  if (!(domain.xmin < domain.xmax) || !(domain.ymin < domain.ymax))
    throw std::invalid_argument("derive_constants: empty domain");

  auto grid_point = [&](int ix, int iy) -> Vec2 {
    double tx = static_cast<double>(ix) / (grid_n - 1);
    double ty = static_cast<double>(iy) / (grid_n - 1);
    return {domain.xmin + tx * domain.extent_x(),
            domain.ymin + ty * domain.extent_y()};
  };

  double lmax = 0.0;
  for (int iy = 0; iy < grid_n; ++iy)
    for (int ix = 0; ix < grid_n; ++ix) {
      Vec2 p = grid_point(ix, iy);
      for (const Branch& b : branches)
        lmax = std::max(lmax, b.hessian_lambda_max(p));
    }
  double K = 0.5 * std::max(0.0, lmax) * 1.05;

  double L = 0.0;
  for (int iy = 0; iy < grid_n; ++iy)
    for (int ix = 0; ix < grid_n; ++ix) {
      Vec2 p = grid_point(ix, iy);
      for (const Branch& b : branches)
        L = std::max(L, norm(2.0 * K * p - b.gradient(p)));
    }
  L *= 1.05;

  if (!std::isfinite(K) || !std::isfinite(L))
    throw NumericError("derive_constants: non-finite K or L");
  return {K, L};
}

SemiconcaveFn::SemiconcaveFn(std::vector<Branch> branches, Domain domain,
                             int grid_n)
    : branches_(std::move(branches)), domain_(domain), grid_n_(grid_n) {
  Constants c = derive_constants(branches_, domain_, grid_n_);
  K_ = c.K;
  L_ = c.L;
}

double eval_min(const SemiconcaveFn& fn, Vec2 x) {
  if (!fn.domain().contains(x))
    throw std::domain_error("eval_min: point outside domain");
  double m = fn.branches()[0].value(x);
  for (std::size_t b = 1; b < fn.branches().size(); ++b)
    m = std::min(m, fn.branches()[b].value(x));
  return m;
}

double active_tolerance(double tol_active, double min_value) {
  return tol_active * std::max(1.0, std::fabs(min_value));
}

std::vector<int> active_set(const SemiconcaveFn& fn, Vec2 x,
                            double tol_active) {
  if (!(tol_active > 0.0))
    throw std::invalid_argument("active_set: tol_active must be positive");
  double m = eval_min(fn, x);
  double tol = active_tolerance(tol_active, m);
  std::vector<int> act;
  for (std::size_t b = 0; b < fn.branches().size(); ++b)
    if (fn.branches()[b].value(x) <= m + tol) act.push_back(static_cast<int>(b));
  return act;
}

namespace {

// Dense coefficient grid for polynomials of total degree <= kMaxTotalDegree.
struct PolyGrid {
  static constexpr int kN = Branch::kMaxTotalDegree + 1;
  std::array<std::array<double, kN>, kN> c{};

  static PolyGrid affine(double a0, double ax, double ay) {
    PolyGrid p;
    p.c[0][0] = a0;
    p.c[1][0] = ax;
    p.c[0][1] = ay;
    return p;
  }
};

PolyGrid multiply(const PolyGrid& a, const PolyGrid& b) {
  // Affine substitution preserves total degree, so i+k and j+l stay in range
  // for every nonzero product; the bounds only guard the indices.
  PolyGrid r;
  for (int i = 0; i < PolyGrid::kN; ++i)
    for (int j = 0; j + i < PolyGrid::kN; ++j) {
      if (a.c[i][j] == 0.0) continue;
      for (int k = 0; i + k < PolyGrid::kN; ++k)
        for (int l = 0; j + l < PolyGrid::kN; ++l) {
          if (b.c[k][l] == 0.0) continue;
          r.c[i + k][j + l] += a.c[i][j] * b.c[k][l];
        }
    }
  return r;
}

void accumulate(PolyGrid& acc, const PolyGrid& p, double scale) {
  for (int i = 0; i < PolyGrid::kN; ++i)
    for (int j = 0; j < PolyGrid::kN; ++j) acc.c[i][j] += scale * p.c[i][j];
}

Branch compose_affine(const Branch& br, double m00, double m01, double o1,
                      double m10, double m11, double o2) {
  // x1 = m00 z1 + m01 z2 + o1, x2 = m10 z1 + m11 z2 + o2.
  PolyGrid X = PolyGrid::affine(o1, m00, m01);
  PolyGrid Y = PolyGrid::affine(o2, m10, m11);

  int max_i = 0, max_j = 0;
  for (const Term& t : br.terms()) {
    max_i = std::max(max_i, t.i);
    max_j = std::max(max_j, t.j);
  }
  std::vector<PolyGrid> xp(max_i + 1), yp(max_j + 1);
  xp[0] = PolyGrid::affine(1.0, 0.0, 0.0);
  yp[0] = xp[0];
  for (int k = 1; k <= max_i; ++k) xp[k] = multiply(xp[k - 1], X);
  for (int k = 1; k <= max_j; ++k) yp[k] = multiply(yp[k - 1], Y);

  PolyGrid acc;
  for (const Term& t : br.terms())
    accumulate(acc, multiply(xp[t.i], yp[t.j]), t.c);

  std::vector<Term> terms;
  for (int i = 0; i < PolyGrid::kN; ++i)
    for (int j = 0; j < PolyGrid::kN; ++j)
      if (acc.c[i][j] != 0.0) terms.push_back({i, j, acc.c[i][j]});
  return Branch(std::move(terms));
}

}  // namespace

SemiconcaveFn transform(const SemiconcaveFn& fn, const Frame& frame) {
  validate_frame(frame);
  const auto& r = frame.rotation;
  // A^{-1}(z) = R^T z + origin.
  double m00 = r[0], m01 = r[2], o1 = frame.origin.x;
  double m10 = r[1], m11 = r[3], o2 = frame.origin.y;

  std::vector<Branch> out;
  out.reserve(fn.branches().size());
  for (const Branch& b : fn.branches())
    out.push_back(compose_affine(b, m00, m01, o1, m10, m11, o2));

  const Domain& d = fn.domain();
  Vec2 corners[4] = {{d.xmin, d.ymin}, {d.xmax, d.ymin},
                     {d.xmax, d.ymax}, {d.xmin, d.ymax}};
  Domain nd;
  nd.xmin = nd.ymin = std::numeric_limits<double>::infinity();
  nd.xmax = nd.ymax = -std::numeric_limits<double>::infinity();
  for (Vec2 c : corners) {
    Vec2 z = frame.apply(c);
    nd.xmin = std::min(nd.xmin, z.x);
    nd.xmax = std::max(nd.xmax, z.x);
    nd.ymin = std::min(nd.ymin, z.y);
    nd.ymax = std::max(nd.ymax, z.y);
  }
  return SemiconcaveFn(std::move(out), nd, fn.grid_n());
}

}  // namespace singprop
