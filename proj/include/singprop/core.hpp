#pragma once

#include <array>
#include <vector>

#include "singprop/geometry.hpp"

namespace singprop {

// One monomial c * x1^i * x2^j.
struct Term {
  int i = 0;
  int j = 0;
  double c = 0.0;
};

// Bivariate polynomial. Value, gradient and Hessian are evaluated exactly
// (integer powers, no finite differences). Terms are kept sorted by (i, j).
class Branch {
 public:
  static constexpr int kMaxTotalDegree = 8;

  Branch() = default;
  explicit Branch(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  int degree() const { return degree_; }

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;
  // {f_xx, f_xy, f_yy}
  std::array<double, 3> hessian(Vec2 p) const;
  double hessian_lambda_max(Vec2 p) const;

 private:
  std::vector<Term> terms_;
  int degree_ = 0;
};

// Closed axis-aligned rectangle.
struct Domain {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;

  bool contains(Vec2 p, double tol = 0.0) const {
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol &&
           p.y <= ymax + tol;
  }
  double extent_x() const { return xmax - xmin; }
  double extent_y() const { return ymax - ymin; }
};

// A(x) = R (x - origin), R a rotation with det +1. Maps `origin` to (0,0).
struct Frame {
  // Row-major: {r00, r01, r10, r11}.
  std::array<double, 4> rotation{1.0, 0.0, 0.0, 1.0};
  Vec2 origin{0.0, 0.0};

  Vec2 apply(Vec2 p) const {
    Vec2 d = p - origin;
    return {rotation[0] * d.x + rotation[1] * d.y,
            rotation[2] * d.x + rotation[3] * d.y};
  }
  Vec2 apply_vector(Vec2 v) const {
    return {rotation[0] * v.x + rotation[1] * v.y,
            rotation[2] * v.x + rotation[3] * v.y};
  }
  Vec2 invert(Vec2 z) const {
    return {rotation[0] * z.x + rotation[2] * z.y + origin.x,
            rotation[1] * z.x + rotation[3] * z.y + origin.y};
  }
};

// Frame taking `origin` to (0,0) and the unit vector q to (1,0).
Frame make_frame(Vec2 origin, Vec2 q);

// Throws std::invalid_argument unless the rotation block is orthonormal with
// det +1 (tolerance 1e-12).
void validate_frame(const Frame& frame);

struct Constants {
  double K = 0.0;  // semiconcavity constant
  double L = 0.0;  // bound for |2Kx - grad f_b| over the domain
};

// Samples a grid_n x grid_n grid (endpoints included). K is half the largest
// positive Hessian eigenvalue seen, L the largest |2Kx - grad f_b|; both get
// a 1.05 safety factor. Requires grid_n >= 16.
Constants derive_constants(const std::vector<Branch>& branches,
                           const Domain& domain, int grid_n);

// u(x) = min over branches, semiconcave with constant K on `domain`.
class SemiconcaveFn {
 public:
  SemiconcaveFn(std::vector<Branch> branches, Domain domain, int grid_n = 64);

  const std::vector<Branch>& branches() const { return branches_; }
  const Domain& domain() const { return domain_; }
  double K() const { return K_; }
  double L() const { return L_; }
  int grid_n() const { return grid_n_; }

 private:
  std::vector<Branch> branches_;
  Domain domain_;
  double K_ = 0.0;
  double L_ = 0.0;
  int grid_n_ = 64;
};

// Minimum over branches. Throws std::domain_error outside the domain.
double eval_min(const SemiconcaveFn& fn, Vec2 x);

// Effective activity tolerance: tol scaled by the local value magnitude.
double active_tolerance(double tol_active, double min_value);

// Indices b with f_b(x) <= min + active_tolerance(tol_active, min).
// Never empty. Requires tol_active > 0.
std::vector<int> active_set(const SemiconcaveFn& fn, Vec2 x,
                            double tol_active);

// fn composed with frame.invert (exact polynomial recomposition). The domain
// becomes the bounding rectangle of the transformed corners; K and L are
// re-derived on it.
SemiconcaveFn transform(const SemiconcaveFn& fn, const Frame& frame);

}  // namespace singprop
