#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "tomoscope/types.hpp"

namespace tomoscope {

/// Direction of unit Euclidean length in dimension 2, 3 or 4. The
/// constructor normalizes; zero or non-finite input throws DegenerateInput.
class UnitVec {
 public:
  explicit UnitVec(const VecN& v);
  UnitVec(std::initializer_list<double> c) : UnitVec(vecn(c)) {}

  int dim() const { return static_cast<int>(v_.size()); }
  const VecN& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  double dot(const VecN& x) const { return v_.dot(x); }
  UnitVec operator-() const { return UnitVec(-v_, Trusted{}); }

 private:
  struct Trusted {};
  UnitVec(const VecN& v, Trusted) : v_(v) {}

  VecN v_;
};

struct LineD {
  VecN point;
  UnitVec dir;

  int dim() const { return static_cast<int>(point.size()); }
  VecN at(double t) const { return point + t * dir.vec(); }
  VecN closest_point(const VecN& x) const { return point + dir.dot(x - point) * dir.vec(); }
  double distance(const VecN& x) const { return (x - closest_point(x)).norm(); }
};

/// True when the two lines coincide as point sets: parallel directions (up to
/// sign) and anchors offset along the direction.
bool same_line(const LineD& a, const LineD& b, double tol = 1e-9);

/// Hyperplane {x : x . normal = offset}; a plane when dim() == 3.
struct PlaneD {
  UnitVec normal;
  double offset = 0.0;

  static PlaneD through(const VecN& p, const UnitVec& n) { return PlaneD{n, n.dot(p)}; }

  int dim() const { return normal.dim(); }
  double signed_distance(const VecN& x) const { return normal.dot(x) - offset; }
  VecN project(const VecN& x) const { return x - signed_distance(x) * normal.vec(); }
  VecN foot() const { return offset * normal.vec(); }
};

/// Orthonormal chart of a plane in R^3. (e1, e2, normal) is right-handed.
struct Frame2 {
  VecN origin;
  UnitVec e1;
  UnitVec e2;
  UnitVec normal;

  VecN to_world(const Vec2& y) const { return origin + y.x() * e1.vec() + y.y() * e2.vec(); }
  Vec2 to_local(const VecN& x) const {
    const VecN d = x - origin;
    return {e1.dot(d), e2.dot(d)};
  }
  VecN direction(double theta) const { return std::cos(theta) * e1.vec() + std::sin(theta) * e2.vec(); }
};

/// Orthonormal chart of a hyperplane in R^d: basis columns span the plane.
struct HyperFrame {
  VecN origin;
  MatN basis;  // d x (d-1)
  UnitVec normal;

  int dim() const { return static_cast<int>(origin.size()); }
  VecN to_world(const VecN& y) const { return origin + basis * y; }
  VecN to_local(const VecN& x) const { return basis.transpose() * (x - origin); }
  VecN lift_direction(const VecN& y) const { return basis * y; }
};

/// Deterministic chart of a plane in R^3: origin is the foot of the
/// perpendicular from the global origin, e1 is the projection of the
/// lowest-index standard basis vector that survives projection (> 1e-6).
Frame2 plane_frame(const PlaneD& plane);

/// Same rule in any dimension, completing the basis by Gram-Schmidt on the
/// remaining standard basis vectors.
HyperFrame hyperplane_frame(const PlaneD& plane);

/// Affine reflection R_L: identity on L, negation on L-perp about each point of L.
VecN reflect_point_about_line(const LineD& line, const VecN& x);
LineD reflect_line_about_line(const LineD& axis, const LineD& line);

double angle_mod_pi(double a);
/// Distance between two undirected line angles on the circle R / pi Z.
double angle_distance_mod_pi(double a, double b);

/// Orbit of the reflection recurrence on a pencil of lines, angles mod pi.
struct StarlineState {
  double base_angle = 0.0;
  std::vector<double> angles;  // sorted, distinct, in [0, pi)
  bool closed = false;
  std::optional<int> period;
  double max_gap = kPi;
  int iterations = 0;
};

StarlineState starline_generate(double theta1, double theta2, int max_iter, double closure_tol = 1e-9);

struct StarlineClass {
  enum class Kind { Finite, Dense };
  Kind kind = Kind::Dense;
  int numerator = 0;
  int denominator = 0;  // the line count q when finite

  bool finite() const { return kind == Kind::Finite; }
};

/// Finite(q) when delta is within rational_tol of p*pi/q with q <= max_denominator.
StarlineClass classify_starline_angle(double delta, int max_denominator = 10000, double rational_tol = 1e-12);

}  // namespace tomoscope
