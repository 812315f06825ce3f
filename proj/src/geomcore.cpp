#include "tomoscope/geomcore.hpp"

#include <algorithm>
#include <cmath>

#include "tomoscope/error.hpp"

namespace tomoscope {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptySection: return "EmptySection";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DegenerateAxis: return "DegenerateAxis";
    case ErrorCode::PointOutsideBody: return "PointOutsideBody";
    case ErrorCode::ConfigurationInvalid: return "ConfigurationInvalid";
    case ErrorCode::NonUniqueDiameter: return "NonUniqueDiameter";
    case ErrorCode::MissingLines: return "MissingLines";
  }
  return "Unknown";
}

UnitVec::UnitVec(const VecN& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::DegenerateInput, "cannot normalize a zero or non-finite vector");
  }
  v_ = v / n;
}

bool same_line(const LineD& a, const LineD& b, double tol) {
  if (a.dim() != b.dim()) return false;
  const double parallel = std::abs(std::abs(a.dir.dot(b.dir.vec())) - 1.0);
  if (parallel > tol) return false;
  return a.distance(b.point) <= tol;
}

namespace {

// Gram-Schmidt over the standard basis, skipping vectors whose residual after
// projection is too small.
MatN complete_basis(const UnitVec& normal, int wanted) {
  const int d = normal.dim();
  MatN basis(d, wanted);
  int found = 0;
  for (int i = 0; i < d && found < wanted; ++i) {
    VecN v = basis_vector(d, i);
    v -= normal.dot(v) * normal.vec();
    if (v.norm() <= 1e-6) continue;
    for (int j = 0; j < found; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    const double n = v.norm();
    if (n <= 1e-6) continue;
    basis.col(found++) = v / n;
  }
  if (found < wanted) throw Error(ErrorCode::DegenerateInput, "could not complete hyperplane frame");
  return basis;
}

}  // namespace

Frame2 plane_frame(const PlaneD& plane) {
  if (plane.dim() != 3) throw Error(ErrorCode::DegenerateInput, "plane_frame requires a plane in R^3");
  const MatN b = complete_basis(plane.normal, 1);
  const Vec3 n = plane.normal.vec();
  const Vec3 e1 = b.col(0);
  const Vec3 e2 = n.cross(e1);
  return Frame2{plane.foot(), UnitVec(VecN(e1)), UnitVec(VecN(e2)), plane.normal};
}

HyperFrame hyperplane_frame(const PlaneD& plane) {
  const int d = plane.dim();
  return HyperFrame{plane.foot(), complete_basis(plane.normal, d - 1), plane.normal};
}

VecN reflect_point_about_line(const LineD& line, const VecN& x) {
  const VecN rel = x - line.point;
  return line.point + 2.0 * line.dir.dot(rel) * line.dir.vec() - rel;
}

LineD reflect_line_about_line(const LineD& axis, const LineD& line) {
  const VecN p = reflect_point_about_line(axis, line.point);
  const VecN q = reflect_point_about_line(axis, line.point + line.dir.vec());
  return LineD{p, UnitVec(VecN(q - p))};
}

double angle_mod_pi(double a) {
  double r = std::fmod(a, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r -= kPi;
  return r;
}

double angle_distance_mod_pi(double a, double b) {
  const double d = angle_mod_pi(a - b);
  return std::min(d, kPi - d);
}

StarlineState starline_generate(double theta1, double theta2, int max_iter, double closure_tol) {
  if (max_iter < 2) throw Error(ErrorCode::DegenerateInput, "starline needs max_iter >= 2");
  const double a0 = angle_mod_pi(theta1);
  const double a1 = angle_mod_pi(theta2);
  if (angle_distance_mod_pi(a0, a1) <= closure_tol) {
    throw Error(ErrorCode::DegenerateInput, "starline generators coincide (single line)");
  }

  StarlineState st;
  st.base_angle = a0;
  std::vector<double> orbit{a0, a1};
  double prev2 = a0;
  double prev1 = a1;
  int it = 2;
  for (; it < max_iter; ++it) {
    const double next = angle_mod_pi(2.0 * prev1 - prev2);
    const bool seen = std::any_of(orbit.begin(), orbit.end(),
                                  [&](double a) { return angle_distance_mod_pi(a, next) <= closure_tol; });
    if (seen) {
      st.closed = true;
      break;
    }
    orbit.push_back(next);
    prev2 = prev1;
    prev1 = next;
  }
  st.iterations = it;
  std::sort(orbit.begin(), orbit.end());
  st.angles = orbit;
  if (st.closed) st.period = static_cast<int>(orbit.size());

  double gap = kPi - orbit.back() + orbit.front();
  for (std::size_t i = 1; i < orbit.size(); ++i) gap = std::max(gap, orbit[i] - orbit[i - 1]);
  st.max_gap = gap;
  return st;
}

StarlineClass classify_starline_angle(double delta, int max_denominator, double rational_tol) {
  // Continued-fraction convergents of delta / pi.
  const double x = delta / kPi;
  long long h_prev = 1, h_prev2 = 0;
  long long k_prev = 0, k_prev2 = 1;
  double y = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(y);
    const long long ai = static_cast<long long>(a);
    const long long h = ai * h_prev + h_prev2;
    const long long k = ai * k_prev + k_prev2;
    if (k > max_denominator) break;
    if (k > 0 && std::abs(delta - kPi * static_cast<double>(h) / static_cast<double>(k)) <= rational_tol) {
      StarlineClass c;
      c.kind = StarlineClass::Kind::Finite;
      c.numerator = static_cast<int>(h);
      c.denominator = static_cast<int>(k);
      return c;
    }
    const double frac = y - a;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return StarlineClass{};
}

}  // namespace tomoscope
