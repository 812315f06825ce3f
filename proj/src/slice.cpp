#include "tomoscope/slice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tomoscope/error.hpp"
#include "tomoscope/numeric.hpp"

namespace tomoscope {

namespace {

constexpr double kBracketLimit = 1e6;
constexpr double kSectionTol = 1e-10;

std::vector<Vec2> envelope(const std::vector<double>& h) {
  const int m = static_cast<int>(h.size());
  const double step = kTwoPi / m;
  std::vector<Vec2> pts(m);
  for (int i = 0; i < m; ++i) {
    const double th = step * i;
    const double dh = (h[(i + 1) % m] - h[(i + m - 1) % m]) / (2.0 * step);
    const Vec2 u(std::cos(th), std::sin(th));
    const Vec2 du(-std::sin(th), std::cos(th));
    pts[i] = h[i] * u + dh * du;
  }
  return pts;
}

char* fmt_num(char* buf, std::size_t n, double v) {
  std::snprintf(buf, n, "%.12g", v);
  return buf;
}

}  // namespace

Frame2 standard_frame() {
  return Frame2{VecN::Zero(3), UnitVec{1.0, 0.0, 0.0}, UnitVec{0.0, 1.0, 0.0}, UnitVec{0.0, 0.0, 1.0}};
}

PlanarBody PlanarBody::from_support(const Frame2& frame, std::vector<double> h) {
  if (h.size() < 8) throw Error(ErrorCode::InvalidSpec, "planar body needs at least 8 samples");
  Harmonics coeffs = analyze(h);
  std::vector<Vec2> pts = envelope(h);
  return PlanarBody{frame, std::move(h), std::move(coeffs), std::move(pts)};
}

PlanarBody PlanarBody::from_function(const std::function<double(double)>& h2, int m) {
  std::vector<double> h(m);
  for (int i = 0; i < m; ++i) h[i] = h2(kTwoPi * i / m);
  return from_support(standard_frame(), std::move(h));
}

PlanarBody PlanarBody::ellipse(double a, double b, const Vec2& center, double rotation, int m) {
  return from_function(
      [=](double th) {
        const double c = std::cos(th - rotation);
        const double s = std::sin(th - rotation);
        return center.x() * std::cos(th) + center.y() * std::sin(th) + std::sqrt(a * a * c * c + b * b * s * s);
      },
      m);
}

double PlanarBody::circumradius() const {
  double r = 0.0;
  for (const Vec2& x : boundary) r = std::max(r, x.norm());
  return r;
}

double PlanarBody::convexity_defect() const {
  const std::size_t m = boundary.size();
  double worst = HUGE_VAL;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e0 = boundary[(i + 1) % m] - boundary[i];
    const Vec2 e1 = boundary[(i + 2) % m] - boundary[(i + 1) % m];
    worst = std::min(worst, e0.x() * e1.y() - e0.y() * e1.x());
  }
  return worst;
}

Vec2 PlanarBody::steiner_point() const {
  if (support2.order() < 1) return Vec2::Zero();
  return {support2.a[1], support2.b[1]};
}

double min_section_width(const ConvexBody& body) { return 1e-4 * body.circumradius_bound(); }

void check_section_margin(const ConvexBody& body, const PlaneD& plane) {
  const double w = min_section_width(body);
  const double up = body.support(plane.normal) - plane.offset;
  const double down = body.support(-plane.normal) + plane.offset;
  if (up < w || down < w) {
    throw Error(ErrorCode::EmptySection, "plane misses the interior of the body by the width_min margin");
  }
}

double section_support(const ConvexBody& body, const PlaneD& plane, const VecN& v) {
  const VecN& n = plane.normal.vec();
  const double up = body.support(plane.normal) - plane.offset;
  const double down = body.support(-plane.normal) + plane.offset;
  const double w = body.support(v) + body.support(VecN(-v));
  const double lo = -w / up;
  const double hi = w / down;
  if (hi - lo > kBracketLimit * std::max(1.0, v.norm())) {
    throw Error(ErrorCode::IllConditioned, "section support bracket exceeds 1e6");
  }
  const Minimum best = golden_minimize(
      [&](double t) { return body.support(VecN(v - t * n)) + t * plane.offset; }, lo, hi, kSectionTol);
  return best.value;
}

PlanarBody section(const ConvexBody& body, const PlaneD& plane, int m) {
  if (body.dim() != 3 || plane.dim() != 3) throw Error(ErrorCode::InvalidSpec, "section expects a 3-body and a plane");
  check_section_margin(body, plane);
  const Frame2 frame = plane_frame(plane);
  std::vector<double> h(m);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
    const double th = kTwoPi * static_cast<double>(i) / m;
    h[i] = section_support(body, plane, frame.direction(th));
  });
  return PlanarBody::from_support(frame, std::move(h));
}

PlanarBody project(const ConvexBody& body, const UnitVec& u, int m) {
  if (body.dim() != 3) throw Error(ErrorCode::InvalidSpec, "project expects a 3-body");
  const Frame2 frame = plane_frame(PlaneD{u, 0.0});
  std::vector<double> h(m);
  for (int i = 0; i < m; ++i) h[i] = body.support(VecN(frame.direction(kTwoPi * i / m)));
  return PlanarBody::from_support(frame, std::move(h));
}

ConvexBody hypersection(const ConvexBody& body, const PlaneD& plane) {
  if (body.dim() != 4 || plane.dim() != 4) {
    throw Error(ErrorCode::InvalidSpec, "hypersection expects a 4-body and a hyperplane");
  }
  check_section_margin(body, plane);
  const HyperFrame frame = hyperplane_frame(plane);
  auto h = [body, plane, basis = frame.basis](const VecN& v) {
    return section_support(body, plane, VecN(basis * v));
  };
  return ConvexBody::composite(3, h, body.circumradius_bound(), 0.0);
}

ConvexBody project_body(const ConvexBody& body, const UnitVec& u) {
  if (body.dim() != 4) throw Error(ErrorCode::InvalidSpec, "project_body expects a 4-body");
  const HyperFrame frame = hyperplane_frame(PlaneD{u, 0.0});
  auto h = [body, basis = frame.basis](const VecN& v) { return body.support(VecN(basis * v)); };
  return ConvexBody::composite(3, h, body.circumradius_bound(), body.inradius_bound());
}

std::string to_csv(const PlanarBody& body) {
  std::ostringstream out;
  char b0[32], b1[32], b2[32], b3[32];
  out << "theta,h,x,y\n";
  for (int i = 0; i < body.samples(); ++i) {
    out << fmt_num(b0, sizeof b0, body.theta(i)) << ',' << fmt_num(b1, sizeof b1, body.h[i]) << ','
        << fmt_num(b2, sizeof b2, body.boundary[i].x()) << ',' << fmt_num(b3, sizeof b3, body.boundary[i].y())
        << '\n';
  }
  return out.str();
}

std::string to_svg(const PlanarBody& body, double size_px) {
  const double r = std::max(body.circumradius(), 1e-12);
  const double scale = 0.45 * size_px / r;
  const double mid = 0.5 * size_px;
  std::ostringstream out;
  char bx[32], by[32];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\"" << size_px
      << "\" viewBox=\"0 0 " << size_px << ' ' << size_px << "\">\n";
  out << "  <line x1=\"0\" y1=\"" << mid << "\" x2=\"" << size_px << "\" y2=\"" << mid
      << "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  out << "  <line x1=\"" << mid << "\" y1=\"0\" x2=\"" << mid << "\" y2=\"" << size_px
      << "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  out << "  <polygon fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < body.boundary.size(); ++i) {
    if (i) out << ' ';
    out << fmt_num(bx, sizeof bx, mid + scale * body.boundary[i].x()) << ','
        << fmt_num(by, sizeof by, mid - scale * body.boundary[i].y());
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

}  // namespace tomoscope
