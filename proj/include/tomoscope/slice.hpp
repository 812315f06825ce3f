#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tomoscope/bodies.hpp"
#include "tomoscope/geomcore.hpp"
#include "tomoscope/harmonics.hpp"

namespace tomoscope {

/// A planar convex body sampled by its support function at theta_i = 2 pi i / m
/// (measured from frame.e1 towards frame.e2, about frame.origin).
struct PlanarBody {
  Frame2 frame;
  std::vector<double> h;
  Harmonics support2;
  std::vector<Vec2> boundary;  // counterclockwise, frame coordinates

  int samples() const { return static_cast<int>(h.size()); }
  double theta(int i) const { return kTwoPi * i / samples(); }
  double support(double theta) const { return support2.evaluate(theta); }
  /// Largest distance of a boundary sample from the frame origin.
  double circumradius() const;
  /// Smallest cross product of consecutive boundary edges (>= 0 when convex).
  double convexity_defect() const;
  /// Steiner point (a1, b1) of the interpolant, in frame coordinates.
  Vec2 steiner_point() const;

  static PlanarBody from_support(const Frame2& frame, std::vector<double> h);
  /// Samples an analytic 2-D support function in the standard xy frame.
  static PlanarBody from_function(const std::function<double(double)>& h2, int m);
  static PlanarBody ellipse(double a, double b, const Vec2& center, double rotation, int m);
};

/// The frame of the xy-plane in R^3 used for free-standing planar bodies.
Frame2 standard_frame();

/// width_min for a body: 1e-4 times its circumradius bound.
double min_section_width(const ConvexBody& body);

/// Support of the section plane cap K at the in-plane direction v (any
/// length), about the foot of the plane: inf_t [h(v - t n) + t offset].
double section_support(const ConvexBody& body, const PlaneD& plane, const VecN& v);

/// Throws EmptySection when the plane misses int K by the width_min margin.
void check_section_margin(const ConvexBody& body, const PlaneD& plane);

PlanarBody section(const ConvexBody& body, const PlaneD& plane, int m = 360);
PlanarBody project(const ConvexBody& body, const UnitVec& u, int m = 360);

/// Section of a 4-body by a hyperplane, expressed in hyperplane_frame(plane).
ConvexBody hypersection(const ConvexBody& body, const PlaneD& plane);
/// Orthogonal projection of a 4-body onto u-perp, in hyperplane_frame({u, 0}).
ConvexBody project_body(const ConvexBody& body, const UnitVec& u);

/// Columns theta,h,x,y; one row per sample.
std::string to_csv(const PlanarBody& body);
std::string to_svg(const PlanarBody& body, double size_px = 400.0);

}  // namespace tomoscope
