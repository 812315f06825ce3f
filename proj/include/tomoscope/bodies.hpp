#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tomoscope/geomcore.hpp"
#include "tomoscope/types.hpp"

namespace tomoscope {

enum class BodyKind { Ball, Ellipsoid, Revolution, DiscHull, Translate, Composite };

const char* body_kind_name(BodyKind kind);

/// Radius of a body of revolution as a function of height along its axis.
/// The region under the curve must be convex (radius concave in t).
struct ProfileCurve {
  std::function<double(double)> radius;
  double t_min = 0.0;
  double t_max = 0.0;

  /// Meridian ellipse: radius(t) = equatorial * sqrt(1 - (t / polar)^2).
  static ProfileCurve ellipse(double equatorial, double polar);
  /// Piecewise-linear interpolation of (t, r) samples, t strictly increasing.
  static ProfileCurve samples(std::vector<double> t, std::vector<double> r);

  /// Throws InvalidSpec on an empty range, negative radius, or a concavity
  /// violation on a 1000-point grid.
  void validate() const;
};

struct Disc {
  VecN center;
  UnitVec normal;
  double radius = 0.0;
};

struct Segment {
  VecN a;
  VecN b;
  double length() const { return (a - b).norm(); }
};

/// A convex body in R^3 or R^4 represented by its support function.
/// Immutable and cheap to copy; safe to evaluate from several threads.
class ConvexBody {
 public:
  class Model {
   public:
    virtual ~Model() = default;
    virtual int dim() const = 0;
    virtual BodyKind kind() const = 0;
    /// Positively homogeneous extension of h_K to all of R^d.
    virtual double support(const VecN& x) const = 0;
    virtual double circumradius_bound() const = 0;
    virtual double inradius_bound() const = 0;
    /// argmax over K of x . u; the default differentiates the support.
    virtual VecN boundary_point(const VecN& u) const;
    /// Membership; the default minimizes the support margin over directions.
    virtual bool contains(const VecN& y) const;
  };

  explicit ConvexBody(std::shared_ptr<const Model> model);

  int dim() const { return model_->dim(); }
  BodyKind kind() const { return model_->kind(); }
  double support(const VecN& x) const { return model_->support(x); }
  double support(const UnitVec& u) const { return model_->support(u.vec()); }
  VecN boundary_point(const UnitVec& u) const { return model_->boundary_point(u.vec()); }
  bool contains(const VecN& y) const { return model_->contains(y); }
  double circumradius_bound() const { return model_->circumradius_bound(); }
  double inradius_bound() const { return model_->inradius_bound(); }
  double width(const UnitVec& u) const { return support(u) + support(-u); }

  static ConvexBody ball(double radius, const VecN& center);
  static ConvexBody ellipsoid(const VecN& semi_axes, const VecN& center, const MatN& orientation);
  static ConvexBody ellipsoid(const VecN& semi_axes);
  static ConvexBody revolution(ProfileCurve profile, const LineD& axis);
  /// conv of the disc of radius r1 in {z = 0} and the disc of radius r2 in
  /// {y = 0}, both centred at the origin. Not strictly convex.
  static ConvexBody two_disc_hull(double r1, double r2);
  static ConvexBody disc_hull(std::vector<Disc> discs);
  static ConvexBody translate(const ConvexBody& base, const VecN& offset);
  static ConvexBody composite(int dim, std::function<double(const VecN&)> support, double circumradius,
                              double inradius);
  /// base support plus eps * (x . w)^3 / |x|^2: a smooth body with no
  /// symmetry for generic w. Convex while eps is small against the base
  /// curvature.
  static ConvexBody perturbed(const ConvexBody& base, const UnitVec& w, double eps);

 private:
  std::shared_ptr<const Model> model_;
};

/// min over unit v of h(v) - y . v; positive iff y is interior.
double interior_margin(const ConvexBody& body, const VecN& y);

/// Largest s >= 0 with x + s u in K (x must lie in K), by bisection on membership.
double exit_distance(const ConvexBody& body, const VecN& x, const UnitVec& u, double tol = 1e-12);

/// Steiner point (3-D) from a 100 x 100 Gauss-Legendre product rule.
VecN steiner_point(const ConvexBody& body);

/// max over sampled u of |(h(u) - c.u) - (h(-u) + c.u)|; zero iff K is
/// symmetric about c (up to sampling).
double central_asymmetry(const ConvexBody& body, const VecN& center, int n_dirs = 2000);

/// Smallest ratio |x(u') - x(u)| / |u' - u| over sampled small perturbations;
/// zero when K has flat faces.
double strict_convexity_defect(const ConvexBody& body, int n_dirs = 500);

struct DiameterResult {
  std::vector<Segment> segments;
  double max_width = 0.0;
  bool unique = false;
};

/// Longest chords: maximizes the width over a 10^4 direction grid plus local
/// refinement and returns every segment within tol of the maximum.
DiameterResult diameters(const ConvexBody& body, double tol = 1e-6, int n_dirs = 10000);

/// Pattern search on the unit sphere maximizing f, started from u0.
VecN refine_on_sphere(const std::function<double(const VecN&)>& f, const VecN& u0, double step0,
                      double step_min);

}  // namespace tomoscope
