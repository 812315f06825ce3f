#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomoscope/bodies.hpp"
#include "tomoscope/slice.hpp"
#include "tomoscope/symmetry2d.hpp"

namespace tomoscope {

// ---------------------------------------------------------------------------
// Tolerances and budgets

/// Certification thresholds: analytic bodies are held to 1e-6, sampled or
/// non-strictly-convex bodies (DiscHull) to 5e-3.
struct ToleranceLadder {
  double analytic = 1e-6;
  double sampled = 5e-3;
};

double ladder_tolerance(const ConvexBody& body, const ToleranceLadder& ladder = {});

struct Budgets {
  int m = 360;                // samples per planar section
  int n_planes = 36;          // planes per point test / certification
  int n_theta = 36;           // pencil survey grid (theta, phi)
  int n_phi = 36;
  int n_dirs = 64;            // projection directions around a line
  int n_hyperplanes = 64;     // 4-D hypersections or projections
  int n_revolution_planes = 8;  // planes per 3-D revolution check in 4-D pipelines
  double tol = 0.0;           // 0 selects the ladder value for the body
};

// ---------------------------------------------------------------------------
// Certifications

struct Witness {
  std::optional<PlaneD> plane;
  std::optional<VecN> direction;
  std::optional<VecN> point;
  std::optional<LineD> line;
  double residual = 0.0;
  std::string note;
};

struct Certification {
  bool pass = false;
  double residual = 0.0;
  std::optional<Witness> witness;  // the worst sample; always present on failure
  int samples_used = 0;
  double tol = 0.0;
};

/// Every section by planes orthogonal to L must be centrally symmetric about
/// its meeting point with L. Throws DegenerateAxis when L misses int K.
Certification is_axis_of_symmetry(const ConvexBody& body, const LineD& axis, int n_planes, double tol,
                                  int m = 360);

/// Every sampled section through p has some line of symmetry.
Certification larman_point_test(const ConvexBody& body, const VecN& p, int n_planes, double tol, int m = 360);

/// Every sampled section through p has a line of symmetry through p.
Certification revolution_point_test(const ConvexBody& body, const VecN& p, int n_planes, double tol,
                                    int m = 360);

/// Sections orthogonal to the axis must be discs centred on it; residual is
/// the disc-fit spread plus the centre offset.
Certification certify_body_of_revolution(const ConvexBody& body, const LineD& axis, int n_planes, double tol,
                                         int m = 360);

/// max |r - r_mid| over boundary radii r about the Steiner point, r_mid the
/// midrange of r (half the radial spread).
Certification certify_sphere(const ConvexBody& body, double tol, int n_samples = 10000);

/// Axis estimate for a 3-body of revolution: the distinguished eigenvector of
/// the second-moment matrix of the centred support, through the Steiner point.
LineD estimate_revolution_axis(const ConvexBody& body);

// ---------------------------------------------------------------------------
// Loci

struct PlaneFit {
  PlaneD plane{UnitVec{0.0, 0.0, 1.0}, 0.0};
  double residual = 0.0;  // max distance of the points to the plane
};

PlaneFit fit_plane(const std::vector<VecN>& points);

struct MidpointLocus {
  VecN anchor;
  std::vector<VecN> points;
  /// Every sampled chord through the anchor is bisected (t(x) is all of the
  /// boundary); the plane fit is then not meaningful.
  bool whole_boundary = false;
  std::optional<PlaneFit> best_plane;
  double planarity_residual = 0.0;
};

/// Endpoints of chords through x that x bisects, found on n_dirs great circles
/// of chord directions (meridians through the third frame axis).
MidpointLocus midpoint_locus(const ConvexBody& body, const VecN& x, int n_dirs = 90, int samples_per_circle = 360);

struct ShadowBoundary {
  UnitVec direction;
  std::vector<VecN> points;
  PlaneFit best_plane;
  /// max |x.u - c.u| over the cloud, c the Steiner point.
  double central_offset = 0.0;
};

ShadowBoundary shadow_boundary(const ConvexBody& body, const UnitVec& u, int m = 360);

// ---------------------------------------------------------------------------
// Constrained symmetry survey over the pencil of planes through p

/// Coordinates in which p is the origin, Omega (the plane of o and L) is
/// {x3 = 0} and Lambda = L(o, p) is the first axis. When p = o the first
/// axis is the direction in Omega orthogonal to L.
struct PencilFrame {
  VecN o;
  VecN p;
  LineD L;
  UnitVec e1;
  UnitVec e2;
  UnitVec e3;
  LineD lambda;  // through p along e1
  LineD M;       // reflection of L about lambda

  static PencilFrame make(const VecN& o, const VecN& p, const LineD& L);

  VecN line_direction(double theta) const;  // direction of L(theta)
  PlaneD plane(double theta, double phi) const;  // Omega(theta, phi) through p
  /// In-plane unit vector orthogonal to L(theta), continuous in phi.
  VecN transverse(double theta, double phi) const;
  std::optional<VecN> q(double theta) const;  // L(theta) cap L
  std::optional<VecN> m(double theta) const;  // L(theta) cap M
};

struct PinnedLine {
  std::optional<LineD> line;  // world coordinates, present when residual <= tol
  LineD best{VecN::Zero(3), UnitVec{1.0, 0.0, 0.0}};
  double residual = 0.0;
  std::optional<VecN> pin_point;
  std::optional<VecN> pin_direction;
};

/// Symmetry line of plane cap K meeting L: through plane cap L, or parallel to
/// L when the plane is parallel to it. When the plane contains L any symmetry
/// line not parallel to L qualifies.
PinnedLine pinned_symmetry_line(const ConvexBody& body, const PlaneD& plane, const LineD& L, double tol, int m);

struct PlaneSymmetryRecord {
  double theta = 0.0;
  double phi = 0.0;
  PlaneD plane{UnitVec{0.0, 0.0, 1.0}, 0.0};
  std::optional<VecN> q_pin;
  std::optional<LineD> found;
  double residual = 0.0;
  std::optional<LineD> d_line;
  std::optional<LineD> e_line;
  bool skipped = false;  // plane missed the interior
};

std::vector<double> theta_grid(int n);
std::vector<double> phi_grid(int n);

/// Records for Omega(theta, phi) over the grids. The plane Omega itself
/// (phi = 0) is recorded once. with_e_lines also computes the line through
/// m(theta) obtained from the reflected plane.
std::vector<PlaneSymmetryRecord> constrained_symmetry_survey(const ConvexBody& body, const VecN& p, const LineD& L,
                                                             const std::vector<double>& thetas,
                                                             const std::vector<double>& phis, double tol, int m,
                                                             bool with_e_lines = false);

Certification summarize_survey(const std::vector<PlaneSymmetryRecord>& records, double tol);

struct FGSample {
  double phi = 0.0;
  bool valid = false;     // both lines present and not parallel
  bool case_one = false;  // both lines coincide with L(theta)
  double f = 0.0;
  double f_signed = 0.0;
  double g = 0.0;
  VecN z;
  std::optional<LineD> d_line;
  std::optional<LineD> e_line;
};

struct FGProfile {
  double theta = 0.0;
  VecN q_theta;
  VecN m_theta;
  std::vector<FGSample> samples;
  double case_one_fraction = 0.0;
};

FGSample fg_sample(const ConvexBody& body, const PencilFrame& frame, double theta, double phi, double tol, int m);

/// Throws MissingLines when some sample lacks one of the two lines.
FGProfile fg_profile(const ConvexBody& body, const VecN& p, const LineD& L, double theta,
                     const std::vector<double>& phis, double tol, int m = 360);

/// phi in (0, pi) where f changes sign, by bracketing on the grid and bisection.
std::optional<double> locate_fg_zero(const ConvexBody& body, const VecN& p, const LineD& L, double theta,
                                     int n_phi, double tol, int m = 360, double phi_tol = 1e-10);

/// Half the length of the chord L(theta) cap K.
double chord_half_length(const ConvexBody& body, const VecN& p, const VecN& dir);

// ---------------------------------------------------------------------------
// Decision pipelines

enum class Verdict { SphereCertified, RevolutionCertified, HypothesisFailed, ConclusionFailed };

const char* verdict_name(Verdict v);

struct Decision {
  Verdict verdict = Verdict::HypothesisFailed;
  double tol = 0.0;
  VecN center;                              // o, the Steiner point (3-D pipelines)
  std::vector<std::pair<std::string, Certification>> checks;  // in evaluation order
  std::optional<LineD> axis;
  std::string failed_check;                 // name of the first failing check

  bool certified() const {
    return verdict == Verdict::SphereCertified || verdict == Verdict::RevolutionCertified;
  }
};

Decision theorem1_decide(const ConvexBody& body, const VecN& p, const LineD& L, const Budgets& budgets = {});
Decision theorem2_decide(const ConvexBody& body, const VecN& p, const Budgets& budgets = {});
/// Two revolution points p, q with o off L(p, q): the body must be a sphere.
Decision theorem2_corollary(const ConvexBody& body, const VecN& p, const VecN& q, const Budgets& budgets = {});
Decision theorem3_decide(const ConvexBody& body, const LineD& L, const Budgets& budgets = {});

enum class RevolutionMode { Sections, Projections };
Decision theorem45_decide(const ConvexBody& body, RevolutionMode mode, const std::optional<VecN>& p,
                          const Budgets& budgets = {});

/// L an axis of symmetry through o, p off L, and every section through p has a
/// symmetry line through its meeting point with L.
Decision theorem7_decide(const ConvexBody& body, const VecN& p, const LineD& L, const Budgets& budgets = {});

/// All lines of H through p are axes of symmetry: K is a body of revolution
/// about the normal of H through p. Samples n_axes lines of the pencil.
Decision all_axes_in_plane_decide(const ConvexBody& body, const PlaneD& H, const VecN& p, int n_axes = 8,
                                  const Budgets& budgets = {});

}  // namespace tomoscope
