#pragma once

#include <optional>
#include <vector>

#include "tomoscope/slice.hpp"

namespace tomoscope {

/// Undirected line in a planar frame: direction angle in [0, pi) and one point.
struct Line2 {
  double angle = 0.0;
  Vec2 through = Vec2::Zero();

  Vec2 direction() const { return {std::cos(angle), std::sin(angle)}; }
  /// Lift to a line in the ambient space of the frame.
  LineD to_world(const Frame2& frame) const;
};

struct SymmetryLine {
  Line2 line;
  double residual = 0.0;
};

struct CenterFit {
  Vec2 center = Vec2::Zero();
  double residual = 0.0;
};

struct SymmetryReport {
  std::vector<SymmetryLine> lines;  // sorted by angle
  std::optional<CenterFit> center;
  bool is_circle = false;
  bool starline_consistent = true;
  double tol = 0.0;
  /// Smallest line residual found by the scan, kept even when above tol.
  double best_residual = 0.0;
  double best_angle = 0.0;
};

/// Residuals are Hausdorff distances between the body and its reflection,
/// evaluated as the sup-norm of the support-function difference on the
/// sample grid. The default tolerance is the boundary mesh width
/// 2 pi circumradius / m.
double default_symmetry_tol(const PlanarBody& body);

double asymmetry_about_line(const PlanarBody& body, const Line2& line);

/// Hausdorff distance between the body and its point reflection about c.
double asymmetry_about_point(const PlanarBody& body, const Vec2& c);

/// Half the spread of the support about c: zero iff the body is a disc
/// centred at c.
double disc_residual(const PlanarBody& body, const Vec2& c);

/// Disc fit about the Steiner point (the best centre for this residual up to
/// higher harmonics).
CenterFit fit_disc(const PlanarBody& body);

SymmetryReport find_symmetry_lines(const PlanarBody& body, double tol);

struct PinnedSearch {
  std::optional<SymmetryLine> found;
  Line2 best_line;
  double best_residual = 0.0;
};

/// Best symmetry line through q; found when the residual is within tol.
/// Ties among passing angles resolve to the smallest angle.
PinnedSearch find_symmetry_line_through_point(const PlanarBody& body, const Vec2& q, double tol);

/// Best symmetry line with a prescribed direction angle.
PinnedSearch find_symmetry_line_with_direction(const PlanarBody& body, double angle, double tol);

std::optional<CenterFit> find_symmetry_center(const PlanarBody& body, double tol, CenterFit* best = nullptr);

}  // namespace tomoscope
