#include "tomoscope/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "tomoscope/error.hpp"
#include "tomoscope/numeric.hpp"

namespace tomoscope {

namespace {

constexpr double kCaseOneAngle = 1e-4;

VecN cross(const VecN& a, const VecN& b) {
  const Vec3 c = Vec3(a[0], a[1], a[2]).cross(Vec3(b[0], b[1], b[2]));
  return vecn({c[0], c[1], c[2]});
}

struct Sample {
  bool pass = false;
  double residual = 0.0;
  Witness witness;
};

Certification aggregate(const std::vector<Sample>& samples, double tol) {
  Certification c;
  c.tol = tol;
  c.pass = true;
  c.samples_used = static_cast<int>(samples.size());
  const Sample* worst = nullptr;
  const Sample* worst_fail = nullptr;
  for (const Sample& s : samples) {
    if (!s.pass) {
      c.pass = false;
      if (!worst_fail || s.residual > worst_fail->residual) worst_fail = &s;
    }
    if (!worst || s.residual > worst->residual) worst = &s;
  }
  if (worst) c.residual = worst->residual;
  const Sample* w = worst_fail ? worst_fail : worst;
  if (w) {
    c.witness = w->witness;
    c.witness->residual = w->residual;
  }
  return c;
}

void require_interior(const ConvexBody& body, const VecN& p) {
  if (p.size() != body.dim()) throw Error(ErrorCode::InvalidSpec, "point dimension does not match the body");
  if (!(interior_margin(body, p) > 0.0)) throw Error(ErrorCode::PointOutsideBody, "point is not interior to the body");
}

// Heights k/(n+1) across the support extent along d, kept width_min inside.
std::vector<double> heights_along(const ConvexBody& body, const UnitVec& d, int n) {
  const double w = min_section_width(body);
  const double lo = -body.support(-d) + w;
  const double hi = body.support(d) - w;
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = lo + (hi - lo) * (k + 1) / (n + 1);
  return s;
}

VecN pin_at_height(const LineD& axis, double s) {
  return axis.point + (s - axis.dir.dot(axis.point)) * axis.dir.vec();
}

void require_axis_meets_interior(const ConvexBody& body, const LineD& axis) {
  const double mid = 0.5 * (body.support(axis.dir) - body.support(-axis.dir));
  if (interior_margin(body, pin_at_height(axis, mid)) < min_section_width(body)) {
    throw Error(ErrorCode::DegenerateAxis, "axis misses the interior of the body");
  }
}

std::optional<VecN> intersect_lines(const LineD& a, const LineD& b) {
  const VecN& u = a.dir.vec();
  const VecN& v = b.dir.vec();
  const double uv = u.dot(v);
  const double den = 1.0 - uv * uv;
  if (den < 1e-24) return std::nullopt;
  const VecN w = a.point - b.point;
  const double s = (uv * v.dot(w) - u.dot(w)) / den;
  const double t = (v.dot(w) - uv * u.dot(w)) / den;
  return VecN(0.5 * (a.at(s) + b.at(t)));
}

double undirected_angle(const VecN& a, const VecN& b) {
  return std::acos(std::clamp(std::abs(a.dot(b)), 0.0, 1.0));
}

std::string fmt(const char* name, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.6g", name, v);
  return buf;
}

double resolve_tol(const ConvexBody& body, const Budgets& b) {
  return b.tol > 0.0 ? b.tol : ladder_tolerance(body);
}

Certification central_symmetry_check(const ConvexBody& body, const VecN& o, double tol) {
  const double r = central_asymmetry(body, o);
  Certification c;
  c.tol = tol;
  c.pass = r <= tol;
  c.residual = r;
  c.samples_used = 2000;
  c.witness = Witness{};
  c.witness->point = o;
  c.witness->residual = r;
  c.witness->note = "centre";
  return c;
}

bool record(Decision& d, const std::string& name, const Certification& c) {
  d.checks.emplace_back(name, c);
  if (!c.pass && d.failed_check.empty()) d.failed_check = name;
  return c.pass;
}

}  // namespace

double ladder_tolerance(const ConvexBody& body, const ToleranceLadder& ladder) {
  return body.kind() == BodyKind::DiscHull ? ladder.sampled : ladder.analytic;
}

// ---------------------------------------------------------------------------
// Certifications

Certification is_axis_of_symmetry(const ConvexBody& body, const LineD& axis, int n_planes, double tol, int m) {
  require_axis_meets_interior(body, axis);
  const std::vector<double> s = heights_along(body, axis.dir, n_planes);
  std::vector<Sample> out(s.size());
  parallel_for(s.size(), [&](std::size_t k) {
    const PlaneD plane{axis.dir, s[k]};
    const VecN pin = pin_at_height(axis, s[k]);
    const PlanarBody P = section(body, plane, m);
    const double r = asymmetry_about_point(P, P.frame.to_local(pin));
    out[k] = Sample{r <= tol, r, Witness{plane, std::nullopt, pin, std::nullopt, r, "section centre"}};
  });
  return aggregate(out, tol);
}

Certification larman_point_test(const ConvexBody& body, const VecN& p, int n_planes, double tol, int m) {
  require_interior(body, p);
  const std::vector<VecN> normals = hemisphere_points(3, n_planes);
  std::vector<Sample> out(normals.size());
  parallel_for(normals.size(), [&](std::size_t k) {
    const PlaneD plane = PlaneD::through(p, UnitVec(normals[k]));
    const PlanarBody P = section(body, plane, m);
    const SymmetryReport rep = find_symmetry_lines(P, tol);
    double r = rep.best_residual;
    bool pass = !rep.lines.empty();
    if (rep.is_circle) {
      pass = true;
      r = rep.center->residual;
    } else if (pass) {
      r = rep.lines.front().residual;
      for (const SymmetryLine& l : rep.lines) r = std::min(r, l.residual);
    }
    out[k] = Sample{pass, r, Witness{plane, std::nullopt, p, std::nullopt, r, "best symmetry line"}};
  });
  return aggregate(out, tol);
}

Certification revolution_point_test(const ConvexBody& body, const VecN& p, int n_planes, double tol, int m) {
  require_interior(body, p);
  const std::vector<VecN> normals = hemisphere_points(3, n_planes);
  std::vector<Sample> out(normals.size());
  parallel_for(normals.size(), [&](std::size_t k) {
    const PlaneD plane = PlaneD::through(p, UnitVec(normals[k]));
    const PlanarBody P = section(body, plane, m);
    const PinnedSearch s = find_symmetry_line_through_point(P, P.frame.to_local(p), tol);
    Witness w{plane, std::nullopt, p, s.best_line.to_world(P.frame), s.best_residual, "best line through p"};
    out[k] = Sample{s.found.has_value(), s.best_residual, w};
  });
  return aggregate(out, tol);
}

Certification certify_body_of_revolution(const ConvexBody& body, const LineD& axis, int n_planes, double tol,
                                         int m) {
  require_axis_meets_interior(body, axis);
  const std::vector<double> s = heights_along(body, axis.dir, n_planes);
  std::vector<Sample> out(s.size());
  parallel_for(s.size(), [&](std::size_t k) {
    const PlaneD plane{axis.dir, s[k]};
    const VecN pin = pin_at_height(axis, s[k]);
    const PlanarBody P = section(body, plane, m);
    const CenterFit fit = fit_disc(P);
    const double offset = (fit.center - P.frame.to_local(pin)).norm();
    const double r = fit.residual + offset;
    out[k] = Sample{r <= tol, r,
                    Witness{plane, std::nullopt, pin, std::nullopt, r,
                            fmt("disc_spread", fit.residual) + " " + fmt("centre_offset", offset)}};
  });
  return aggregate(out, tol);
}

Certification certify_sphere(const ConvexBody& body, double tol, int n_samples) {
  const VecN c = steiner_point(body);
  const std::vector<VecN> dirs = sphere_points(3, n_samples);
  std::vector<double> r(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) { r[i] = (body.boundary_point(UnitVec(dirs[i])) - c).norm(); });
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  const double mid = 0.5 * (*lo + *hi);
  Certification cert;
  cert.tol = tol;
  cert.residual = 0.5 * (*hi - *lo);
  cert.pass = cert.residual <= tol;
  cert.samples_used = static_cast<int>(dirs.size());
  const std::size_t worst = static_cast<std::size_t>(
      std::abs(*hi - mid) >= std::abs(*lo - mid) ? hi - r.begin() : lo - r.begin());
  cert.witness = Witness{};
  cert.witness->direction = dirs[worst];
  cert.witness->point = c;
  cert.witness->residual = cert.residual;
  cert.witness->note = fmt("mid_radius", mid);
  return cert;
}

LineD estimate_revolution_axis(const ConvexBody& body) {
  const VecN s = steiner_point(body);
  static const SphereRule rule = sphere_rule(48, 48);
  std::vector<double> g(rule.dirs.size());
  parallel_for(rule.dirs.size(), [&](std::size_t i) { g[i] = body.support(rule.dirs[i]) - s.dot(rule.dirs[i]); });
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
    const Vec3 u(rule.dirs[i][0], rule.dirs[i][1], rule.dirs[i][2]);
    M += rule.weights[i] * g[i] * g[i] * u * u.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(M);
  const Eigen::Vector3d lam = eig.eigenvalues();
  const int pick = (lam[1] - lam[0]) > (lam[2] - lam[1]) ? 0 : 2;
  Vec3 v = eig.eigenvectors().col(pick);
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  if (v[big] < 0.0) v = -v;
  return LineD{s, UnitVec{v[0], v[1], v[2]}};
}

// ---------------------------------------------------------------------------
// Loci

PlaneFit fit_plane(const std::vector<VecN>& points) {
  if (points.size() < 3) throw Error(ErrorCode::DegenerateInput, "plane fit needs at least 3 points");
  Vec3 c = Vec3::Zero();
  for (const VecN& x : points) c += Vec3(x[0], x[1], x[2]);
  c /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const VecN& x : points) {
    const Vec3 d = Vec3(x[0], x[1], x[2]) - c;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Vec3 n = eig.eigenvectors().col(0);
  Eigen::Index big = 0;
  n.cwiseAbs().maxCoeff(&big);
  if (n[big] < 0.0) n = -n;
  PlaneFit fit{PlaneD{UnitVec{n[0], n[1], n[2]}, n.dot(c)}, 0.0};
  for (const VecN& x : points) fit.residual = std::max(fit.residual, std::abs(fit.plane.signed_distance(x)));
  return fit;
}

MidpointLocus midpoint_locus(const ConvexBody& body, const VecN& x, int n_dirs, int samples_per_circle) {
  if (body.dim() != 3) throw Error(ErrorCode::InvalidSpec, "midpoint_locus expects a 3-body");
  require_interior(body, x);
  const double scale = body.circumradius_bound() + 1.0;
  const double zero_tol = 1e-10 * scale;
  const VecN e1 = basis_vector(3, 0), e2 = basis_vector(3, 1), e3 = basis_vector(3, 2);

  struct Circle {
    std::vector<VecN> pts;
    double max_g = 0.0;
  };
  std::vector<Circle> circles(static_cast<std::size_t>(n_dirs));
  parallel_for(circles.size(), [&](std::size_t i) {
    const double psi = kPi * static_cast<double>(i) / n_dirs;
    const VecN w = std::cos(psi) * e1 + std::sin(psi) * e2;
    auto dir = [&](double s) { return UnitVec(VecN(std::cos(s) * e3 + std::sin(s) * w)); };
    auto g = [&](double s) {
      const UnitVec u = dir(s);
      return exit_distance(body, x, u) - exit_distance(body, x, -u);
    };
    auto emit = [&](double s) {
      const UnitVec u = dir(s);
      circles[i].pts.push_back(x + exit_distance(body, x, u) * u.vec());
      circles[i].pts.push_back(x - exit_distance(body, x, -u) * u.vec());
    };
    const int n = samples_per_circle;
    std::vector<double> gs(n + 1);
    for (int k = 0; k <= n; ++k) gs[k] = g(kPi * k / n);
    for (double v : gs) circles[i].max_g = std::max(circles[i].max_g, std::abs(v));
    for (int k = 0; k < n; ++k) {
      const double s0 = kPi * k / n;
      if (std::abs(gs[k]) <= zero_tol) {
        emit(s0);
        continue;
      }
      if (std::abs(gs[k + 1]) <= zero_tol || gs[k] * gs[k + 1] > 0.0) continue;
      double lo = s0, hi = kPi * (k + 1) / n, glo = gs[k];
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      emit(0.5 * (lo + hi));
    }
  });

  MidpointLocus loc;
  loc.anchor = x;
  double max_g = 0.0;
  for (const Circle& c : circles) {
    max_g = std::max(max_g, c.max_g);
    for (const VecN& pt : c.pts) {
      const bool dup = std::any_of(loc.points.begin(), loc.points.end(),
                                   [&](const VecN& q) { return (q - pt).norm() <= 1e-6; });
      if (!dup) loc.points.push_back(pt);
    }
  }
  loc.whole_boundary = max_g <= 1e-8 * scale;
  if (!loc.whole_boundary && loc.points.size() >= 3) {
    loc.best_plane = fit_plane(loc.points);
    loc.planarity_residual = loc.best_plane->residual;
  }
  return loc;
}

ShadowBoundary shadow_boundary(const ConvexBody& body, const UnitVec& u, int m) {
  if (body.dim() != 3) throw Error(ErrorCode::InvalidSpec, "shadow_boundary expects a 3-body");
  const Frame2 frame = plane_frame(PlaneD{u, 0.0});
  std::vector<VecN> pts(static_cast<std::size_t>(m));
  parallel_for(pts.size(), [&](std::size_t i) {
    pts[i] = body.boundary_point(UnitVec(frame.direction(kTwoPi * static_cast<double>(i) / m)));
  });
  const VecN c = steiner_point(body);
  double off = 0.0;
  for (const VecN& x : pts) off = std::max(off, std::abs(u.dot(x - c)));
  return ShadowBoundary{u, pts, fit_plane(pts), off};
}

// ---------------------------------------------------------------------------
// Pencil frame and constrained survey

PencilFrame PencilFrame::make(const VecN& o, const VecN& p, const LineD& L) {
  if (o.size() != 3 || p.size() != 3 || L.dim() != 3) throw Error(ErrorCode::InvalidSpec, "pencil frame lives in R^3");
  const double scale = 1.0 + o.norm() + p.norm();
  if (L.distance(o) <= 1e-9 * scale) throw Error(ErrorCode::ConfigurationInvalid, "the centre lies on L");
  if (L.distance(p) <= 1e-9 * scale) throw Error(ErrorCode::ConfigurationInvalid, "p lies on L");
  const UnitVec e3(cross(L.dir.vec(), VecN(o - L.point)));
  if (std::abs(e3.dot(p - o)) > 1e-7 * scale) {
    throw Error(ErrorCode::ConfigurationInvalid, "p is not in the plane spanned by the centre and L");
  }
  const double r = (o - p).norm();
  const UnitVec e1 = r > 1e-9 * scale ? UnitVec(VecN(o - p)) : UnitVec(cross(e3.vec(), L.dir.vec()));
  const UnitVec e2(cross(e3.vec(), e1.vec()));
  const LineD lambda{p, e1};
  return PencilFrame{o, p, L, e1, e2, e3, lambda, reflect_line_about_line(lambda, L)};
}

VecN PencilFrame::line_direction(double theta) const {
  return std::cos(theta) * e1.vec() + std::sin(theta) * e2.vec();
}

PlaneD PencilFrame::plane(double theta, double phi) const {
  const VecN side = cross(e3.vec(), line_direction(theta));
  return PlaneD::through(p, UnitVec(VecN(std::cos(phi) * e3.vec() + std::sin(phi) * side)));
}

VecN PencilFrame::transverse(double theta, double phi) const {
  const VecN side = cross(e3.vec(), line_direction(theta));
  return -std::sin(phi) * e3.vec() + std::cos(phi) * side;
}

std::optional<VecN> PencilFrame::q(double theta) const {
  return intersect_lines(LineD{p, UnitVec(line_direction(theta))}, L);
}

std::optional<VecN> PencilFrame::m(double theta) const {
  return intersect_lines(LineD{p, UnitVec(line_direction(theta))}, M);
}

PinnedLine pinned_symmetry_line(const ConvexBody& body, const PlaneD& plane, const LineD& L, double tol, int m) {
  const PlanarBody P = section(body, plane, m);
  const Frame2& fr = P.frame;
  const double nd = plane.normal.dot(L.dir.vec());
  const double scale = 1.0 + body.circumradius_bound();
  PinnedLine out;
  auto finish = [&](const PinnedSearch& s) {
    out.best = s.best_line.to_world(fr);
    out.residual = s.best_residual;
    if (s.found) out.line = s.found->line.to_world(fr);
  };

  if (std::abs(nd) < 1e-9) {
    const double beta = std::atan2(L.dir.dot(fr.e2.vec()), L.dir.dot(fr.e1.vec()));
    if (std::abs(plane.signed_distance(L.point)) > 1e-9 * scale) {
      out.pin_direction = L.dir.vec();
      finish(find_symmetry_line_with_direction(P, beta, tol));
      return out;
    }
    // L lies in the plane: any symmetry line not parallel to L meets it.
    const SymmetryReport rep = find_symmetry_lines(P, tol);
    if (rep.is_circle) {
      const Line2 l{angle_mod_pi(beta + 0.5 * kPi), rep.center->center};
      out.best = l.to_world(fr);
      out.residual = rep.center->residual;
      out.line = out.best;
      return out;
    }
    out.residual = HUGE_VAL;
    for (const SymmetryLine& sl : rep.lines) {
      if (angle_distance_mod_pi(sl.line.angle, angle_mod_pi(beta)) <= kCaseOneAngle) continue;
      if (sl.residual < out.residual) {
        out.residual = sl.residual;
        out.best = sl.line.to_world(fr);
        out.line = out.best;
      }
    }
    if (!out.line) {
      const Line2 l{rep.best_angle, P.steiner_point()};
      out.best = l.to_world(fr);
      out.residual = rep.best_residual;
    }
    return out;
  }

  const double t = (plane.offset - plane.normal.dot(L.point)) / nd;
  const VecN q = L.at(t);
  out.pin_point = q;
  finish(find_symmetry_line_through_point(P, fr.to_local(q), tol));
  return out;
}

std::vector<double> theta_grid(int n) {
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = -0.5 * kPi + kPi * (j + 1) / n;
  return t;
}

std::vector<double> phi_grid(int n) {
  std::vector<double> p(n);
  for (int k = 0; k < n; ++k) p[k] = kPi * k / n;
  return p;
}

std::vector<PlaneSymmetryRecord> constrained_symmetry_survey(const ConvexBody& body, const VecN& p, const LineD& L,
                                                             const std::vector<double>& thetas,
                                                             const std::vector<double>& phis, double tol, int m,
                                                             bool with_e_lines) {
  require_interior(body, p);
  const PencilFrame frame = PencilFrame::make(steiner_point(body), p, L);

  struct Job {
    double theta, phi;
  };
  std::vector<Job> jobs;
  bool omega_done = false;
  for (double th : thetas) {
    for (double ph : phis) {
      if (std::abs(ph) < 1e-15) {
        if (omega_done) continue;
        omega_done = true;
      }
      jobs.push_back({th, ph});
    }
  }

  std::vector<PlaneSymmetryRecord> recs(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    PlaneSymmetryRecord& r = recs[i];
    r.theta = jobs[i].theta;
    r.phi = jobs[i].phi;
    r.plane = frame.plane(r.theta, r.phi);
    try {
      const PinnedLine d = pinned_symmetry_line(body, r.plane, L, tol, m);
      r.q_pin = d.pin_point;
      r.found = d.line;
      r.d_line = d.line;
      r.residual = d.residual;
      if (with_e_lines) {
        const VecN& n = r.plane.normal.vec();
        const UnitVec rn(VecN(2.0 * frame.e1.dot(n) * frame.e1.vec() - n));
        const PinnedLine e = pinned_symmetry_line(body, PlaneD::through(p, rn), L, tol, m);
        if (e.line) r.e_line = reflect_line_about_line(frame.lambda, *e.line);
      }
    } catch (const Error& err) {
      if (err.code() != ErrorCode::EmptySection) throw;
      r.skipped = true;
    }
  });
  return recs;
}

Certification summarize_survey(const std::vector<PlaneSymmetryRecord>& records, double tol) {
  std::vector<Sample> s;
  for (const PlaneSymmetryRecord& r : records) {
    if (r.skipped) continue;
    Witness w{r.plane, std::nullopt, r.q_pin, r.found, r.residual, fmt("theta", r.theta) + " " + fmt("phi", r.phi)};
    s.push_back(Sample{r.found.has_value(), r.residual, w});
  }
  return aggregate(s, tol);
}

FGSample fg_sample(const ConvexBody& body, const PencilFrame& frame, double theta, double phi, double tol, int m) {
  FGSample s;
  s.phi = phi;
  s.z = VecN::Zero(3);
  const PlaneD plane = frame.plane(theta, phi);
  const PinnedLine d = pinned_symmetry_line(body, plane, frame.L, tol, m);
  const VecN& n = plane.normal.vec();
  const UnitVec rn(VecN(2.0 * frame.e1.dot(n) * frame.e1.vec() - n));
  const PinnedLine e = pinned_symmetry_line(body, PlaneD::through(frame.p, rn), frame.L, tol, m);
  s.d_line = d.line;
  if (e.line) s.e_line = reflect_line_about_line(frame.lambda, *e.line);
  if (!s.d_line || !s.e_line) return s;

  const VecN u = frame.line_direction(theta);
  auto near_l_theta = [&](const LineD& l) {
    return undirected_angle(l.dir.vec(), u) < kCaseOneAngle && l.distance(frame.p) < kCaseOneAngle;
  };
  s.case_one = near_l_theta(*s.d_line) && near_l_theta(*s.e_line);

  const std::optional<VecN> z = intersect_lines(*s.d_line, *s.e_line);
  if (!z) {
    // Coincident lines: their common points all lie on L(theta) in case I.
    if (s.case_one) {
      s.valid = true;
      s.z = frame.p;
    }
    return s;
  }
  s.valid = true;
  s.z = *z;
  s.f_signed = (s.z - frame.p).dot(frame.transverse(theta, phi));
  s.f = std::abs(s.f_signed);
  const std::optional<VecN> q = frame.q(theta);
  const std::optional<VecN> mm = frame.m(theta);
  if (q && mm && (*q - s.z).norm() > 1e-12 && (*mm - s.z).norm() > 1e-12) {
    const VecN a = (*q - s.z).normalized();
    const VecN b = (*mm - s.z).normalized();
    s.g = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  } else {
    s.g = undirected_angle(s.d_line->dir.vec(), s.e_line->dir.vec());
  }
  return s;
}

FGProfile fg_profile(const ConvexBody& body, const VecN& p, const LineD& L, double theta,
                     const std::vector<double>& phis, double tol, int m) {
  require_interior(body, p);
  const PencilFrame frame = PencilFrame::make(steiner_point(body), p, L);
  FGProfile prof;
  prof.theta = theta;
  prof.q_theta = frame.q(theta).value_or(VecN::Constant(3, std::nan("")));
  prof.m_theta = frame.m(theta).value_or(VecN::Constant(3, std::nan("")));
  prof.samples.resize(phis.size());
  parallel_for(phis.size(), [&](std::size_t k) { prof.samples[k] = fg_sample(body, frame, theta, phis[k], tol, m); });
  int case_one = 0;
  for (const FGSample& s : prof.samples) {
    if (!s.d_line || !s.e_line) {
      throw Error(ErrorCode::MissingLines, "a section lacks one of the two pinned symmetry lines (phi=" +
                                               std::to_string(s.phi) + ")");
    }
    case_one += s.case_one ? 1 : 0;
  }
  prof.case_one_fraction = prof.samples.empty() ? 0.0 : static_cast<double>(case_one) / prof.samples.size();
  return prof;
}

std::optional<double> locate_fg_zero(const ConvexBody& body, const VecN& p, const LineD& L, double theta, int n_phi,
                                     double tol, int m, double phi_tol) {
  require_interior(body, p);
  const PencilFrame frame = PencilFrame::make(steiner_point(body), p, L);
  std::vector<double> phis(n_phi);
  for (int k = 0; k < n_phi; ++k) phis[k] = kPi * (k + 0.5) / n_phi;
  std::vector<FGSample> s(phis.size());
  parallel_for(phis.size(), [&](std::size_t k) { s[k] = fg_sample(body, frame, theta, phis[k], tol, m); });

  std::optional<std::size_t> prev;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!s[k].valid) continue;
    if (s[k].f_signed == 0.0) return phis[k];
    if (prev && (s[*prev].f_signed > 0.0) != (s[k].f_signed > 0.0)) {
      double lo = phis[*prev], hi = phis[k];
      const bool lo_positive = s[*prev].f_signed > 0.0;
      while (hi - lo > phi_tol) {
        const double mid = 0.5 * (lo + hi);
        const FGSample sm = fg_sample(body, frame, theta, mid, tol, m);
        if (!sm.valid) break;
        if (sm.f_signed == 0.0) return mid;
        if ((sm.f_signed > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev = k;
  }
  return std::nullopt;
}

double chord_half_length(const ConvexBody& body, const VecN& p, const VecN& dir) {
  const UnitVec u(dir);
  return 0.5 * (exit_distance(body, p, u) + exit_distance(body, p, -u));
}

// ---------------------------------------------------------------------------
// Decision pipelines

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::SphereCertified: return "SphereCertified";
    case Verdict::RevolutionCertified: return "RevolutionCertified";
    case Verdict::HypothesisFailed: return "HypothesisFailed";
    case Verdict::ConclusionFailed: return "ConclusionFailed";
  }
  return "Unknown";
}

Decision theorem1_decide(const ConvexBody& body, const VecN& p, const LineD& L, const Budgets& b) {
  Decision d;
  d.tol = resolve_tol(body, b);
  d.center = steiner_point(body);
  if (!record(d, "central_symmetry", central_symmetry_check(body, d.center, d.tol))) return d;

  const PencilFrame frame = PencilFrame::make(d.center, p, L);
  const bool p_is_o = (p - d.center).norm() <= 1e-9 * (1.0 + body.circumradius_bound());
  if (!p_is_o && std::abs(frame.e1.dot(L.dir.vec())) < 1e-9) {
    throw Error(ErrorCode::ConfigurationInvalid, "the line op is perpendicular to L");
  }
  const auto recs =
      constrained_symmetry_survey(body, p, L, theta_grid(b.n_theta), phi_grid(b.n_phi), d.tol, b.m);
  if (!record(d, "pinned_symmetry_survey", summarize_survey(recs, d.tol))) return d;

  if (p_is_o) {
    d.axis = LineD{d.center, frame.e3};
    const bool ok = record(d, "revolution", certify_body_of_revolution(body, *d.axis, b.n_planes, d.tol, b.m));
    d.verdict = ok ? Verdict::RevolutionCertified : Verdict::ConclusionFailed;
  } else {
    const bool ok = record(d, "sphere", certify_sphere(body, d.tol));
    d.verdict = ok ? Verdict::SphereCertified : Verdict::ConclusionFailed;
  }
  return d;
}

Decision theorem2_decide(const ConvexBody& body, const VecN& p, const Budgets& b) {
  Decision d;
  d.tol = resolve_tol(body, b);
  d.center = steiner_point(body);
  if ((p - d.center).norm() <= 1e-9 * (1.0 + body.circumradius_bound())) {
    throw Error(ErrorCode::ConfigurationInvalid, "p coincides with the centre");
  }
  if (!record(d, "central_symmetry", central_symmetry_check(body, d.center, d.tol))) return d;
  if (!record(d, "revolution_point", revolution_point_test(body, p, b.n_planes, d.tol, b.m))) return d;
  d.axis = LineD{d.center, UnitVec(VecN(p - d.center))};
  const bool ok = record(d, "revolution", certify_body_of_revolution(body, *d.axis, b.n_planes, d.tol, b.m));
  d.verdict = ok ? Verdict::RevolutionCertified : Verdict::ConclusionFailed;
  return d;
}

Decision theorem2_corollary(const ConvexBody& body, const VecN& p, const VecN& q, const Budgets& b) {
  Decision d;
  d.tol = resolve_tol(body, b);
  d.center = steiner_point(body);
  const double eps = 1e-9 * (1.0 + body.circumradius_bound());
  if ((p - d.center).norm() <= eps || (q - d.center).norm() <= eps) {
    throw Error(ErrorCode::ConfigurationInvalid, "revolution points must differ from the centre");
  }
  if ((p - q).norm() <= eps) throw Error(ErrorCode::ConfigurationInvalid, "revolution points must be distinct");
  if (LineD{p, UnitVec(VecN(q - p))}.distance(d.center) <= eps) {
    throw Error(ErrorCode::ConfigurationInvalid, "the centre lies on L(p, q)");
  }
  if (!record(d, "central_symmetry", central_symmetry_check(body, d.center, d.tol))) return d;
  if (!record(d, "revolution_point_p", revolution_point_test(body, p, b.n_planes, d.tol, b.m))) return d;
  if (!record(d, "revolution_point_q", revolution_point_test(body, q, b.n_planes, d.tol, b.m))) return d;
  const bool ok = record(d, "sphere", certify_sphere(body, d.tol));
  d.verdict = ok ? Verdict::SphereCertified : Verdict::ConclusionFailed;
  return d;
}

Decision theorem3_decide(const ConvexBody& body, const LineD& L, const Budgets& b) {
  Decision d;
  d.tol = resolve_tol(body, b);
  d.center = steiner_point(body);
  std::vector<VecN> dirs = hemisphere_points(3, b.n_dirs);
  const HyperFrame perp = hyperplane_frame(PlaneD{L.dir, 0.0});
  dirs.push_back(L.dir.vec());
  dirs.push_back(perp.basis.col(0));
  dirs.push_back(perp.basis.col(1));

  std::vector<Sample> out(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) {
    const UnitVec u(dirs[i]);
    const PlanarBody P = project(body, u, b.m);
    const Frame2& fr = P.frame;
    const double c = u.dot(L.dir.vec());
    const Vec2 anchor = fr.to_local(L.point);
    const double beta = std::atan2(L.dir.dot(fr.e2.vec()), L.dir.dot(fr.e1.vec()));
    Witness w;
    w.direction = u.vec();
    double r = 0.0;
    bool pass = false;
    if (std::abs(c) > 1.0 - 1e-12) {
      const PinnedSearch s = find_symmetry_line_through_point(P, anchor, d.tol);
      r = s.best_residual;
      pass = s.found.has_value();
      w.line = s.best_line.to_world(fr);
      w.note = "projection of L is a point";
    } else if (std::abs(c) < 1e-9) {
      const PinnedSearch s = find_symmetry_line_with_direction(P, beta, d.tol);
      r = s.best_residual;
      pass = s.found.has_value();
      w.line = s.best_line.to_world(fr);
      w.note = "line parallel to L";
    } else {
      const Line2 image{angle_mod_pi(beta), anchor};
      r = asymmetry_about_line(P, image);
      pass = r <= d.tol;
      w.line = image.to_world(fr);
      w.note = "projection of L";
    }
    out[i] = Sample{pass, r, w};
  });
  if (!record(d, "projection_symmetry", aggregate(out, d.tol))) return d;
  d.axis = L;
  const bool ok = record(d, "revolution", certify_body_of_revolution(body, L, b.n_planes, d.tol, b.m));
  d.verdict = ok ? Verdict::RevolutionCertified : Verdict::ConclusionFailed;
  return d;
}

Decision theorem45_decide(const ConvexBody& body, RevolutionMode mode, const std::optional<VecN>& p,
                          const Budgets& b) {
  if (body.dim() != 4) throw Error(ErrorCode::InvalidSpec, "theorem45 expects a 4-body");
  Decision d;
  d.tol = resolve_tol(body, b);
  d.center = VecN::Zero(4);
  const DiameterResult dia = diameters(body, 1e-6);
  if (!dia.unique) throw Error(ErrorCode::NonUniqueDiameter, "the body has no unique diameter");
  const Segment& seg = dia.segments.front();
  const LineD D{0.5 * (seg.a + seg.b), UnitVec(VecN(seg.b - seg.a))};
  d.axis = D;
  d.center = D.point;

  std::vector<Sample> out;
  if (mode == RevolutionMode::Sections) {
    if (!p) throw Error(ErrorCode::InvalidSpec, "sections mode needs a point");
    if (D.distance(*p) <= 1e-9 * (1.0 + body.circumradius_bound())) {
      throw Error(ErrorCode::ConfigurationInvalid, "p lies on the diameter");
    }
    require_interior(body, *p);
    const std::vector<VecN> normals = hemisphere_points(4, b.n_hyperplanes);
    out.resize(normals.size());
    parallel_for(normals.size(), [&](std::size_t k) {
      const PlaneD H = PlaneD::through(*p, UnitVec(normals[k]));
      const ConvexBody K3 = hypersection(body, H);
      const LineD axis = estimate_revolution_axis(K3);
      const Certification c = certify_body_of_revolution(K3, axis, b.n_revolution_planes, d.tol, b.m);
      out[k] = Sample{c.pass, c.residual, Witness{H, std::nullopt, *p, std::nullopt, c.residual, "hypersection"}};
    });
    if (!record(d, "hypersection_revolution", aggregate(out, d.tol))) return d;
  } else {
    const HyperFrame perp = hyperplane_frame(PlaneD{D.dir, 0.0});
    const std::vector<VecN> ws = hemisphere_points(3, b.n_hyperplanes);
    out.resize(ws.size());
    parallel_for(ws.size(), [&](std::size_t k) {
      const UnitVec u(VecN(perp.basis * ws[k]));
      const ConvexBody K3 = project_body(body, u);
      const HyperFrame fu = hyperplane_frame(PlaneD{u, 0.0});
      const LineD axis{steiner_point(K3), UnitVec(VecN(fu.basis.transpose() * D.dir.vec()))};
      const Certification c = certify_body_of_revolution(K3, axis, b.n_revolution_planes, d.tol, b.m);
      Witness w;
      w.direction = u.vec();
      w.residual = c.residual;
      w.note = "projection";
      out[k] = Sample{c.pass, c.residual, w};
    });
    if (!record(d, "projection_revolution", aggregate(out, d.tol))) return d;
  }

  const std::vector<double> s = heights_along(body, D.dir, b.n_revolution_planes);
  std::vector<Sample> spheres(s.size());
  parallel_for(s.size(), [&](std::size_t k) {
    const PlaneD H{D.dir, s[k]};
    const ConvexBody K3 = hypersection(body, H);
    const Certification c = certify_sphere(K3, d.tol, 2000);
    const HyperFrame fr = hyperplane_frame(H);
    const double offset = (steiner_point(K3) - fr.to_local(pin_at_height(D, s[k]))).norm();
    const double r = c.residual + offset;
    spheres[k] = Sample{r <= d.tol, r, Witness{H, std::nullopt, pin_at_height(D, s[k]), std::nullopt, r,
                                               fmt("radial_spread", c.residual) + " " + fmt("centre_offset", offset)}};
  });
  const bool ok = record(d, "orthogonal_sections_spherical", aggregate(spheres, d.tol));
  d.verdict = ok ? Verdict::RevolutionCertified : Verdict::ConclusionFailed;
  return d;
}

Decision theorem7_decide(const ConvexBody& body, const VecN& p, const LineD& L, const Budgets& b) {
  Decision d;
  d.tol = resolve_tol(body, b);
  d.center = steiner_point(body);
  const double eps = 1e-9 * (1.0 + body.circumradius_bound());
  if (L.distance(d.center) > 1e-6 * (1.0 + body.circumradius_bound())) {
    throw Error(ErrorCode::ConfigurationInvalid, "L does not pass through the centre");
  }
  if (L.distance(p) <= eps) throw Error(ErrorCode::ConfigurationInvalid, "p lies on L");
  require_interior(body, p);
  if (!record(d, "central_symmetry", central_symmetry_check(body, d.center, d.tol))) return d;
  if (!record(d, "axis_of_symmetry", is_axis_of_symmetry(body, L, b.n_planes, d.tol, b.m))) return d;

  const std::vector<VecN> normals = hemisphere_points(3, b.n_planes);
  std::vector<Sample> out(normals.size());
  parallel_for(normals.size(), [&](std::size_t k) {
    const PlaneD plane = PlaneD::through(p, UnitVec(normals[k]));
    const PinnedLine pl = pinned_symmetry_line(body, plane, L, d.tol, b.m);
    out[k] = Sample{pl.line.has_value(), pl.residual,
                    Witness{plane, std::nullopt, pl.pin_point, pl.best, pl.residual, "pinned at plane cap L"}};
  });
  if (!record(d, "pinned_symmetry", aggregate(out, d.tol))) return d;
  d.axis = L;
  const bool ok = record(d, "revolution", certify_body_of_revolution(body, L, b.n_planes, d.tol, b.m));
  d.verdict = ok ? Verdict::RevolutionCertified : Verdict::ConclusionFailed;
  return d;
}

Decision all_axes_in_plane_decide(const ConvexBody& body, const PlaneD& H, const VecN& p, int n_axes,
                                  const Budgets& b) {
  Decision d;
  d.tol = resolve_tol(body, b);
  d.center = p;
  if (std::abs(H.signed_distance(p)) > 1e-9 * (1.0 + body.circumradius_bound())) {
    throw Error(ErrorCode::ConfigurationInvalid, "p is not on H");
  }
  const Frame2 fr = plane_frame(H);
  std::vector<Sample> out;
  for (int k = 0; k < n_axes; ++k) {
    const LineD axis{p, UnitVec(fr.direction(kPi * k / n_axes))};
    const Certification c = is_axis_of_symmetry(body, axis, b.n_planes, d.tol, b.m);
    out.push_back(Sample{c.pass, c.residual, Witness{std::nullopt, axis.dir.vec(), p, axis, c.residual, "pencil axis"}});
  }
  if (!record(d, "pencil_axes", aggregate(out, d.tol))) return d;
  d.axis = LineD{p, H.normal};
  const bool ok = record(d, "revolution", certify_body_of_revolution(body, *d.axis, b.n_planes, d.tol, b.m));
  d.verdict = ok ? Verdict::RevolutionCertified : Verdict::ConclusionFailed;
  return d;
}

}  // namespace tomoscope
