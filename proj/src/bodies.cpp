#include "tomoscope/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "tomoscope/error.hpp"
#include "tomoscope/kernels.hpp"
#include "tomoscope/numeric.hpp"

namespace tomoscope {

const char* body_kind_name(BodyKind kind) {
  switch (kind) {
    case BodyKind::Ball: return "Ball";
    case BodyKind::Ellipsoid: return "Ellipsoid";
    case BodyKind::Revolution: return "Revolution";
    case BodyKind::DiscHull: return "DiscHull";
    case BodyKind::Translate: return "Translate";
    case BodyKind::Composite: return "Composite";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Profiles

ProfileCurve ProfileCurve::ellipse(double equatorial, double polar) {
  if (!(equatorial > 0.0) || !(polar > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "ellipse profile needs positive semi-axes");
  }
  ProfileCurve p;
  p.t_min = -polar;
  p.t_max = polar;
  p.radius = [equatorial, polar](double t) {
    const double s = t / polar;
    return equatorial * std::sqrt(std::max(0.0, 1.0 - s * s));
  };
  return p;
}

ProfileCurve ProfileCurve::samples(std::vector<double> t, std::vector<double> r) {
  if (t.size() < 2 || t.size() != r.size()) {
    throw Error(ErrorCode::InvalidSpec, "profile samples need >= 2 matching (t, r) pairs");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw Error(ErrorCode::InvalidSpec, "profile heights must increase");
  }
  ProfileCurve p;
  p.t_min = t.front();
  p.t_max = t.back();
  p.radius = [t = std::move(t), r = std::move(r)](double x) {
    if (x <= t.front()) return r.front();
    if (x >= t.back()) return r.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
    return (1.0 - w) * r[j - 1] + w * r[j];
  };
  return p;
}

void ProfileCurve::validate() const {
  if (!radius) throw Error(ErrorCode::InvalidSpec, "profile has no radius function");
  if (!(t_max > t_min)) throw Error(ErrorCode::InvalidSpec, "profile has an empty height range");
  constexpr int n = 1000;
  const double dt = (t_max - t_min) / (n - 1);
  std::vector<double> r(n);
  double r_max = 0.0;
  for (int i = 0; i < n; ++i) {
    r[i] = radius(t_min + i * dt);
    if (!(r[i] >= 0.0) || !std::isfinite(r[i])) throw Error(ErrorCode::InvalidSpec, "profile radius must be >= 0");
    r_max = std::max(r_max, r[i]);
  }
  if (!(r_max > 0.0)) throw Error(ErrorCode::InvalidSpec, "profile encloses no area");
  for (int i = 1; i + 1 < n; ++i) {
    if (r[i - 1] - 2.0 * r[i] + r[i + 1] > 1e-9 * r_max) {
      throw Error(ErrorCode::InvalidSpec, "profile radius is not concave");
    }
  }
}

// ---------------------------------------------------------------------------
// Generic fallbacks

namespace {

VecN lex_min_point_of_disc(const VecN& center, const VecN& normal, double radius) {
  const int d = static_cast<int>(center.size());
  for (int i = 0; i < d; ++i) {
    VecN e = basis_vector(d, i);
    e -= normal.dot(e) * normal;
    const double n = e.norm();
    if (n > 1e-12) return center - radius * e / n;
  }
  return center;
}

bool lex_less(const VecN& a, const VecN& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-13) return true;
    if (a[i] > b[i] + 1e-13) return false;
  }
  return false;
}

VecN tangent_basis_vector(const VecN& u, int j) {
  // j-th vector of an orthonormal basis of u-perp, deterministic.
  const int d = static_cast<int>(u.size());
  MatN basis(d, d - 1);
  int found = 0;
  for (int i = 0; i < d && found < d - 1; ++i) {
    VecN v = basis_vector(d, i);
    v -= u.dot(v) * u;
    for (int k = 0; k < found; ++k) v -= basis.col(k).dot(v) * basis.col(k);
    const double n = v.norm();
    if (n > 1e-6) basis.col(found++) = v / n;
  }
  return basis.col(j);
}

}  // namespace

VecN refine_on_sphere(const std::function<double(const VecN&)>& f, const VecN& u0, double step0,
                      double step_min) {
  VecN u = u0.normalized();
  double best = f(u);
  const int d = static_cast<int>(u.size());
  double step = step0;
  while (step > step_min) {
    bool improved = false;
    for (int j = 0; j < d - 1; ++j) {
      const VecN t = tangent_basis_vector(u, j);
      for (double sgn : {1.0, -1.0}) {
        const VecN cand = (u + sgn * step * t).normalized();
        const double v = f(cand);
        if (v > best) {
          best = v;
          u = cand;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return u;
}

VecN ConvexBody::Model::boundary_point(const VecN& u) const {
  // x = grad h(u); central differences on the homogeneous extension.
  const int d = dim();
  constexpr double delta = 1e-6;
  VecN g(d);
  for (int i = 0; i < d; ++i) {
    VecN up = u;
    VecN dn = u;
    up[i] += delta;
    dn[i] -= delta;
    g[i] = (support(up) - support(dn)) / (2.0 * delta);
  }
  return g;
}

namespace {

double margin_at(const ConvexBody::Model& m, const VecN& y, const VecN& v) { return m.support(v) - v.dot(y); }

double generic_margin(const ConvexBody::Model& m, const VecN& y) {
  const int d = m.dim();
  static thread_local std::vector<VecN> grid3 = sphere_points(3, 2000);
  static thread_local std::vector<VecN> grid4 = sphere_points(4, 4000);
  const std::vector<VecN>& grid = d == 3 ? grid3 : grid4;
  std::vector<std::pair<double, std::size_t>> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = {margin_at(m, y, grid[i]), i};
  const std::size_t keep = std::min<std::size_t>(4, vals.size());
  std::partial_sort(vals.begin(), vals.begin() + keep, vals.end());
  double best = vals[0].first;
  for (std::size_t k = 0; k < keep; ++k) {
    const VecN v = refine_on_sphere([&](const VecN& w) { return -margin_at(m, y, w); }, grid[vals[k].second],
                                    0.05, 1e-9);
    best = std::min(best, margin_at(m, y, v));
  }
  return best;
}

}  // namespace

bool ConvexBody::Model::contains(const VecN& y) const { return generic_margin(*this, y) >= 0.0; }

ConvexBody::ConvexBody(std::shared_ptr<const Model> model) : model_(std::move(model)) {
  if (!model_) throw Error(ErrorCode::InvalidSpec, "null body model");
  if (model_->dim() != 3 && model_->dim() != 4) throw Error(ErrorCode::InvalidSpec, "bodies live in R^3 or R^4");
}

// ---------------------------------------------------------------------------
// Concrete models

namespace {

class BallModel final : public ConvexBody::Model {
 public:
  BallModel(double r, VecN c) : r_(r), c_(std::move(c)) {}
  int dim() const override { return static_cast<int>(c_.size()); }
  BodyKind kind() const override { return BodyKind::Ball; }
  double support(const VecN& x) const override { return c_.dot(x) + r_ * x.norm(); }
  double circumradius_bound() const override { return c_.norm() + r_; }
  double inradius_bound() const override { return r_; }
  VecN boundary_point(const VecN& u) const override { return c_ + r_ * u.normalized(); }
  bool contains(const VecN& y) const override { return (y - c_).norm() <= r_; }

 private:
  double r_;
  VecN c_;
};

class EllipsoidModel final : public ConvexBody::Model {
 public:
  EllipsoidModel(VecN a, VecN c, MatN rot) : a_(std::move(a)), c_(std::move(c)), rot_(std::move(rot)) {}
  int dim() const override { return static_cast<int>(c_.size()); }
  BodyKind kind() const override { return BodyKind::Ellipsoid; }
  double support(const VecN& x) const override {
    const VecN y = a_.cwiseProduct(rot_.transpose() * x);
    return c_.dot(x) + y.norm();
  }
  double circumradius_bound() const override { return c_.norm() + a_.maxCoeff(); }
  double inradius_bound() const override { return a_.minCoeff(); }
  VecN boundary_point(const VecN& u) const override {
    const VecN local = rot_.transpose() * u;
    const VecN scaled = a_.cwiseProduct(local);
    const VecN grad = a_.cwiseProduct(a_).cwiseProduct(local) / scaled.norm();
    return c_ + rot_ * grad;
  }
  bool contains(const VecN& y) const override {
    return (rot_.transpose() * (y - c_)).cwiseQuotient(a_).norm() <= 1.0;
  }

 private:
  VecN a_;
  VecN c_;
  MatN rot_;
};

class RevolutionModel final : public ConvexBody::Model {
 public:
  static constexpr int kGrid = 4096;

  RevolutionModel(ProfileCurve profile, LineD axis) : profile_(std::move(profile)), axis_(std::move(axis)) {
    t_.resize(kGrid);
    r_.resize(kGrid);
    r_max_ = 0.0;
    const double dt = (profile_.t_max - profile_.t_min) / (kGrid - 1);
    for (int i = 0; i < kGrid; ++i) {
      t_[i] = profile_.t_min + i * dt;
      r_[i] = profile_.radius(t_[i]);
      r_max_ = std::max(r_max_, r_[i]);
    }
    dt_ = dt;
  }

  int dim() const override { return axis_.dim(); }
  BodyKind kind() const override { return BodyKind::Revolution; }

  double support(const VecN& x) const override {
    const auto [a, b] = split(x);
    return axis_.point.dot(x) + best_height(a, b).value;
  }

  double circumradius_bound() const override {
    return axis_.point.norm() + std::max(std::abs(profile_.t_min), std::abs(profile_.t_max)) + r_max_;
  }
  double inradius_bound() const override { return std::min(r_max_, 0.5 * (profile_.t_max - profile_.t_min)); }

  VecN boundary_point(const VecN& u) const override {
    const auto [a, b] = split(u);
    const VecN& d = axis_.dir.vec();
    if (b > 1e-14 * u.norm()) {
      const Minimum best = best_height(a, b);
      const VecN perp = (u - a * d) / b;
      return axis_.point + best.x * d + profile_.radius(best.x) * perp;
    }
    const double t_end = a > 0.0 ? profile_.t_max : profile_.t_min;
    return lex_min_point_of_disc(axis_.point + t_end * d, d, profile_.radius(t_end));
  }

  bool contains(const VecN& y) const override {
    const VecN rel = y - axis_.point;
    const double t = axis_.dir.dot(rel);
    if (t < profile_.t_min || t > profile_.t_max) return false;
    return (rel - t * axis_.dir.vec()).norm() <= profile_.radius(t);
  }

 private:
  std::pair<double, double> split(const VecN& x) const {
    const double a = axis_.dir.dot(x);
    const double b = (x - a * axis_.dir.vec()).norm();
    return {a, b};
  }

  // max over t of a t + b r(t): grid argmax, then golden refinement on the
  // neighbouring cells (the objective is concave, hence unimodal).
  Minimum best_height(double a, double b) const {
    const kernels::ArgMax g = kernels::affine_argmax(t_, r_, a, b);
    const double lo = t_[g.index > 0 ? g.index - 1 : 0];
    const double hi = t_[std::min<std::size_t>(g.index + 1, kGrid - 1)];
    Minimum m = golden_maximize([&](double t) { return a * t + b * profile_.radius(t); }, lo, hi, 1e-12 * dt_ * kGrid);
    if (g.value > m.value) m = {t_[g.index], g.value};
    return m;
  }

  ProfileCurve profile_;
  LineD axis_;
  std::vector<double> t_;
  std::vector<double> r_;
  double r_max_ = 0.0;
  double dt_ = 0.0;
};

class DiscHullModel final : public ConvexBody::Model {
 public:
  explicit DiscHullModel(std::vector<Disc> discs) : discs_(std::move(discs)) {}
  int dim() const override { return static_cast<int>(discs_.front().center.size()); }
  BodyKind kind() const override { return BodyKind::DiscHull; }

  double support(const VecN& x) const override {
    double best = -HUGE_VAL;
    for (const Disc& d : discs_) best = std::max(best, disc_support(d, x));
    return best;
  }
  double circumradius_bound() const override {
    double r = 0.0;
    for (const Disc& d : discs_) r = std::max(r, d.center.norm() + d.radius);
    return r;
  }
  double inradius_bound() const override {
    double r = HUGE_VAL;
    for (const Disc& d : discs_) r = std::min(r, d.radius);
    return r;
  }
  VecN boundary_point(const VecN& u) const override {
    const double h = support(u);
    std::optional<VecN> best;
    for (const Disc& d : discs_) {
      if (disc_support(d, u) < h - 1e-12 * (1.0 + std::abs(h))) continue;
      VecN perp = u - d.normal.dot(u) * d.normal.vec();
      const double n = perp.norm();
      const VecN cand = n > 1e-12 ? VecN(d.center + d.radius * perp / n)
                                  : lex_min_point_of_disc(d.center, d.normal.vec(), d.radius);
      if (!best || lex_less(cand, *best)) best = cand;
    }
    return *best;
  }

 private:
  static double disc_support(const Disc& d, const VecN& x) {
    return d.center.dot(x) + d.radius * (x - d.normal.dot(x) * d.normal.vec()).norm();
  }

  std::vector<Disc> discs_;
};

class TranslateModel final : public ConvexBody::Model {
 public:
  TranslateModel(ConvexBody base, VecN offset) : base_(std::move(base)), offset_(std::move(offset)) {}
  int dim() const override { return base_.dim(); }
  BodyKind kind() const override { return BodyKind::Translate; }
  double support(const VecN& x) const override { return base_.support(x) + offset_.dot(x); }
  double circumradius_bound() const override { return base_.circumradius_bound() + offset_.norm(); }
  double inradius_bound() const override { return base_.inradius_bound(); }
  VecN boundary_point(const VecN& u) const override { return base_.boundary_point(UnitVec(u)) + offset_; }
  bool contains(const VecN& y) const override { return base_.contains(y - offset_); }

 private:
  ConvexBody base_;
  VecN offset_;
};

class CompositeModel final : public ConvexBody::Model {
 public:
  CompositeModel(int dim, std::function<double(const VecN&)> h, double circumradius, double inradius)
      : dim_(dim), h_(std::move(h)), circumradius_(circumradius), inradius_(inradius) {}
  int dim() const override { return dim_; }
  BodyKind kind() const override { return BodyKind::Composite; }
  double support(const VecN& x) const override { return h_(x); }
  double circumradius_bound() const override { return circumradius_; }
  double inradius_bound() const override { return inradius_; }

 private:
  int dim_;
  std::function<double(const VecN&)> h_;
  double circumradius_;
  double inradius_;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, std::string(what) + " must be positive");
}

}  // namespace

ConvexBody ConvexBody::ball(double radius, const VecN& center) {
  require_positive(radius, "ball radius");
  return ConvexBody(std::make_shared<BallModel>(radius, center));
}

ConvexBody ConvexBody::ellipsoid(const VecN& semi_axes, const VecN& center, const MatN& orientation) {
  const int d = static_cast<int>(semi_axes.size());
  if (center.size() != d || orientation.rows() != d || orientation.cols() != d) {
    throw Error(ErrorCode::InvalidSpec, "ellipsoid dimensions disagree");
  }
  for (int i = 0; i < d; ++i) require_positive(semi_axes[i], "ellipsoid semi-axis");
  const MatN gram = orientation.transpose() * orientation;
  if ((gram - MatN::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::InvalidSpec, "ellipsoid orientation must be orthonormal");
  }
  return ConvexBody(std::make_shared<EllipsoidModel>(semi_axes, center, orientation));
}

ConvexBody ConvexBody::ellipsoid(const VecN& semi_axes) {
  const auto d = semi_axes.size();
  return ellipsoid(semi_axes, VecN::Zero(d), MatN::Identity(d, d));
}

ConvexBody ConvexBody::revolution(ProfileCurve profile, const LineD& axis) {
  profile.validate();
  return ConvexBody(std::make_shared<RevolutionModel>(std::move(profile), axis));
}

ConvexBody ConvexBody::two_disc_hull(double r1, double r2) {
  require_positive(r1, "disc radius");
  require_positive(r2, "disc radius");
  const VecN o = VecN::Zero(3);
  return disc_hull({Disc{o, UnitVec{0.0, 0.0, 1.0}, r1}, Disc{o, UnitVec{0.0, 1.0, 0.0}, r2}});
}

ConvexBody ConvexBody::disc_hull(std::vector<Disc> discs) {
  if (discs.empty()) throw Error(ErrorCode::InvalidSpec, "disc hull needs at least one disc");
  for (const Disc& d : discs) require_positive(d.radius, "disc radius");
  return ConvexBody(std::make_shared<DiscHullModel>(std::move(discs)));
}

ConvexBody ConvexBody::translate(const ConvexBody& base, const VecN& offset) {
  return ConvexBody(std::make_shared<TranslateModel>(base, offset));
}

ConvexBody ConvexBody::composite(int dim, std::function<double(const VecN&)> support, double circumradius,
                                 double inradius) {
  return ConvexBody(std::make_shared<CompositeModel>(dim, std::move(support), circumradius, inradius));
}

ConvexBody ConvexBody::perturbed(const ConvexBody& base, const UnitVec& w, double eps) {
  const VecN wv = w.vec();
  auto h = [base, wv, eps](const VecN& x) {
    const double n2 = x.squaredNorm();
    if (n2 == 0.0) return 0.0;
    const double p = x.dot(wv);
    return base.support(x) + eps * p * p * p / n2;
  };
  return composite(base.dim(), h, base.circumradius_bound() + std::abs(eps), base.inradius_bound() - std::abs(eps));
}

// ---------------------------------------------------------------------------
// Queries

double interior_margin(const ConvexBody& body, const VecN& y) {
  const int d = body.dim();
  const std::vector<VecN>& grid = [&]() -> const std::vector<VecN>& {
    static const std::vector<VecN> g3 = sphere_points(3, 2000);
    static const std::vector<VecN> g4 = sphere_points(4, 4000);
    return d == 3 ? g3 : g4;
  }();
  auto margin = [&](const VecN& v) { return body.support(v) - v.dot(y); };
  std::vector<std::pair<double, std::size_t>> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = {margin(grid[i]), i};
  const std::size_t keep = std::min<std::size_t>(4, vals.size());
  std::partial_sort(vals.begin(), vals.begin() + keep, vals.end());
  double best = vals[0].first;
  for (std::size_t k = 0; k < keep; ++k) {
    const VecN v = refine_on_sphere([&](const VecN& w) { return -margin(w); }, grid[vals[k].second], 0.05, 1e-9);
    best = std::min(best, margin(v));
  }
  return best;
}

double exit_distance(const ConvexBody& body, const VecN& x, const UnitVec& u, double tol) {
  double lo = 0.0;
  double hi = 2.0 * body.circumradius_bound() + x.norm() + 1.0;
  const double scale = hi;
  while (hi - lo > tol * scale) {
    const double mid = 0.5 * (lo + hi);
    if (body.contains(x + mid * u.vec())) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

VecN steiner_point(const ConvexBody& body) {
  if (body.dim() != 3) throw Error(ErrorCode::DegenerateInput, "steiner_point is implemented for R^3 bodies");
  static const SphereRule rule = sphere_rule(100, 100);
  std::vector<double> h(rule.dirs.size());
  parallel_for(rule.dirs.size(), [&](std::size_t i) { h[i] = body.support(rule.dirs[i]); });
  VecN s = VecN::Zero(3);
  for (std::size_t i = 0; i < rule.dirs.size(); ++i) s += rule.weights[i] * h[i] * rule.dirs[i];
  return s * (3.0 / (4.0 * kPi));
}

double central_asymmetry(const ConvexBody& body, const VecN& center, int n_dirs) {
  double worst = 0.0;
  for (const VecN& u : sphere_points(body.dim(), n_dirs)) {
    const double plus = body.support(u) - center.dot(u);
    const double minus = body.support(VecN(-u)) + center.dot(u);
    worst = std::max(worst, std::abs(plus - minus));
  }
  return worst;
}

double strict_convexity_defect(const ConvexBody& body, int n_dirs) {
  constexpr double delta = 1e-3;
  double worst = HUGE_VAL;
  for (const VecN& u : sphere_points(body.dim(), n_dirs)) {
    const VecN x = body.boundary_point(UnitVec(u));
    for (int j = 0; j < body.dim() - 1; ++j) {
      const VecN t = tangent_basis_vector(u, j);
      const VecN up = (u + delta * t).normalized();
      const double ratio = (body.boundary_point(UnitVec(up)) - x).norm() / (up - u).norm();
      worst = std::min(worst, ratio);
    }
  }
  return worst;
}

DiameterResult diameters(const ConvexBody& body, double tol, int n_dirs) {
  const std::vector<VecN> grid = sphere_points(body.dim(), n_dirs);
  std::vector<double> w(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { w[i] = body.width(UnitVec(grid[i])); });
  const double coarse_max = *std::max_element(w.begin(), w.end());

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  std::vector<std::size_t> candidates;
  for (std::size_t i : order) {
    if (w[i] < coarse_max * (1.0 - 1e-3) || candidates.size() >= 64) break;
    candidates.push_back(i);
  }

  struct Refined {
    VecN u;
    double width;
  };
  std::vector<Refined> refined(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t k) {
    auto f = [&](const VecN& v) { return body.width(UnitVec(v)); };
    const VecN u = refine_on_sphere(f, grid[candidates[k]], 0.05, 1e-10);
    refined[k] = {u, f(u)};
  });

  DiameterResult res;
  for (const Refined& r : refined) res.max_width = std::max(res.max_width, r.width);
  for (const Refined& r : refined) {
    if (r.width < res.max_width - tol) continue;
    const UnitVec u(r.u);
    Segment seg{body.boundary_point(-u), body.boundary_point(u)};
    const bool dup = std::any_of(res.segments.begin(), res.segments.end(), [&](const Segment& s) {
      const double same = std::max((s.a - seg.a).norm(), (s.b - seg.b).norm());
      const double swapped = std::max((s.a - seg.b).norm(), (s.b - seg.a).norm());
      return std::min(same, swapped) <= 10.0 * tol;
    });
    if (!dup) res.segments.push_back(seg);
  }
  res.unique = res.segments.size() == 1;
  return res;
}

}  // namespace tomoscope
