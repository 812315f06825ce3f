#include "tomoscope/symmetry2d.hpp"

#include <algorithm>
#include <cmath>

#include "tomoscope/kernels.hpp"
#include "tomoscope/numeric.hpp"

namespace tomoscope {

namespace {

constexpr int kScanAngles = 720;
constexpr int kMaxRefined = 32;
constexpr double kAngleTol = 1e-10;
constexpr double kStarlineAngleTol = 1e-5;
constexpr int kCircleCount = 64;
constexpr int kWitnessScan = 120;

// Support coefficients about c rather than the frame origin.
Harmonics about(const Harmonics& h, const Vec2& c) {
  Harmonics g = h;
  if (g.order() >= 1) {
    g.a[1] -= c.x();
    g.b[1] -= c.y();
  }
  return g;
}

// Coefficients of g(theta) - g(2 alpha - theta).
Harmonics reflection_defect(const Harmonics& g, double alpha) {
  Harmonics d;
  d.m = g.m;
  d.a.assign(g.a.size(), 0.0);
  d.b.assign(g.b.size(), 0.0);
  for (int k = 1; k <= g.order(); ++k) {
    const double c2 = std::cos(2.0 * k * alpha);
    const double s2 = std::sin(2.0 * k * alpha);
    d.a[k] = g.a[k] - (g.a[k] * c2 + g.b[k] * s2);
    d.b[k] = g.b[k] - (g.a[k] * s2 - g.b[k] * c2);
  }
  return d;
}

double rms_defect(const Harmonics& g, double alpha) {
  double sum = 0.0;
  for (int k = 1; k <= g.order(); ++k) {
    const double c2 = std::cos(2.0 * k * alpha);
    const double s2 = std::sin(2.0 * k * alpha);
    const double da = g.a[k] - (g.a[k] * c2 + g.b[k] * s2);
    const double db = g.b[k] - (g.a[k] * s2 - g.b[k] * c2);
    sum += da * da + db * db;
  }
  return std::sqrt(0.5 * sum);
}

double sup_norm(const Harmonics& d) {
  thread_local std::vector<double> buf;
  buf.assign(static_cast<std::size_t>(d.m), 0.0);
  synthesize(d, buf);
  double worst = 0.0;
  for (double v : buf) worst = std::max(worst, std::abs(v));
  return worst;
}

double sup_defect(const Harmonics& g, double alpha) { return sup_norm(reflection_defect(g, alpha)); }

double snap_angle(double a) {
  a = angle_mod_pi(a);
  if (kPi - a < 1e-9) a = 0.0;
  return a;
}

struct Candidate {
  double angle;
  double residual;
};

// Scans line angles through the centre of g and refines the local minima.
// first_passing (optional) receives the smallest grid angle whose RMS defect
// is within tol.
std::vector<Candidate> scan_lines(const Harmonics& g, double tol, int* below_tol, double* first_passing) {
  std::vector<double> r(kScanAngles);
  const double step = kPi / kScanAngles;
  for (int j = 0; j < kScanAngles; ++j) r[j] = rms_defect(g, step * j);
  int count = 0;
  for (int j = 0; j < kScanAngles; ++j) {
    if (r[j] <= tol) {
      if (count == 0 && first_passing) *first_passing = step * j;
      ++count;
    }
  }
  if (below_tol) *below_tol = count;

  std::vector<int> minima;
  for (int j = 0; j < kScanAngles; ++j) {
    const double prev = r[(j + kScanAngles - 1) % kScanAngles];
    const double next = r[(j + 1) % kScanAngles];
    if (r[j] <= prev && r[j] < next) minima.push_back(j);
  }
  std::stable_sort(minima.begin(), minima.end(), [&](int a, int b) { return r[a] < r[b]; });
  if (minima.size() > kMaxRefined) minima.resize(kMaxRefined);

  std::vector<Candidate> out;
  for (int j : minima) {
    const double lo = step * (j - 1);
    const double hi = step * (j + 1);
    Minimum best = golden_minimize([&](double a) { return rms_defect(g, a); }, lo, hi, kAngleTol);
    double sup = sup_defect(g, best.x);
    if (best.value <= tol && sup > tol) {
      const Minimum s = golden_minimize([&](double a) { return sup_defect(g, a); }, lo, hi, kAngleTol);
      if (s.value < sup) {
        best.x = s.x;
        sup = s.value;
      }
    }
    out.push_back({snap_angle(best.x), sup});
  }
  return out;
}

bool equally_spaced(const std::vector<SymmetryLine>& lines) {
  const std::size_t n = lines.size();
  if (n < 2) return true;
  const double gap = kPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lines[i].line.angle;
    const double b = i + 1 < n ? lines[i + 1].line.angle : lines[0].line.angle + kPi;
    if (std::abs((b - a) - gap) > kStarlineAngleTol) return false;
  }
  return true;
}

}  // namespace

LineD Line2::to_world(const Frame2& frame) const {
  return LineD{frame.to_world(through), UnitVec(frame.direction(angle))};
}

double default_symmetry_tol(const PlanarBody& body) {
  return kTwoPi * body.circumradius() / body.samples();
}

double asymmetry_about_line(const PlanarBody& body, const Line2& line) {
  return sup_defect(about(body.support2, line.through), line.angle);
}

double asymmetry_about_point(const PlanarBody& body, const Vec2& c) {
  Harmonics d;
  d.m = body.support2.m;
  d.a.assign(body.support2.a.size(), 0.0);
  d.b.assign(body.support2.b.size(), 0.0);
  const Harmonics g = about(body.support2, c);
  for (int k = 1; k <= g.order(); k += 2) {
    d.a[k] = 2.0 * g.a[k];
    d.b[k] = 2.0 * g.b[k];
  }
  return sup_norm(d);
}

double disc_residual(const PlanarBody& body, const Vec2& c) {
  double lo = HUGE_VAL;
  double hi = -HUGE_VAL;
  for (int i = 0; i < body.samples(); ++i) {
    const double th = body.theta(i);
    const double g = body.h[i] - c.x() * std::cos(th) - c.y() * std::sin(th);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  return 0.5 * (hi - lo);
}

CenterFit fit_disc(const PlanarBody& body) {
  const Vec2 c = body.steiner_point();
  return {c, disc_residual(body, c)};
}

SymmetryReport find_symmetry_lines(const PlanarBody& body, double tol) {
  SymmetryReport rep;
  rep.tol = tol;
  const Vec2 c = body.steiner_point();
  const Harmonics g = about(body.support2, c);

  int below = 0;
  const std::vector<Candidate> cands = scan_lines(g, tol, &below, nullptr);
  CenterFit best_center;
  rep.center = find_symmetry_center(body, tol, &best_center);

  rep.best_residual = HUGE_VAL;
  for (const Candidate& cd : cands) {
    if (cd.residual < rep.best_residual) {
      rep.best_residual = cd.residual;
      rep.best_angle = cd.angle;
    }
  }

  if (below >= kCircleCount && disc_residual(body, c) <= tol) {
    rep.is_circle = true;
    rep.center = CenterFit{c, disc_residual(body, c)};
    return rep;
  }

  for (const Candidate& cd : cands) {
    if (cd.residual > tol) continue;
    auto dup = std::find_if(rep.lines.begin(), rep.lines.end(), [&](const SymmetryLine& s) {
      return angle_distance_mod_pi(s.line.angle, cd.angle) < 1e-6;
    });
    if (dup != rep.lines.end()) {
      if (cd.residual < dup->residual) *dup = SymmetryLine{Line2{cd.angle, c}, cd.residual};
      continue;
    }
    rep.lines.push_back(SymmetryLine{Line2{cd.angle, c}, cd.residual});
  }
  std::sort(rep.lines.begin(), rep.lines.end(),
            [](const SymmetryLine& a, const SymmetryLine& b) { return a.line.angle < b.line.angle; });
  rep.starline_consistent = equally_spaced(rep.lines);
  return rep;
}

PinnedSearch find_symmetry_line_through_point(const PlanarBody& body, const Vec2& q, double tol) {
  const Harmonics g = about(body.support2, q);
  double first = -1.0;
  std::vector<Candidate> cands = scan_lines(g, tol, nullptr, &first);
  if (first >= 0.0) cands.push_back({first, sup_defect(g, first)});

  PinnedSearch out;
  out.best_residual = HUGE_VAL;
  for (const Candidate& cd : cands) {
    if (cd.residual < out.best_residual) {
      out.best_residual = cd.residual;
      out.best_line = Line2{cd.angle, q};
    }
  }
  for (const Candidate& cd : cands) {
    if (cd.residual > tol) continue;
    if (!out.found || cd.angle < out.found->line.angle) out.found = SymmetryLine{Line2{cd.angle, q}, cd.residual};
  }
  if (!out.found && !cands.empty()) {
    // The sup-norm optimum need not sit near an RMS minimum: coarse sup scan,
    // then refine.
    const double step = kPi / kWitnessScan;
    double a0 = 0.0, r0 = HUGE_VAL;
    for (int j = 0; j < kWitnessScan; ++j) {
      const double r = sup_defect(g, step * j);
      if (r < r0) {
        r0 = r;
        a0 = step * j;
      }
    }
    const Minimum s = golden_minimize([&](double a) { return sup_defect(g, a); }, a0 - step, a0 + step, 1e-7);
    if (s.value < out.best_residual) {
      out.best_residual = s.value;
      out.best_line = Line2{snap_angle(s.x), q};
    }
  }
  return out;
}

PinnedSearch find_symmetry_line_with_direction(const PlanarBody& body, double angle, double tol) {
  const double beta = snap_angle(angle);
  const int m = body.samples();
  std::vector<double> d0(static_cast<std::size_t>(m), 0.0);
  synthesize(reflection_defect(body.support2, beta), d0);
  const Vec2 n(-std::sin(beta), std::cos(beta));
  std::vector<double> e(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double th = body.theta(i);
    e[i] = 2.0 * (n.x() * std::cos(th) + n.y() * std::sin(th));
  }
  auto residual = [&](double s) {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(d0[i] - s * e[i]));
    return worst;
  };
  const double r = body.circumradius();
  const Minimum best = golden_minimize(residual, -r, r, 1e-12 * std::max(r, 1.0));

  PinnedSearch out;
  out.best_line = Line2{beta, best.x * n};
  out.best_residual = best.value;
  if (best.value <= tol) out.found = SymmetryLine{out.best_line, best.value};
  return out;
}

std::optional<CenterFit> find_symmetry_center(const PlanarBody& body, double tol, CenterFit* best) {
  const int m = body.samples();
  Harmonics odd;
  odd.m = m;
  odd.a.assign(body.support2.a.size(), 0.0);
  odd.b.assign(body.support2.b.size(), 0.0);
  for (int k = 1; k <= body.support2.order(); k += 2) {
    odd.a[k] = 2.0 * body.support2.a[k];
    odd.b[k] = 2.0 * body.support2.b[k];
  }
  std::vector<double> d(static_cast<std::size_t>(m), 0.0);
  synthesize(odd, d);
  std::vector<double> cs(m), sn(m);
  for (int i = 0; i < m; ++i) {
    cs[i] = std::cos(body.theta(i));
    sn[i] = std::sin(body.theta(i));
  }
  auto residual = [&](const Vec2& c) {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(d[i] - 2.0 * (c.x() * cs[i] + c.y() * sn[i])));
    return worst;
  };

  Vec2 c = body.steiner_point();
  double value = residual(c);
  double step = 0.1 * std::max(body.circumradius(), 1e-12);
  while (step > 1e-10) {
    bool improved = false;
    for (const Vec2& dir : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
      const Vec2 cand = c + step * dir;
      const double v = residual(cand);
      if (v < value) {
        value = v;
        c = cand;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  const CenterFit fit{c, value};
  if (best) *best = fit;
  if (value <= tol) return fit;
  return std::nullopt;
}

}  // namespace tomoscope
