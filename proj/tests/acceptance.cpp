// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "support/oracles.hpp"
#include "tomoscope/error.hpp"
#include "tomoscope/numeric.hpp"
#include "tomoscope/tomography.hpp"

using namespace tomoscope;

namespace {

VecN v3(double x, double y, double z) { return vecn({x, y, z}); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += " [failed: " + what + "]";
    }
  }
  void note(const char* fmt, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, v);
    detail += ' ';
    detail += buf;
  }
};

int g_failures = 0;
std::vector<std::string> g_only;

void criterion(const char* id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  if (!g_only.empty() && std::find(g_only.begin(), g_only.end(), id) == g_only.end()) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string(" [exception: ") + e.what() + "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char timing[64];
  if (budget_s > 0.0) {
    std::snprintf(timing, sizeof timing, " runtime=%.2fs/%.0fs", secs, budget_s);
    o.require(secs < budget_s, "runtime budget");
  } else {
    std::snprintf(timing, sizeof timing, " runtime=%.2fs", secs);
  }
  if (!o.pass) ++g_failures;
  std::printf("%s %s %s:%s%s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), timing);
  std::fflush(stdout);
}

double max_residual(const Decision& d) {
  double r = 0.0;
  for (const auto& [name, c] : d.checks) r = std::max(r, c.residual);
  return r;
}

const Certification* find_check(const Decision& d, const std::string& name) {
  for (const auto& [n, c] : d.checks) {
    if (n == name) return &c;
  }
  return nullptr;
}

MatN to_matn(const oracle::Matrix3d& R) {
  MatN M(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) M(r, c) = R(r, c);
  return M;
}

// ---------------------------------------------------------------------------

Outcome a1() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int dim = i % 2 ? 4 : 3;
    VecN p(dim), d(dim), x(dim);
    for (int k = 0; k < dim; ++k) {
      p[k] = g(rng);
      d[k] = g(rng);
      x[k] = g(rng);
    }
    const LineD L{p, UnitVec(d)};
    worst = std::max(worst, (reflect_point_about_line(L, reflect_point_about_line(L, x)) - x).norm());
  }
  o.note("involution_max=%.3g", worst);
  o.require(worst <= 1e-12, "involution residual <= 1e-12");

  const StarlineState five = starline_generate(0.0, kPi / 5.0, 500);
  o.note("pi/5_lines=%.0f", static_cast<double>(five.angles.size()));
  o.require(five.closed && five.angles.size() == 5, "starline(0, pi/5) closes with 5 lines");

  const StarlineState dense = starline_generate(0.0, 1.0, 500);
  o.note("1rad_max_gap=%.4f", dense.max_gap);
  o.note("iterations=%.0f", dense.iterations);
  o.require(dense.max_gap < 0.05 && dense.iterations <= 500, "starline(0, 1) max_gap < 0.05 within 500 steps");
  return o;
}

Outcome a2() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> ax(0.5, 3.0), frac(-0.8, 0.8);
  double worst = 0.0;
  int count = 0;
  for (int i = 0; i < 50; ++i) {
    const oracle::Ellipsoid oe{oracle::Vector3d(ax(rng), ax(rng), ax(rng)), oracle::random_rotation(rng)};
    const ConvexBody e = ConvexBody::ellipsoid(v3(oe.semi.x(), oe.semi.y(), oe.semi.z()), v3(0, 0, 0), to_matn(oe.rot));
    for (int j = 0; j < 20; ++j) {
      const oracle::Vector3d n = oracle::random_unit(rng);
      const double offset = frac(rng) * oe.support(n);
      const PlanarBody P = section(e, PlaneD{UnitVec{n.x(), n.y(), n.z()}, offset}, 720);
      std::vector<oracle::Vector3d> curve;
      for (const Vec2& y : P.boundary) {
        const VecN w = P.frame.to_world(y);
        curve.emplace_back(w[0], w[1], w[2]);
      }
      worst = std::max(worst, oracle::hausdorff_closed_curves(curve, oracle::polytope_section(oe, n, offset, 30000)));
      ++count;
    }
  }
  o.note("sections=%.0f", count);
  o.note("hausdorff_max=%.3g", worst);
  o.require(worst <= 1e-3, "Hausdorff <= 1e-3");
  return o;
}

ConvexBody rev_z() {
  return ConvexBody::revolution(ProfileCurve::ellipse(1.0, 2.0), LineD{v3(0, 0, 0), UnitVec{0.0, 0.0, 1.0}});
}

Outcome a3() {
  Outcome o;
  Budgets b;
  b.n_planes = 36;
  const Decision d = theorem2_decide(rev_z(), v3(0, 0, 0.3), b);
  o.detail += std::string(" verdict=") + verdict_name(d.verdict);
  o.require(d.verdict == Verdict::RevolutionCertified, "RevolutionCertified");
  o.require(d.axis.has_value(), "axis reported");
  if (d.axis) {
    const double tilt = 1.0 - std::abs(d.axis->dir[2]);
    o.note("axis_tilt=%.3g", tilt);
    o.note("axis_offset=%.3g", d.axis->distance(v3(0, 0, 0)));
    o.require(tilt <= 1e-9 && d.axis->distance(v3(0, 0, 0)) <= 1e-6, "axis is the z-axis");
  }
  const Certification* rp = find_check(d, "revolution_point");
  o.require(rp && rp->samples_used == 36, "36 planes");
  o.note("worst_residual=%.3g", max_residual(d));
  o.require(max_residual(d) <= 1e-6, "worst residual <= 1e-6");
  return o;
}

Outcome a4() {
  Outcome o;
  const LineD L{v3(0, 0.9, 0), UnitVec{1.0, 0.0, 0.0}};
  const Decision ball = theorem1_decide(ConvexBody::ball(1.0, v3(0, 0, 0)), v3(0.3, 0, 0), L);
  o.detail += std::string(" ball=") + verdict_name(ball.verdict);
  o.require(ball.verdict == Verdict::SphereCertified, "ball SphereCertified");
  const Certification* sphere = find_check(ball, "sphere");
  o.require(sphere != nullptr, "sphere check present");
  if (sphere) {
    o.note("radial_spread=%.3g", sphere->residual);
    o.require(sphere->residual <= 1e-6, "radial spread <= 1e-6");
  }

  const Decision ell = theorem1_decide(ConvexBody::ellipsoid(v3(1, 2, 3)), v3(0.3, 0, 0), L);
  o.detail += std::string(" ellipsoid=") + verdict_name(ell.verdict);
  o.require(ell.verdict == Verdict::HypothesisFailed, "ellipsoid HypothesisFailed");
  const Certification* failed = find_check(ell, ell.failed_check);
  const bool has_plane = failed && failed->witness && failed->witness->plane;
  o.require(has_plane, "witness plane");
  if (has_plane) {
    o.note("witness_residual=%.3g", failed->witness->residual);
    o.require(failed->witness->residual > 1e-2, "witness pinned residual > 1e-2");
  }
  return o;
}

Outcome a5() {
  Outcome o;
  const MidpointLocus loc = midpoint_locus(rev_z(), v3(0, 0, 0.3));
  o.note("planarity=%.3g", loc.planarity_residual);
  o.require(loc.best_plane.has_value() && loc.planarity_residual <= 1e-6, "planarity residual <= 1e-6");
  if (loc.best_plane) {
    const double angle = std::acos(std::min(1.0, std::abs(loc.best_plane->plane.normal[2])));
    o.note("normal_angle=%.3g", angle);
    o.require(angle <= 1e-4, "normal within 1e-4 rad of the axis");
  }
  return o;
}

Outcome a6() {
  Outcome o;
  const ConvexBody ball = ConvexBody::ball(1.0, v3(0, 0, 0));
  const double r = 0.3;
  const VecN p = v3(r, 0, 0);
  const LineD L{v3(0, 0.9, 0), UnitVec{1.0, 0.0, 0.0}};
  const PencilFrame f = PencilFrame::make(v3(0, 0, 0), p, L);
  double zero_err = 0.0, disc = 0.0, chord = 0.0;
  int located = 0;
  for (double th : {-1.3, -0.9, -0.5, -0.1, 0.2, 0.6, 1.0, 1.4}) {
    const std::optional<double> z = locate_fg_zero(ball, p, L, th, 16, 1e-6);
    if (!z) continue;
    ++located;
    zero_err = std::max(zero_err, std::abs(*z - kPi / 2.0));
    const PlanarBody K = section(ball, f.plane(th, *z), 360);
    disc = std::max(disc, fit_disc(K).residual);
    const double half = chord_half_length(ball, p, f.line_direction(th));
    chord = std::max(chord, std::abs(half - std::sqrt(1.0 - r * r * std::sin(th) * std::sin(th))));
  }
  o.note("zeros=%.0f", located);
  o.note("zero_err=%.3g", zero_err);
  o.note("disc_residual=%.3g", disc);
  o.note("chord_err=%.3g", chord);
  o.require(located == 8, "zero located for 8 theta");
  o.require(zero_err <= 1e-3, "zero at pi/2 +- 1e-3");
  o.require(disc <= 1e-6, "K(theta, phi) is a disc at 1e-6");
  o.require(chord <= 1e-8, "chord half-length within 1e-8");
  return o;
}

Outcome a7() {
  Outcome o;
  const ConvexBody h = ConvexBody::two_disc_hull(1.0, 1.0);
  const Certification lp = larman_point_test(h, v3(0, 0, 0), 200, 5e-3, 512);
  o.note("larman_residual=%.3g", lp.residual);
  o.require(lp.pass && lp.samples_used == 200, "origin is a Larman point at 5e-3");
  int failed = 0;
  double least = HUGE_VAL;
  for (const VecN& u : hemisphere_points(3, 16)) {
    const Certification c = certify_body_of_revolution(h, LineD{v3(0, 0, 0), UnitVec(u)}, 36, 5e-3, 512);
    if (!c.pass) ++failed;
    least = std::min(least, c.residual);
  }
  o.note("axes_failed=%.0f/16", failed);
  o.note("least_axis_residual=%.3g", least);
  o.require(failed == 16, "revolution fails for all 16 axes");
  return o;
}

Outcome a8() {
  Outcome o;
  const ConvexBody e4 = ConvexBody::ellipsoid(vecn({2, 1, 1, 1}));
  const DiameterResult dr = diameters(e4);
  o.require(dr.unique && dr.segments.size() == 1, "unique diameter");
  if (!dr.segments.empty()) {
    const Segment& s = dr.segments.front();
    const VecN a = vecn({2, 0, 0, 0});
    const double err = std::min((s.a - a).norm() + (s.b + a).norm(), (s.a + a).norm() + (s.b - a).norm());
    o.note("diameter_endpoint_err=%.3g", err);
    o.require(err <= 1e-4, "diameter at (+-2, 0, 0, 0)");
  }
  Budgets b;
  b.n_hyperplanes = 64;
  const Decision sec = theorem45_decide(e4, RevolutionMode::Sections, vecn({0, 0.3, 0, 0}), b);
  o.detail += std::string(" sections=") + verdict_name(sec.verdict);
  o.require(sec.verdict == Verdict::RevolutionCertified, "sections RevolutionCertified");
  const Certification* hs = find_check(sec, "hypersection_revolution");
  o.require(hs && hs->samples_used == 64, "64 hypersections");
  if (hs) {
    o.note("hypersection_residual=%.3g", hs->residual);
    o.require(hs->residual <= 1e-5, "hypersection residual <= 1e-5");
  }
  const Decision proj = theorem45_decide(e4, RevolutionMode::Projections, std::nullopt, b);
  o.detail += std::string(" projections=") + verdict_name(proj.verdict);
  o.require(proj.verdict == sec.verdict, "projections agree");
  if (sec.axis && proj.axis) {
    o.require(std::abs(sec.axis->dir.dot(proj.axis->dir.vec())) >= 1.0 - 1e-9, "same axis");
  }
  return o;
}

Outcome a9() {
  Outcome o;
  int runs = 0, certified = 0;
  std::string which;
  std::string label;
  auto tally = [&](bool c) {
    ++runs;
    if (c) {
      ++certified;
      which += " " + label + "#" + std::to_string(runs);
    }
  };
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(900 + seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ConvexBody> bodies;
    for (int i = 0; i < 2; ++i) {
      const double a = 1.0 + unit(rng), b = a + 0.2 + 0.5 * unit(rng), c = b + 0.2 + 0.5 * unit(rng);
      bodies.push_back(ConvexBody::ellipsoid(v3(a, b, c), v3(0, 0, 0), to_matn(oracle::random_rotation(rng))));
    }
    for (int i = 0; i < 2; ++i) {
      // One cubic term on a ball is still symmetric about its direction; use two.
      const oracle::Vector3d w = oracle::random_unit(rng), w2 = oracle::random_unit(rng);
      const ConvexBody base = i == 0 ? ConvexBody::perturbed(ConvexBody::ball(1.0, v3(0, 0, 0)),
                                                             UnitVec{w2.x(), w2.y(), w2.z()}, 0.04)
                                     : rev_z();
      bodies.push_back(ConvexBody::perturbed(base, UnitVec{w.x(), w.y(), w.z()}, 0.05 + 0.05 * unit(rng)));
    }
    for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
      const ConvexBody& K = bodies[bi];
      label = "seed" + std::to_string(seed) + (bi < 2 ? "/triaxial" : "/blob") + std::to_string(bi);
      const double tol = ladder_tolerance(K);
      const VecN c = steiner_point(K);
      // L at distance 0.6 from c; p in the plane of c and L, off both.
      const oracle::Vector3d ld = oracle::random_unit(rng);
      const oracle::Vector3d e = ld.cross(oracle::random_unit(rng)).normalized();
      const VecN ev = v3(e.x(), e.y(), e.z()), lv = v3(ld.x(), ld.y(), ld.z());
      const LineD L{c + 0.6 * ev, UnitVec(lv)};
      const VecN p = c + 0.15 * ev + 0.1 * lv;
      tally(certify_sphere(K, tol).pass);
      tally(certify_body_of_revolution(K, estimate_revolution_axis(K), 36, tol).pass);
      tally(theorem2_decide(K, p).certified());
      tally(theorem3_decide(K, L).certified());
      try {
        tally(theorem1_decide(K, p, L).certified());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ConfigurationInvalid) throw;
      }
    }
    label = "seed" + std::to_string(seed) + "/ellipsoid4";
    const double a = 1.0 + unit(rng);
    const ConvexBody e4 = ConvexBody::ellipsoid(vecn({a + 0.9, a + 0.5, a + 0.2, a}));
    tally(theorem45_decide(e4, RevolutionMode::Sections, vecn({0, 0.3, 0, 0})).certified());
    tally(theorem45_decide(e4, RevolutionMode::Projections, std::nullopt).certified());
  }
  o.note("runs=%.0f", runs);
  o.note("certified=%.0f", certified);
  if (!which.empty()) o.detail += " certified_runs:" + which;
  o.require(certified == 0, "zero sphere/revolution certifications");
  return o;
}

// ---------------------------------------------------------------------------
// CLI

struct Proc {
  int code = -1;
  std::string out;
};

Proc run_cli(const std::string& args) {
  const std::string cmd = std::string(TOMOSCOPE_CLI_PATH) + " " + args + " 2>/dev/null";
  Proc p;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf;
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome a10() {
  Outcome o;
  const std::string data = std::string(TOMOSCOPE_DATA_DIR) + "/bodies/";
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "tomoscope_acceptance";
  std::filesystem::remove_all(out);

  const std::vector<std::string> deterministic = {
      "section --body " + data + "ball1.json --plane 0,0,1,0.6 --svg --csv",
      "theorem2 --body " + data + "rev_z.json --point 0,0,0.3 --planes 12",
      "theorem1 --body " + data + "ball1.json --point 0.3,0,0 --line 0,0.9,0,1,0,0 --planes 8 --theta-grid 6 --phi-grid 6",
      "larman --body " + data + "two_disc.json --point 0,0,0 --planes 24 --samples 512",
      "symmetry --body " + data + "ellipsoid123.json --direction 1,1,1",
  };
  int identical = 0;
  for (const std::string& a : deterministic) {
    const std::string args = a + " --seed 42 --no-timestamp --json --out " + out.string();
    const Proc first = run_cli(args);
    const std::string file1 = slurp(out / (a.substr(0, a.find(' ')) + ".json"));
    const Proc second = run_cli(args);
    const std::string file2 = slurp(out / (a.substr(0, a.find(' ')) + ".json"));
    if (!first.out.empty() && first.out == second.out && file1 == first.out && file2 == second.out) ++identical;
  }
  o.note("identical=%.0f", identical);
  o.require(identical == static_cast<int>(deterministic.size()), "byte-identical reports");

  struct Golden {
    std::string args;
    int code;
  };
  const std::vector<Golden> golden = {
      {"section --body " + data + "ball1.json --plane 0,0,1,0.6 --svg --out " + out.string(), 0},
      {"theorem2 --body " + data + "rev_z.json --point 0,0,0.3 --planes 12", 0},
      {"certify --body " + data + "ellipsoid123.json --mode sphere", 2},
      {"revolution-point --body " + data + "ellipsoid123.json --point 0.2,0.3,0.1 --planes 8", 2},
      {"theorem45 --body " + data + "ellipsoid4.json --point 0,0.3,0,0 --hyperplanes 8 --revolution-planes 4", 0},
      {"starline --angles 0,1", 0},
      {"", 1},
      {"section --body " + data + "missing.json --plane 0,0,1,0", 1},
      {"section --body " + data + "ball1.json --plane 0,0,1", 1},
      {"section --body " + data + "ball1.json --plane 0,0,1,3", 1},
      {"certify --body " + data + "ball1.json --mode cube", 1},
  };
  int matched = 0;
  for (const Golden& g : golden) {
    const int code = run_cli(g.args + " --no-timestamp").code;
    if (code == g.code) ++matched;
  }
  o.note("exit_codes_matched=%.0f", matched);
  o.note("of=%.0f", golden.size());
  o.require(matched == static_cast<int>(golden.size()), "exit-code golden table");
  return o;
}

}  // namespace

// Optional arguments select criteria by id, e.g. "acceptance A3 A9".
int main(int argc, char** argv) {
  g_only.assign(argv + 1, argv + argc);
  criterion("A1", "reflection involution and starlines", 1.0, a1);
  criterion("A2", "section engine vs halfspace polytope oracle", 60.0, a2);
  criterion("A3", "revolution point on the ellipse-profile body", 30.0, a3);
  criterion("A4", "pinned-line pipeline on ball and ellipsoid(1,2,3)", 60.0, a4);
  criterion("A5", "midpoint locus is the plane orthogonal to the axis", 20.0, a5);
  criterion("A6", "f-zero, disc section and chord length on the ball", 30.0, a6);
  criterion("A7", "two-disc hull: Larman point but no axis of revolution", 120.0, a7);
  criterion("A8", "ellipsoid4(2,1,1,1): diameter, hypersections, projections", 180.0, a8);
  criterion("A9", "no sphere/revolution certifications on negative fixtures", 0.0, a9);
  criterion("A10", "CLI determinism and exit codes", 0.0, a10);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
