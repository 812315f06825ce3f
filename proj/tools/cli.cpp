#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "body_spec.hpp"
#include "json.hpp"
#include "tomoscope/error.hpp"
#include "tomoscope/tomography.hpp"

namespace tomoscope::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kReportVersion = 1;
constexpr int kCsvVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string body, plane, point, point2, line, direction, angles, mode, config;
  std::string out = ".";
  double tol = 0.0;
  int samples = 0, planes = 0, dirs = 0, hyperplanes = 0, revolution_planes = 0, theta_grid = 0, phi_grid = 0;
  int iterations = 500;
  std::uint64_t seed = 0;
  bool json = false, svg = false, csv = false, no_timestamp = false;
};

// Numeric flags that may also come from --config, keyed by config name.
struct NumericFlag {
  const char* key;
  const char* flag;
};
constexpr NumericFlag kNumericFlags[] = {
    {"tol", "--tol"},       {"samples", "--samples"},         {"planes", "--planes"},
    {"dirs", "--dirs"},     {"hyperplanes", "--hyperplanes"}, {"revolution_planes", "--revolution-planes"},
    {"theta_grid", "--theta-grid"}, {"phi_grid", "--phi-grid"}, {"iterations", "--iterations"},
    {"seed", "--seed"},
};

// ---------------------------------------------------------------------------
// Argument parsing helpers

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(x)) throw UsageError(flag + ": '" + item + "' is not a number");
    out.push_back(x);
  }
  return out;
}

VecN parse_vec(const std::string& text, const std::string& flag, int dim) {
  const std::vector<double> x = parse_list(text, flag);
  if (static_cast<int>(x.size()) != dim) {
    throw UsageError(flag + " expects " + std::to_string(dim) + " comma-separated numbers");
  }
  VecN v(dim);
  for (int i = 0; i < dim; ++i) v[i] = x[i];
  return v;
}

PlaneD parse_plane(const std::string& text, int dim) {
  const std::vector<double> x = parse_list(text, "--plane");
  if (static_cast<int>(x.size()) != dim + 1) {
    throw UsageError("--plane expects " + std::to_string(dim + 1) + " comma-separated numbers");
  }
  VecN n(dim);
  for (int i = 0; i < dim; ++i) n[i] = x[i];
  const double len = n.norm();
  if (len < 1e-12) throw UsageError("--plane normal must be nonzero");
  return PlaneD{UnitVec(n), x[dim] / len};
}

LineD parse_line(const std::string& text, int dim) {
  const std::vector<double> x = parse_list(text, "--line");
  if (static_cast<int>(x.size()) != 2 * dim) {
    throw UsageError("--line expects " + std::to_string(2 * dim) + " comma-separated numbers");
  }
  VecN p(dim), d(dim);
  for (int i = 0; i < dim; ++i) {
    p[i] = x[i];
    d[i] = x[dim + i];
  }
  if (d.norm() < 1e-12) throw UsageError("--line direction must be nonzero");
  return LineD{p, UnitVec(d)};
}

UnitVec parse_direction(const std::string& text, int dim) {
  const VecN v = parse_vec(text, "--direction", dim);
  if (v.norm() < 1e-12) throw UsageError("--direction must be nonzero");
  return UnitVec(v);
}

// ---------------------------------------------------------------------------
// JSON encoders

json to_json(const VecN& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}
json to_json(const UnitVec& u) { return to_json(u.vec()); }
json to_json(const LineD& l) { return {{"point", to_json(l.point)}, {"direction", to_json(l.dir)}}; }
json to_json(const PlaneD& p) { return {{"normal", to_json(p.normal)}, {"offset", p.offset}}; }

json to_json(const Witness& w) {
  json j = {{"residual", w.residual}};
  if (w.plane) j["plane"] = to_json(*w.plane);
  if (w.direction) j["direction"] = to_json(*w.direction);
  if (w.point) j["point"] = to_json(*w.point);
  if (w.line) j["line"] = to_json(*w.line);
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

json to_json(const Certification& c) {
  json j = {{"pass", c.pass}, {"residual", c.residual}, {"tol", c.tol}, {"samples_used", c.samples_used}};
  if (c.witness) j["witness"] = to_json(*c.witness);
  return j;
}

json to_json(const Decision& d) {
  json checks = json::array();
  for (const auto& [name, cert] : d.checks) {
    json c = to_json(cert);
    c["name"] = name;
    checks.push_back(std::move(c));
  }
  json j = {{"verdict", verdict_name(d.verdict)}, {"certified", d.certified()}, {"tol", d.tol}, {"checks", checks}};
  if (d.center.size() > 0) j["center"] = to_json(d.center);
  if (d.axis) j["axis"] = to_json(*d.axis);
  if (!d.failed_check.empty()) j["failed_check"] = d.failed_check;
  return j;
}

json planar_json(const PlanarBody& P) {
  const auto [lo, hi] = std::minmax_element(P.h.begin(), P.h.end());
  const CenterFit disc = fit_disc(P);
  return {
      {"samples", P.samples()},
      {"frame", {{"origin", to_json(P.frame.origin)}, {"e1", to_json(P.frame.e1)}, {"e2", to_json(P.frame.e2)}}},
      {"support_min", *lo},
      {"support_max", *hi},
      {"steiner_point", to_json(P.frame.to_world(P.steiner_point()))},
      {"disc_fit", {{"center", to_json(P.frame.to_world(disc.center))}, {"residual", disc.residual}}},
      {"convexity_defect", P.convexity_defect()},
  };
}

// Farthest point from a fitted plane, as a witness.
Witness plane_fit_witness(const std::vector<VecN>& pts, const PlaneFit& fit) {
  Witness w;
  w.plane = fit.plane;
  w.residual = fit.residual;
  double worst = -1.0;
  for (const VecN& x : pts) {
    const double d = std::abs(fit.plane.signed_distance(x));
    if (d > worst) {
      worst = d;
      w.point = x;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Output

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw UsageError("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// ---------------------------------------------------------------------------
// Command context

struct Context {
  std::string command;
  Options o;
  const CLI::App* sub = nullptr;
  json inputs = json::object();
  json artifacts = json::array();
  std::optional<ConvexBody> body;

  bool given(const char* flag) const {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt && opt->count() > 0;
  }

  const ConvexBody& need_body() {
    if (!body) {
      if (o.body.empty()) throw UsageError(command + " requires --body");
      json doc;
      body = load_body_spec(o.body, &doc);
      inputs["body_file"] = o.body;
      inputs["body"] = doc;
    }
    return *body;
  }

  std::string need(const std::string& value, const char* flag) const {
    if (value.empty()) throw UsageError(command + " requires " + flag);
    return value;
  }

  VecN point(const char* flag, const std::string& text) {
    const VecN p = parse_vec(need(text, flag), flag, need_body().dim());
    inputs[std::string(flag).substr(2)] = to_json(p);
    return p;
  }
  PlaneD plane() {
    const PlaneD pl = parse_plane(need(o.plane, "--plane"), need_body().dim());
    inputs["plane"] = to_json(pl);
    return pl;
  }
  LineD line() {
    const LineD l = parse_line(need(o.line, "--line"), need_body().dim());
    inputs["line"] = to_json(l);
    return l;
  }
  UnitVec direction() {
    const UnitVec u = parse_direction(need(o.direction, "--direction"), need_body().dim());
    inputs["direction"] = to_json(u);
    return u;
  }

  double tol() {
    const double t = o.tol > 0.0 ? o.tol : ladder_tolerance(need_body());
    inputs["tol"] = t;
    return t;
  }
  int m() const { return o.samples > 0 ? o.samples : 360; }
  int n_planes() const { return o.planes > 0 ? o.planes : 36; }

  Budgets budgets() {
    Budgets b;
    if (o.samples > 0) b.m = o.samples;
    if (o.planes > 0) b.n_planes = o.planes;
    if (o.theta_grid > 0) b.n_theta = o.theta_grid;
    if (o.phi_grid > 0) b.n_phi = o.phi_grid;
    if (o.dirs > 0) b.n_dirs = o.dirs;
    if (o.hyperplanes > 0) b.n_hyperplanes = o.hyperplanes;
    if (o.revolution_planes > 0) b.n_revolution_planes = o.revolution_planes;
    b.tol = o.tol;
    inputs["budgets"] = {{"m", b.m},         {"n_planes", b.n_planes},           {"n_theta", b.n_theta},
                         {"n_phi", b.n_phi}, {"n_dirs", b.n_dirs},               {"n_hyperplanes", b.n_hyperplanes},
                         {"n_revolution_planes", b.n_revolution_planes}, {"tol", b.tol}};
    return b;
  }

  void artifact(const std::string& suffix, const std::string& content, const char* kind) {
    const fs::path path = fs::path(o.out) / (command + suffix);
    write_atomic(path, content);
    artifacts.push_back({{"kind", kind}, {"path", path.generic_string()}});
  }

  void figures(const PlanarBody& P) {
    if (o.svg) artifact(".svg", to_svg(P), "svg");
    if (o.csv) artifact(".csv", to_csv(P), "csv");
  }
};

struct Outcome {
  json result;
  std::string verdict;
  int code = kExitPass;
};

Outcome pass_fail(json result, bool pass) {
  return {std::move(result), pass ? "Pass" : "Fail", pass ? kExitPass : kExitFail};
}

Outcome from_certification(const Certification& c) { return pass_fail(to_json(c), c.pass); }

Outcome from_decision(const Decision& d) {
  return {to_json(d), verdict_name(d.verdict), d.certified() ? kExitPass : kExitFail};
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_section(Context& c) {
  const ConvexBody& K = c.need_body();
  if (K.dim() != 3) throw UsageError("section needs a 3-D body");
  const PlanarBody P = section(K, c.plane(), c.m());
  c.figures(P);
  return {planar_json(P), "Pass", kExitPass};
}

Outcome cmd_project(Context& c) {
  const ConvexBody& K = c.need_body();
  if (K.dim() != 3) throw UsageError("project needs a 3-D body");
  const PlanarBody P = project(K, c.direction(), c.m());
  c.figures(P);
  return {planar_json(P), "Pass", kExitPass};
}

Outcome cmd_symmetry(Context& c) {
  const ConvexBody& K = c.need_body();
  if (K.dim() != 3) throw UsageError("symmetry needs a 3-D body");
  if (c.o.plane.empty() == c.o.direction.empty()) throw UsageError("symmetry takes exactly one of --plane or --direction");
  const PlanarBody P = c.o.plane.empty() ? project(K, c.direction(), c.m()) : section(K, c.plane(), c.m());
  const double tol = c.tol();
  c.figures(P);
  const SymmetryReport rep = find_symmetry_lines(P, tol);

  json lines = json::array();
  for (const SymmetryLine& s : rep.lines) {
    lines.push_back({{"line", to_json(s.line.to_world(P.frame))}, {"residual", s.residual}});
  }
  json result = {{"planar", planar_json(P)},
                 {"lines", lines},
                 {"is_circle", rep.is_circle},
                 {"starline_consistent", rep.starline_consistent},
                 {"best_residual", rep.best_residual}};
  if (rep.center) {
    result["center"] = {{"point", to_json(P.frame.to_world(rep.center->center))}, {"residual", rep.center->residual}};
  }
  bool pass = rep.is_circle || !rep.lines.empty();
  Witness w;
  w.residual = rep.best_residual;
  w.line = Line2{rep.best_angle, P.steiner_point()}.to_world(P.frame);
  w.note = "best line scanned through the Steiner point";

  if (!c.o.point.empty()) {
    if (!c.o.direction.empty()) throw UsageError("--point applies to sections only");
    const VecN q = c.point("--point", c.o.point);
    const PlaneD pl = PlaneD{P.frame.normal, P.frame.normal.dot(P.frame.origin)};
    if (std::abs(pl.signed_distance(q)) > 1e-9 * (1.0 + q.norm())) throw UsageError("--point does not lie on --plane");
    const PinnedSearch ps = find_symmetry_line_through_point(P, P.frame.to_local(q), tol);
    result["pinned"] = {{"found", ps.found.has_value()},
                        {"line", to_json(ps.best_line.to_world(P.frame))},
                        {"residual", ps.best_residual}};
    pass = ps.found.has_value();
    w.residual = ps.best_residual;
    w.line = ps.best_line.to_world(P.frame);
    w.point = q;
    w.note = "best line through the given point";
  }
  if (!pass) result["witness"] = to_json(w);
  return pass_fail(std::move(result), pass);
}

Outcome cmd_starline(Context& c) {
  const std::vector<double> a = parse_list(c.need(c.o.angles, "--angles"), "--angles");
  if (a.size() != 2) throw UsageError("--angles expects two comma-separated angles in radians");
  if (c.o.iterations < 1) throw UsageError("--iterations must be positive");
  c.inputs["angles"] = a;
  c.inputs["iterations"] = c.o.iterations;
  const StarlineState s = starline_generate(a[0], a[1], c.o.iterations);
  const StarlineClass k = classify_starline_angle(a[1] - a[0]);
  json result = {{"angles", s.angles},
                 {"line_count", s.angles.size()},
                 {"closed", s.closed},
                 {"max_gap", s.max_gap},
                 {"iterations", s.iterations},
                 {"class", {{"kind", k.finite() ? "finite" : "dense"}}}};
  if (s.period) result["period"] = *s.period;
  if (k.finite()) {
    result["class"]["numerator"] = k.numerator;
    result["class"]["denominator"] = k.denominator;
  }
  return {std::move(result), "Pass", kExitPass};
}

Outcome cmd_midpoint_locus(Context& c) {
  const ConvexBody& K = c.need_body();
  const VecN x = c.point("--point", c.o.point);
  const double tol = c.tol();
  const MidpointLocus loc = midpoint_locus(K, x, c.o.dirs > 0 ? c.o.dirs : 90, c.m());
  json result = {{"points", loc.points.size()},
                 {"whole_boundary", loc.whole_boundary},
                 {"planarity_residual", loc.planarity_residual}};
  if (loc.best_plane) result["best_plane"] = to_json(loc.best_plane->plane);
  if (c.o.csv) {
    std::ostringstream s;
    s << std::setprecision(17) << "x,y,z\n";
    for (const VecN& p : loc.points) s << p[0] << ',' << p[1] << ',' << p[2] << '\n';
    c.artifact(".csv", s.str(), "csv");
  }
  const bool pass = loc.whole_boundary || (loc.best_plane && loc.planarity_residual <= tol);
  if (!pass && loc.best_plane) result["witness"] = to_json(plane_fit_witness(loc.points, *loc.best_plane));
  return pass_fail(std::move(result), pass);
}

Outcome cmd_shadow(Context& c) {
  const ConvexBody& K = c.need_body();
  const UnitVec u = c.direction();
  const double tol = c.tol();
  const ShadowBoundary sb = shadow_boundary(K, u, c.m());
  json result = {{"points", sb.points.size()},
                 {"best_plane", to_json(sb.best_plane.plane)},
                 {"planarity_residual", sb.best_plane.residual},
                 {"central_offset", sb.central_offset}};
  const bool pass = sb.best_plane.residual <= tol;
  if (!pass) result["witness"] = to_json(plane_fit_witness(sb.points, sb.best_plane));
  return pass_fail(std::move(result), pass);
}

Outcome cmd_larman(Context& c) {
  const ConvexBody& K = c.need_body();
  const VecN p = c.point("--point", c.o.point);
  const double tol = c.tol();
  c.inputs["n_planes"] = c.n_planes();
  return from_certification(larman_point_test(K, p, c.n_planes(), tol, c.m()));
}

Outcome cmd_revolution_point(Context& c) {
  const ConvexBody& K = c.need_body();
  const VecN p = c.point("--point", c.o.point);
  const double tol = c.tol();
  c.inputs["n_planes"] = c.n_planes();
  return from_certification(revolution_point_test(K, p, c.n_planes(), tol, c.m()));
}

Outcome cmd_certify(Context& c) {
  const ConvexBody& K = c.need_body();
  const std::string mode = c.o.mode.empty() ? "sphere" : c.o.mode;
  c.inputs["mode"] = mode;
  const double tol = c.tol();
  if (mode == "sphere") {
    const int n = c.o.samples > 0 ? c.o.samples : 10000;
    c.inputs["samples"] = n;
    return from_certification(certify_sphere(K, tol, n));
  }
  if (mode == "revolution") {
    if (K.dim() != 3) throw UsageError("certify --mode revolution needs a 3-D body");
    const LineD axis = c.o.line.empty() ? estimate_revolution_axis(K) : c.line();
    c.inputs["n_planes"] = c.n_planes();
    Outcome out = from_certification(certify_body_of_revolution(K, axis, c.n_planes(), tol, c.m()));
    out.result["axis"] = to_json(axis);
    out.result["axis_estimated"] = c.o.line.empty();
    return out;
  }
  if (K.dim() != 3) throw UsageError("certify --mode axis needs a 3-D body");
  c.inputs["n_planes"] = c.n_planes();
  return from_certification(is_axis_of_symmetry(K, c.line(), c.n_planes(), tol, c.m()));
}

Outcome cmd_theorem1(Context& c) {
  const ConvexBody& K = c.need_body();
  const VecN p = c.point("--point", c.o.point);
  const LineD L = c.line();
  return from_decision(theorem1_decide(K, p, L, c.budgets()));
}

Outcome cmd_theorem2(Context& c) {
  const ConvexBody& K = c.need_body();
  const VecN p = c.point("--point", c.o.point);
  if (c.o.point2.empty()) return from_decision(theorem2_decide(K, p, c.budgets()));
  const VecN q = c.point("--point2", c.o.point2);
  return from_decision(theorem2_corollary(K, p, q, c.budgets()));
}

Outcome cmd_theorem3(Context& c) {
  const ConvexBody& K = c.need_body();
  const LineD L = c.line();
  return from_decision(theorem3_decide(K, L, c.budgets()));
}

Outcome cmd_theorem45(Context& c) {
  const ConvexBody& K = c.need_body();
  const std::string mode = c.o.mode.empty() ? "sections" : c.o.mode;
  c.inputs["mode"] = mode;
  std::optional<VecN> p;
  if (!c.o.point.empty()) p = c.point("--point", c.o.point);
  const RevolutionMode rm = mode == "projections" ? RevolutionMode::Projections : RevolutionMode::Sections;
  return from_decision(theorem45_decide(K, rm, p, c.budgets()));
}

// ---------------------------------------------------------------------------
// Command table

enum Flag : unsigned {
  kBody = 1u << 0, kPlane = 1u << 1, kPoint = 1u << 2, kPoint2 = 1u << 3, kLine = 1u << 4,
  kDirection = 1u << 5, kAngles = 1u << 6, kMode = 1u << 7, kFigures = 1u << 8, kCsv = 1u << 9,
  kPlanes = 1u << 10, kGrids = 1u << 11, kDirs = 1u << 12, kHyper = 1u << 13, kIter = 1u << 14,
};

struct Command {
  const char* name;
  const char* help;
  unsigned flags;
  std::vector<std::string> modes;
  Outcome (*fn)(Context&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"section", "Planar section of a 3-D body", kBody | kPlane | kFigures, {}, cmd_section},
      {"project", "Orthogonal projection of a 3-D body along a direction", kBody | kDirection | kFigures, {},
       cmd_project},
      {"symmetry", "Symmetry lines of a section or projection", kBody | kPlane | kDirection | kPoint | kFigures, {},
       cmd_symmetry},
      {"starline", "Orbit of the reflection recurrence on two lines", kAngles | kIter, {}, cmd_starline},
      {"midpoint-locus", "Endpoints of chords bisected by a point, and their plane fit",
       kBody | kPoint | kDirs | kCsv, {}, cmd_midpoint_locus},
      {"shadow", "Shadow boundary along a direction, and its plane fit", kBody | kDirection, {}, cmd_shadow},
      {"larman", "Every section through the point has a symmetry line", kBody | kPoint | kPlanes, {}, cmd_larman},
      {"revolution-point", "Every section through the point has a symmetry line through it",
       kBody | kPoint | kPlanes, {}, cmd_revolution_point},
      {"certify", "Certify a sphere, a body of revolution, or an axis of symmetry", kBody | kLine | kMode | kPlanes,
       {"sphere", "revolution", "axis"}, cmd_certify},
      {"theorem1", "Pinned-line hypothesis through p relative to L", kBody | kPoint | kLine | kPlanes | kGrids, {},
       cmd_theorem1},
      {"theorem2", "Revolution point p (or two, with --point2)", kBody | kPoint | kPoint2 | kPlanes, {},
       cmd_theorem2},
      {"theorem3", "Projections with symmetry lines relative to L", kBody | kLine | kPlanes | kDirs, {},
       cmd_theorem3},
      {"theorem45", "Hypersections or projections of a 4-D body", kBody | kPoint | kMode | kPlanes | kHyper,
       {"sections", "projections"}, cmd_theorem45},
  };
  return table;
}

void add_options(CLI::App* sub, const Command& cmd, Options& o) {
  const unsigned f = cmd.flags;
  if (f & kBody) sub->add_option("--body", o.body, "Body spec JSON file")->type_name("FILE");
  if (f & kPlane) sub->add_option("--plane", o.plane, "Plane \"nx,ny,nz,offset\"")->type_name("LIST");
  if (f & kPoint) sub->add_option("--point", o.point, "Point \"x,y,z\"")->type_name("LIST");
  if (f & kPoint2) sub->add_option("--point2", o.point2, "Second revolution point")->type_name("LIST");
  if (f & kLine) sub->add_option("--line", o.line, "Line \"px,py,pz,dx,dy,dz\"")->type_name("LIST");
  if (f & kDirection) sub->add_option("--direction", o.direction, "Direction \"ux,uy,uz\"")->type_name("LIST");
  if (f & kAngles) sub->add_option("--angles", o.angles, "Two line angles \"t1,t2\" in radians")->type_name("LIST");
  if (f & kIter) sub->add_option("--iterations", o.iterations, "Recurrence steps (default 500)");
  if (f & kMode) sub->add_option("--mode", o.mode, "Mode")->check(CLI::IsMember(cmd.modes));
  if (f & kPlanes) sub->add_option("--planes", o.planes, "Sampled planes per test (default 36)");
  if (f & kGrids) {
    sub->add_option("--theta-grid", o.theta_grid, "Survey theta samples (default 36)");
    sub->add_option("--phi-grid", o.phi_grid, "Survey phi samples (default 36)");
  }
  if (f & kDirs) sub->add_option("--dirs", o.dirs, "Direction samples");
  if (f & kHyper) {
    sub->add_option("--hyperplanes", o.hyperplanes, "Sampled hyperplanes or directions (default 64)");
    sub->add_option("--revolution-planes", o.revolution_planes, "Planes per 3-D revolution check (default 8)");
  }
  if (f & kFigures) sub->add_flag("--svg", o.svg, "Write <out>/<command>.svg");
  if (f & (kFigures | kCsv)) sub->add_flag("--csv", o.csv, "Write <out>/<command>.csv");

  sub->add_option("--tol", o.tol, "Tolerance (default: the ladder value for the body)");
  sub->add_option("--samples", o.samples, "Samples per planar section (default 360)");
  sub->add_option("--seed", o.seed, "Seed recorded in the report");
  sub->add_option("--out", o.out, "Output directory for --json/--svg/--csv")->type_name("DIR");
  sub->add_option("--config", o.config, "JSON file with defaults for numeric flags")->type_name("FILE");
  sub->add_flag("--json", o.json, "Also write the report to <out>/<command>.json");
  sub->add_flag("--no-timestamp", o.no_timestamp, "Omit timestamp and wall clock from the report");
}

// Fills numeric flags the user did not pass from the config file.
void apply_config(Context& c) {
  if (c.o.config.empty()) return;
  std::ifstream in(c.o.config, std::ios::binary);
  if (!in) throw UsageError("cannot read config '" + c.o.config + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error&) {
    throw UsageError("config '" + c.o.config + "' is not valid JSON");
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const NumericFlag* nf = nullptr;
    for (const NumericFlag& f : kNumericFlags) {
      if (key == f.key) nf = &f;
    }
    if (!nf) throw UsageError("unknown config key '" + key + "'");
    if (!value.is_number()) throw UsageError("config key '" + key + "' must be a number");
    if (c.given(nf->flag)) continue;
    if (key == "tol") c.o.tol = value.get<double>();
    else if (key == "seed") c.o.seed = value.get<std::uint64_t>();
    else {
      if (!value.is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
      const int v = value.get<int>();
      if (key == "samples") c.o.samples = v;
      else if (key == "planes") c.o.planes = v;
      else if (key == "dirs") c.o.dirs = v;
      else if (key == "hyperplanes") c.o.hyperplanes = v;
      else if (key == "revolution_planes") c.o.revolution_planes = v;
      else if (key == "theta_grid") c.o.theta_grid = v;
      else if (key == "phi_grid") c.o.phi_grid = v;
      else if (key == "iterations") c.o.iterations = v;
    }
  }
}

void validate(const Options& o) {
  if (o.tol < 0.0 || !std::isfinite(o.tol)) throw UsageError("--tol must be a nonnegative number");
  for (int v : {o.samples, o.planes, o.dirs, o.hyperplanes, o.revolution_planes, o.theta_grid, o.phi_grid}) {
    if (v < 0) throw UsageError("sample counts must be positive");
  }
  if (o.samples != 0 && o.samples < 8) throw UsageError("--samples must be at least 8");
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  CLI::App app{"Support-function tomography of convex bodies", "tomoscope"};
  app.require_subcommand(1);
  app.fallthrough(false);
  std::map<const CLI::App*, const Command*> by_app;
  for (const Command& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_options(sub, cmd, ctx.o);
    by_app[sub] = &cmd;
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "tomoscope: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const Command& cmd = *by_app.at(sub);
  ctx.command = cmd.name;
  ctx.sub = sub;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    apply_config(ctx);
    validate(ctx.o);
    ctx.inputs["argv"] = args;
    ctx.inputs["seed"] = ctx.o.seed;
    Outcome res = cmd.fn(ctx);

    json report = {{"tool", "tomoscope"},
                   {"report_version", kReportVersion},
                   {"csv_version", kCsvVersion},
                   {"command", ctx.command},
                   {"inputs", ctx.inputs},
                   {"tolerance_ladder", {{"analytic", ToleranceLadder{}.analytic}, {"sampled", ToleranceLadder{}.sampled}}},
                   {"result", res.result},
                   {"verdict", res.verdict},
                   {"exit_code", res.code}};
    if (ctx.o.json) {
      const fs::path path = fs::path(ctx.o.out) / (ctx.command + ".json");
      ctx.artifacts.push_back({{"kind", "json"}, {"path", path.generic_string()}});
    }
    report["artifacts"] = ctx.artifacts;
    if (!ctx.o.no_timestamp) {
      report["timestamp"] = utc_timestamp();
      report["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    const std::string text = report.dump(2) + "\n";
    if (ctx.o.json) write_atomic(fs::path(ctx.o.out) / (ctx.command + ".json"), text);
    out << text;
    return res.code;
  } catch (const UsageError& e) {
    err << "tomoscope: " << one_line(e.what()) << '\n';
  } catch (const Error& e) {
    err << "tomoscope: " << one_line(e.what()) << '\n';
  } catch (const json::exception& e) {
    err << "tomoscope: " << one_line(e.what()) << '\n';
  } catch (const fs::filesystem_error& e) {
    err << "tomoscope: " << one_line(e.what()) << '\n';
  }
  return kExitUsage;
}

}  // namespace tomoscope::cli
