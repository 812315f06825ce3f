#include "tomoscope/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "tomoscope/error.hpp"

namespace tomoscope {

namespace {
constexpr double kInvPhi = 0.6180339887498948482;
}

Minimum golden_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  // Endpoints are candidates too: the minimum of a monotone f sits there.
  Minimum best = f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
  const double fa = f(a);
  if (fa < best.value) best = {a, fa};
  const double fb = f(b);
  if (fb < best.value) best = {b, fb};
  return best;
}

Minimum golden_maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  Minimum m = golden_minimize([&](double x) { return -f(x); }, lo, hi, tol);
  m.value = -m.value;
  return m;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

// Roberts' additive recurrence constants for 1..3 dimensions.
double frac(double x) { return x - std::floor(x); }

VecN s3_point(int k) {
  // Hopf coordinates with sin^2(eta) uniform give the uniform measure on S^3.
  constexpr double g = 1.2207440846057594754;  // root of x^4 = x + 1
  const double s = frac(0.5 + k / g);
  const double xi1 = kTwoPi * frac(0.5 + k / (g * g));
  const double xi2 = kTwoPi * frac(0.5 + k / (g * g * g));
  const double eta = std::asin(std::sqrt(s));
  return vecn({std::cos(eta) * std::cos(xi1), std::cos(eta) * std::sin(xi1), std::sin(eta) * std::cos(xi2),
               std::sin(eta) * std::sin(xi2)});
}

VecN canonical_sign(VecN v) {
  for (Eigen::Index i = v.size() - 1; i >= 0; --i) {
    if (std::abs(v[i]) > 1e-15) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace

std::vector<VecN> sphere_points(int dim, int n) {
  std::vector<VecN> pts;
  pts.reserve(n);
  if (dim == 2) {
    for (int k = 0; k < n; ++k) {
      const double t = kTwoPi * k / n;
      pts.push_back(vecn({std::cos(t), std::sin(t)}));
    }
  } else if (dim == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * k;
      pts.push_back(vecn({r * std::cos(t), r * std::sin(t), z}));
    }
  } else if (dim == 4) {
    for (int k = 0; k < n; ++k) pts.push_back(s3_point(k));
  } else {
    throw Error(ErrorCode::DegenerateInput, "sphere_points supports dimensions 2..4");
  }
  return pts;
}

std::vector<VecN> hemisphere_points(int dim, int n) {
  std::vector<VecN> pts;
  pts.reserve(n);
  if (dim == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
      const double z = 1.0 - (k + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * k;
      pts.push_back(vecn({r * std::cos(t), r * std::sin(t), z}));
    }
    return pts;
  }
  if (dim == 2) {
    for (int k = 0; k < n; ++k) {
      const double t = kPi * (k + 0.5) / n;
      pts.push_back(vecn({std::cos(t), std::sin(t)}));
    }
    return pts;
  }
  for (const VecN& v : sphere_points(dim, n)) pts.push_back(canonical_sign(v));
  return pts;
}

SphereRule sphere_rule(int n_polar, int n_azimuth) {
  std::vector<double> z;
  std::vector<double> w;
  gauss_legendre(n_polar, z, w);
  SphereRule rule;
  rule.dirs.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  rule.weights.reserve(rule.dirs.capacity());
  for (int i = 0; i < n_polar; ++i) {
    const double r = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = kTwoPi * (j + 0.5) / n_azimuth;
      rule.dirs.push_back(vecn({r * std::cos(phi), r * std::sin(phi), z[i]}));
      rule.weights.push_back(w[i] * kTwoPi / n_azimuth);
    }
  }
  return rule;
}

namespace {
thread_local bool in_parallel_region = false;
}

int worker_count() {
  static const int count = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TOMOSCOPE_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) n = std::min(n > 0 ? n : cap, cap);
    }
    return std::max(1, n);
  }();
  return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1 || in_parallel_region) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    in_parallel_region = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    in_parallel_region = false;
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tomoscope
