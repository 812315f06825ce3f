#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tomoscope/harmonics.hpp"
#include "tomoscope/kernels.hpp"
#include "tomoscope/numeric.hpp"

using namespace tomoscope;
namespace k = tomoscope::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

bool have_avx2() { return k::avx2::compiled() && k::isa_supported(k::Isa::Avx2); }

// Lengths that cover empty input, partial vectors and several full lanes.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 360, 361, 720, 4096, 4099};

}  // namespace

TEST(KernelsScalar, DotMatchesNaiveLoop) {
  std::mt19937_64 rng(1);
  for (std::size_t n : kLengths) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    long double ref = 0.0L;
    for (std::size_t i = 0; i < n; ++i) ref += static_cast<long double>(a[i]) * b[i];
    EXPECT_NEAR(k::base::dot(a.data(), b.data(), n), static_cast<double>(ref), 1e-12 * (1.0 + n));
  }
}

TEST(KernelsScalar, AffineArgmaxPrefersFirstTie) {
  const std::vector<double> t{0.0, 1.0, 1.0, 0.5};
  const std::vector<double> r{0.0, 0.0, 0.0, 0.0};
  const k::ArgMax m = k::base::affine_argmax(t.data(), r.data(), t.size(), 2.0, 1.0);
  EXPECT_EQ(m.index, 1u);
  EXPECT_EQ(m.value, 2.0);
}

TEST(KernelsAvx2, EquivalentToScalar) {
  if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
  std::mt19937_64 rng(2);
  for (std::size_t n : kLengths) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n), c = random_vec(rng, n), s = random_vec(rng, n);
    EXPECT_NEAR(k::avx2::dot(a.data(), b.data(), n), k::base::dot(a.data(), b.data(), n), 1e-12 * (1.0 + n)) << n;
    EXPECT_EQ(k::avx2::max_abs_diff(a.data(), b.data(), n), k::base::max_abs_diff(a.data(), b.data(), n)) << n;

    std::vector<double> o1 = random_vec(rng, n), o2 = o1;
    k::base::accumulate_harmonic(0.7, c.data(), -1.3, s.data(), o1.data(), n);
    k::avx2::accumulate_harmonic(0.7, c.data(), -1.3, s.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(o1[i], o2[i], 1e-14) << n;

    if (n == 0) continue;
    const k::ArgMax m1 = k::base::affine_argmax(a.data(), b.data(), n, 0.3, -0.8);
    const k::ArgMax m2 = k::avx2::affine_argmax(a.data(), b.data(), n, 0.3, -0.8);
    EXPECT_EQ(m1.index, m2.index) << n;
    EXPECT_NEAR(m1.value, m2.value, 1e-14) << n;
  }
}

TEST(KernelsAvx2, ArgmaxTieBreakMatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
  std::vector<double> t(37, 1.0), r(37, 0.0);
  t[5] = 2.0;
  t[21] = 2.0;
  const k::ArgMax m = k::avx2::affine_argmax(t.data(), r.data(), t.size(), 1.0, 0.0);
  EXPECT_EQ(m.index, 5u);
}

TEST(KernelsDispatch, ForcedIsaAgrees) {
  std::mt19937_64 rng(3);
  const auto a = random_vec(rng, 1000), b = random_vec(rng, 1000);
  const k::Isa original = k::active_isa();
  k::force_isa(k::Isa::Scalar);
  EXPECT_EQ(k::active_isa(), k::Isa::Scalar);
  const double ds = k::dot(a, b);
  if (have_avx2()) {
    k::force_isa(k::Isa::Avx2);
    EXPECT_NEAR(k::dot(a, b), ds, 1e-10);
  }
  k::force_isa(original);
  EXPECT_STREQ(k::isa_name(k::Isa::Scalar), "scalar");
}

TEST(Harmonics, RoundTripAndDerivative) {
  for (int m : {8, 9, 360, 361, 720}) {
    std::vector<double> f(m);
    for (int i = 0; i < m; ++i) {
      const double t = kTwoPi * i / m;
      f[i] = 1.5 + 0.3 * std::cos(t) - 0.2 * std::sin(2 * t) + 0.05 * std::cos(3 * t);
    }
    const Harmonics h = analyze(f);
    EXPECT_NEAR(h.a[0], 1.5, 1e-13);
    EXPECT_NEAR(h.a[1], 0.3, 1e-13);
    EXPECT_NEAR(h.b[2], -0.2, 1e-13);
    std::vector<double> g(m);
    synthesize(h, g);
    for (int i = 0; i < m; ++i) EXPECT_NEAR(g[i], f[i], 1e-13);
    const double t = 0.37;
    EXPECT_NEAR(h.evaluate(t), 1.5 + 0.3 * std::cos(t) - 0.2 * std::sin(2 * t) + 0.05 * std::cos(3 * t), 1e-13);
    EXPECT_NEAR(h.derivative(t), -0.3 * std::sin(t) - 0.4 * std::cos(2 * t) - 0.15 * std::sin(3 * t), 1e-12);
  }
}

TEST(Harmonics, ScalarAndSimdSynthesisAgree) {
  std::mt19937_64 rng(4);
  const auto f = random_vec(rng, 361);
  const Harmonics h = analyze(f);
  const k::Isa original = k::active_isa();
  std::vector<double> g1(361), g2(361);
  k::force_isa(k::Isa::Scalar);
  synthesize(h, g1);
  if (have_avx2()) k::force_isa(k::Isa::Avx2);
  synthesize(h, g2);
  k::force_isa(original);
  for (int i = 0; i < 361; ++i) EXPECT_NEAR(g1[i], g2[i], 1e-12);
}

TEST(Numeric, GoldenSectionFindsMinimum) {
  const Minimum m = golden_minimize([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, -2.0, 5.0, 1e-10);
  EXPECT_NEAR(m.x, 0.3, 1e-7);
  EXPECT_NEAR(m.value, 1.0, 1e-15);
  const Minimum M = golden_maximize([](double x) { return std::sin(x); }, 0.0, 3.0, 1e-10);
  EXPECT_NEAR(M.x, kPi / 2.0, 1e-7);
}

TEST(Numeric, GaussLegendreIntegratesPolynomials) {
  std::vector<double> x, w;
  gauss_legendre(10, x, w);
  double s0 = 0.0, s18 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s18 += w[i] * std::pow(x[i], 18);
  }
  EXPECT_NEAR(s0, 2.0, 1e-14);
  EXPECT_NEAR(s18, 2.0 / 19.0, 1e-14);
}

TEST(Numeric, SphereRuleWeightsAndMoments) {
  const SphereRule r = sphere_rule(24, 24);
  double area = 0.0, zz = 0.0;
  for (std::size_t i = 0; i < r.dirs.size(); ++i) {
    area += r.weights[i];
    zz += r.weights[i] * r.dirs[i][2] * r.dirs[i][2];
  }
  EXPECT_NEAR(area, 4.0 * kPi, 1e-12);
  EXPECT_NEAR(zz, 4.0 * kPi / 3.0, 1e-12);
}

TEST(Numeric, PointSetsAreUnitAndCanonical) {
  for (int dim : {3, 4}) {
    const auto s = sphere_points(dim, 500);
    ASSERT_EQ(s.size(), 500u);
    for (const VecN& v : s) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    const auto h = hemisphere_points(dim, 200);
    ASSERT_EQ(h.size(), 200u);
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = i + 1; j < h.size(); ++j) EXPECT_GT((h[i] + h[j]).norm(), 1e-9);
    }
  }
}

TEST(Numeric, ParallelForVisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_GE(worker_count(), 1);
}
