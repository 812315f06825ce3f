#include "tomoscope/harmonics.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "tomoscope/kernels.hpp"
#include "tomoscope/types.hpp"

namespace tomoscope {

const TrigTable& trig_table(int m) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<TrigTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[m];
  if (!slot) {
    auto t = std::make_unique<TrigTable>();
    t->m = m;
    const int order = m / 2;
    t->cos_rows.assign(order + 1, std::vector<double>(m));
    t->sin_rows.assign(order + 1, std::vector<double>(m));
    for (int k = 0; k <= order; ++k) {
      for (int i = 0; i < m; ++i) {
        // Reduce k*i mod m first so the table is exact to the last ulp.
        const double ang = kTwoPi * static_cast<double>((static_cast<long long>(k) * i) % m) / m;
        t->cos_rows[k][i] = std::cos(ang);
        t->sin_rows[k][i] = std::sin(ang);
      }
    }
    slot = std::move(t);
  }
  return *slot;
}

Harmonics analyze(std::span<const double> samples) {
  const int m = static_cast<int>(samples.size());
  const TrigTable& tab = trig_table(m);
  const int order = m / 2;
  Harmonics h;
  h.m = m;
  h.a.assign(order + 1, 0.0);
  h.b.assign(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    const bool half = (k == 0) || (m % 2 == 0 && k == order);
    const double scale = (half ? 1.0 : 2.0) / m;
    h.a[k] = scale * kernels::dot(samples, tab.cos_rows[k]);
    if (!half) h.b[k] = scale * kernels::dot(samples, tab.sin_rows[k]);
  }
  return h;
}

void synthesize(const Harmonics& h, std::span<double> out) {
  const TrigTable& tab = trig_table(h.m);
  for (double& v : out) v = h.a[0];
  for (int k = 1; k <= h.order(); ++k) {
    kernels::accumulate_harmonic(h.a[k], tab.cos_rows[k], h.b[k], tab.sin_rows[k], out);
  }
}

double Harmonics::evaluate(double theta) const {
  double s = a[0];
  const double c1 = std::cos(theta);
  const double s1 = std::sin(theta);
  double ck = 1.0;
  double sk = 0.0;
  for (int k = 1; k <= order(); ++k) {
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
    s += a[k] * ck + b[k] * sk;
  }
  return s;
}

double Harmonics::derivative(double theta) const {
  double s = 0.0;
  const double c1 = std::cos(theta);
  const double s1 = std::sin(theta);
  double ck = 1.0;
  double sk = 0.0;
  for (int k = 1; k <= order(); ++k) {
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
    s += k * (b[k] * ck - a[k] * sk);
  }
  return s;
}

}  // namespace tomoscope
