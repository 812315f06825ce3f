#include <cmath>

#include "tomoscope/kernels.hpp"

namespace tomoscope::kernels::base {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void accumulate_harmonic(double a, const double* c, double b, const double* s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a * c[i] + b * s[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

ArgMax affine_argmax(const double* t, const double* r, std::size_t n, double a, double b) {
  ArgMax best{0, -HUGE_VAL};
  for (std::size_t i = 0; i < n; ++i) {
    const double v = a * t[i] + b * r[i];
    if (v > best.value) best = {i, v};
  }
  return best;
}

}  // namespace tomoscope::kernels::base
