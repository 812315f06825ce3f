#include "tomoscope/kernels.hpp"

#if defined(TOMOSCOPE_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace tomoscope::kernels::avx2 {

bool compiled() { return true; }

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void accumulate_harmonic(double a, const double* c, double b, const double* s, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d o = _mm256_loadu_pd(out + i);
    o = _mm256_fmadd_pd(va, _mm256_loadu_pd(c + i), o);
    o = _mm256_fmadd_pd(vb, _mm256_loadu_pd(s + i), o);
    _mm256_storeu_pd(out + i, o);
  }
  for (; i < n; ++i) out[i] += a * c[i] + b * s[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

ArgMax affine_argmax(const double* t, const double* r, std::size_t n, double a, double b) {
  ArgMax best{0, -HUGE_VAL};
  std::size_t i = 0;
  if (n >= 4) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    __m256d best_v = _mm256_set1_pd(-HUGE_VAL);
    __m256d best_i = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(t + i), _mm256_mul_pd(vb, _mm256_loadu_pd(r + i)));
      const __m256d gt = _mm256_cmp_pd(v, best_v, _CMP_GT_OQ);
      best_v = _mm256_blendv_pd(best_v, v, gt);
      best_i = _mm256_blendv_pd(best_i, idx, gt);
      idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double lv[4];
    alignas(32) double li[4];
    _mm256_store_pd(lv, best_v);
    _mm256_store_pd(li, best_i);
    for (int k = 0; k < 4; ++k) {
      const auto ki = static_cast<std::size_t>(li[k]);
      if (lv[k] > best.value || (lv[k] == best.value && ki < best.index)) best = {ki, lv[k]};
    }
  }
  for (; i < n; ++i) {
    const double v = std::fma(a, t[i], b * r[i]);
    if (v > best.value) best = {i, v};
  }
  return best;
}

}  // namespace tomoscope::kernels::avx2

#else

namespace tomoscope::kernels::avx2 {

bool compiled() { return false; }
double dot(const double* a, const double* b, std::size_t n) { return base::dot(a, b, n); }
void accumulate_harmonic(double a, const double* c, double b, const double* s, double* out, std::size_t n) {
  base::accumulate_harmonic(a, c, b, s, out, n);
}
double max_abs_diff(const double* a, const double* b, std::size_t n) { return base::max_abs_diff(a, b, n); }
ArgMax affine_argmax(const double* t, const double* r, std::size_t n, double a, double b) {
  return base::affine_argmax(t, r, n, a, b);
}

}  // namespace tomoscope::kernels::avx2

#endif
