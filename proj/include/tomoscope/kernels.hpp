#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops. Each kernel has a scalar reference in
// kernels::base and an AVX2+FMA variant in kernels::avx2; the unqualified
// entry points dispatch once per process on CPU features. Set
// TOMOSCOPE_SIMD=scalar to pin the reference path.

namespace tomoscope::kernels {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
/// Overrides dispatch for the rest of the process (tests, benchmarks).
void force_isa(Isa isa);

struct ArgMax {
  std::size_t index = 0;
  double value = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b);
/// out[i] += a * c[i] + b * s[i]
void accumulate_harmonic(double a, std::span<const double> c, double b, std::span<const double> s,
                         std::span<double> out);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// argmax_i (a * t[i] + b * r[i]); ties resolve to the smallest index.
ArgMax affine_argmax(std::span<const double> t, std::span<const double> r, double a, double b);

namespace base {
double dot(const double* a, const double* b, std::size_t n);
void accumulate_harmonic(double a, const double* c, double b, const double* s, double* out, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
ArgMax affine_argmax(const double* t, const double* r, std::size_t n, double a, double b);
}  // namespace base

namespace avx2 {
bool compiled();
double dot(const double* a, const double* b, std::size_t n);
void accumulate_harmonic(double a, const double* c, double b, const double* s, double* out, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
ArgMax affine_argmax(const double* t, const double* r, std::size_t n, double a, double b);
}  // namespace avx2

}  // namespace tomoscope::kernels
