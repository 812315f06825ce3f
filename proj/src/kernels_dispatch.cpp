#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

#include "tomoscope/kernels.hpp"

namespace tomoscope::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("TOMOSCOPE_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& override_slot() {
  static std::atomic<int> slot{-1};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() {
  const int forced = override_slot().load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa detected = detect();
  return detected;
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) isa = Isa::Scalar;
  override_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_isa() == Isa::Avx2 ? avx2::dot(a.data(), b.data(), a.size()) : base::dot(a.data(), b.data(), a.size());
}

void accumulate_harmonic(double a, std::span<const double> c, double b, std::span<const double> s,
                         std::span<double> out) {
  assert(c.size() == out.size() && s.size() == out.size());
  if (active_isa() == Isa::Avx2) {
    avx2::accumulate_harmonic(a, c.data(), b, s.data(), out.data(), out.size());
  } else {
    base::accumulate_harmonic(a, c.data(), b, s.data(), out.data(), out.size());
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_isa() == Isa::Avx2 ? avx2::max_abs_diff(a.data(), b.data(), a.size())
                                   : base::max_abs_diff(a.data(), b.data(), a.size());
}

ArgMax affine_argmax(std::span<const double> t, std::span<const double> r, double a, double b) {
  assert(t.size() == r.size());
  return active_isa() == Isa::Avx2 ? avx2::affine_argmax(t.data(), r.data(), t.size(), a, b)
                                   : base::affine_argmax(t.data(), r.data(), t.size(), a, b);
}

}  // namespace tomoscope::kernels
