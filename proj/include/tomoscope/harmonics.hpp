#pragma once

#include <span>
#include <vector>

namespace tomoscope {

/// Real trigonometric interpolant of m samples taken at theta_i = 2 pi i / m:
///   f(theta) = a[0] + sum_{k=1..K} a[k] cos(k theta) + b[k] sin(k theta),
/// K = floor(m / 2). For even m the Nyquist sine term is dropped.
struct Harmonics {
  int m = 0;
  std::vector<double> a;
  std::vector<double> b;

  int order() const { return static_cast<int>(a.size()) - 1; }
  double evaluate(double theta) const;
  double derivative(double theta) const;
};

/// cos(k theta_i) and sin(k theta_i) rows for k = 0..K, cached per m.
struct TrigTable {
  int m = 0;
  std::vector<std::vector<double>> cos_rows;
  std::vector<std::vector<double>> sin_rows;
};

const TrigTable& trig_table(int m);

Harmonics analyze(std::span<const double> samples);
/// Writes the interpolant's values on the m-point grid into out.
void synthesize(const Harmonics& h, std::span<double> out);

}  // namespace tomoscope
