#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tomoscope/types.hpp"

namespace tomoscope {

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search on [lo, hi] until the bracket is narrower than tol.
/// Exact for unimodal f; the iteration count depends only on the bracket.
Minimum golden_minimize(const std::function<double(double)>& f, double lo, double hi, double tol);
Minimum golden_maximize(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Deterministic near-uniform point sets.
std::vector<VecN> sphere_points(int dim, int n);
/// Points with canonical sign (one per antipodal pair), used as plane normals.
std::vector<VecN> hemisphere_points(int dim, int n);

/// Product rule on S^2 (Gauss-Legendre in cos(polar) x uniform azimuth).
struct SphereRule {
  std::vector<VecN> dirs;
  std::vector<double> weights;  // sum to 4 pi
};
SphereRule sphere_rule(int n_polar, int n_azimuth);

/// Runs body(i) for i in [0, n). Thread count comes from TOMOSCOPE_THREADS
/// (default: hardware concurrency); nested calls run serially. Results must be
/// written by index so output is schedule independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);
int worker_count();

}  // namespace tomoscope
