#pragma once

#include <initializer_list>

#include <Eigen/Dense>

namespace tomoscope {

// Fixed-capacity dynamic vectors: bodies live in dimension 3 or 4 and never
// allocate on the heap.
using VecN = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using MatN = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline VecN vecn(std::initializer_list<double> c) {
  VecN v(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (double x : c) v[i++] = x;
  return v;
}

inline VecN basis_vector(int dim, int index) {
  VecN v = VecN::Zero(dim);
  v[index] = 1.0;
  return v;
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace tomoscope
