#pragma once

#include <Eigen/Core>

namespace memfilter {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

template <typename Derived>
typename Derived::PlainObject symmetrized(const Eigen::MatrixBase<Derived>& m) {
  return (0.5 * (m + m.transpose())).eval();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Smallest eigenvalue of the symmetric part of m.
double min_eigenvalue(const Mat3& m);
double min_eigenvalue(const Mat2& m);

}  // namespace memfilter
