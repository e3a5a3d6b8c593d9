#include "memfilter/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace memfilter {

double min_eigenvalue(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double min_eigenvalue(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Mat2> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace memfilter
