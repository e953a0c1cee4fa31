#pragma once

#include <Eigen/Dense>
#include <complex>

namespace jqc {

using complexd = std::complex<double>;

/// Kronecker product a (x) b.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Frobenius norm of a - b.
inline double frobenius_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).norm();
}

/// ||U^dag U - I||_F; zero for exactly unitary U.
inline double unitarity_defect(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).norm();
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Rescale g by det(g)^(-1/dim) (principal root) so the result has unit determinant.
inline Eigen::MatrixXcd su_normalize(const Eigen::MatrixXcd& g) {
  const auto dim = static_cast<double>(g.rows());
  return g * std::pow(g.determinant(), -1.0 / dim);
}

}  // namespace jqc
