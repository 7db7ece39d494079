#pragma once

#include <Eigen/Dense>
#include <complex>

namespace xyzness {

using Cplx = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;
using Eigen::Vector2cd;
using Eigen::VectorXcd;

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix2cd pauli_x() {
  Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix2cd pauli_y() {
  Matrix2cd m;
  m << 0, Cplx(0, -1), Cplx(0, 1), 0;
  return m;
}
inline Matrix2cd pauli_z() {
  Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

// 1/2 * sum |eigenvalues| of the Hermitian difference a - b.
inline double trace_distance(const MatrixXcd& a, const MatrixXcd& b) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Reduced density matrix of one site (1-based) of an n_sites-qubit operator.
// Site 1 is the leftmost (most significant) tensor factor.
inline Matrix2cd reduce_to_site(const MatrixXcd& rho, int site, int n_sites) {
  const Eigen::Index pre = Eigen::Index(1) << (site - 1);
  const Eigen::Index post = Eigen::Index(1) << (n_sites - site);
  Matrix2cd out = Matrix2cd::Zero();
  for (Eigen::Index p = 0; p < pre; ++p)
    for (Eigen::Index s = 0; s < post; ++s)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out(a, b) += rho((p * 2 + a) * post + s, (p * 2 + b) * post + s);
  return out;
}

inline bool is_valid_density(const MatrixXcd& rho, double tol = 1e-12) {
  if (rho.rows() != rho.cols()) return false;
  if ((rho - rho.adjoint()).norm() > tol * rho.rows()) return false;
  if (std::abs(rho.trace() - Cplx(1.0)) > tol * rho.rows()) return false;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > -1e-10;
}

}  // namespace xyzness
