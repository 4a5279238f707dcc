#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace andolab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Absolute floor under which a leading singular value counts as zero.
inline constexpr double kRankFloor = 1e-12;
// Threshold for "first nonzero entry" when fixing column phases.
inline constexpr double kPhaseFloor = 1e-12;

/// Largest singular value; 0 for empty matrices.
inline double operator_norm_2(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Singular values in descending order.
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

/// Rank = #{sigma_i > tol * sigma_1}, with rank 0 once sigma_1 falls below
/// the absolute floor. Relative tolerance keeps rank decisions scale-free.
inline Eigen::Index numerical_rank(const ComplexMatrix& m, double tol = 1e-8) {
  const auto s = singular_values(m);
  if (s.empty() || s[0] <= kRankFloor) return 0;
  Eigen::Index r = 0;
  for (double v : s)
    if (v > tol * s[0]) ++r;
  return r;
}

/// Hermitian positive-semidefinite square root. Eigenvalues in [-tol, 0) are
/// clamped to 0 so float noise at the contraction boundary cannot abort the
/// defect construction; anything below -tol is a genuine failure.
inline ComplexMatrix hermitian_sqrt(const ComplexMatrix& m,
                                    double tol = 1e-10) {
  if (m.rows() != m.cols())
    throw Error(Err::BadParams, "hermitian_sqrt requires a square matrix");
  const double scale = operator_norm_2(m);
  const double asym = operator_norm_2(ComplexMatrix(m - m.adjoint()));
  if (asym > tol * std::max(scale, 1.0))
    throw Error(Err::NotHermitian, "asymmetry beyond tolerance", asym);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      ComplexMatrix((m + m.adjoint()) / 2.0));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol)
      throw Error(Err::NotPSD, "eigenvalue below -tol", ev(i));
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  const ComplexMatrix root =
      es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
      es.eigenvectors().adjoint();
  return (root + root.adjoint()) / 2.0;
}

/// Multiply each column by a unimodular factor so its first nonzero entry is
/// real nonnegative. Fixes the phase freedom of QR factors, making
/// decompositions reproducible fixtures.
inline ComplexMatrix fix_column_phases(ComplexMatrix m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > kPhaseFloor) {
        m.col(j) *= std::conj(m(i, j)) / a;
        break;
      }
    }
  }
  return m;
}

/// Orthonormal basis of the column space (column count = numerical rank),
/// via column-pivoted Householder QR. Zero input yields a zero-column result.
inline ComplexMatrix orthonormal_basis(const ComplexMatrix& cols,
                                       double tol = 1e-10) {
  if (cols.size() == 0) return ComplexMatrix(cols.rows(), 0);
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(cols);
  const ComplexMatrix r = qr.matrixR();
  const Eigen::Index kmax = std::min(cols.rows(), cols.cols());
  const double lead = kmax > 0 ? std::abs(r(0, 0)) : 0.0;
  Eigen::Index rank = 0;
  if (lead > kRankFloor) {
    for (Eigen::Index i = 0; i < kmax; ++i)
      if (std::abs(r(i, i)) > tol * lead) ++rank;
  }
  ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(rank);
  return fix_column_phases(std::move(q));
}

/// Orthonormal basis of the orthogonal complement of the span of `basis`
/// inside C^ambient_dim. Input columns must already be orthonormal.
inline ComplexMatrix orthonormal_complement(const ComplexMatrix& basis,
                                            Eigen::Index ambient_dim,
                                            double tol = 1e-10) {
  const Eigen::Index k = basis.cols();
  if (basis.size() != 0 && basis.rows() != ambient_dim)
    throw Error(Err::DimMismatch, "basis rows != ambient dimension");
  if (k == 0)
    return ComplexMatrix::Identity(ambient_dim, ambient_dim);
  const double gram_res = operator_norm_2(
      ComplexMatrix(basis.adjoint() * basis -
                    ComplexMatrix::Identity(k, k)));
  if (gram_res > tol)
    throw Error(Err::NotOrthonormalInput, "input columns not orthonormal",
                gram_res);
  if (k >= ambient_dim) return ComplexMatrix(ambient_dim, 0);
  Eigen::HouseholderQR<ComplexMatrix> qr(basis);
  ComplexMatrix q =
      ComplexMatrix(qr.householderQ()).rightCols(ambient_dim - k);
  return fix_column_phases(std::move(q));
}

}  // namespace andolab
