#pragma once

#include <utility>

#include "pairs.hpp"

namespace andolab {

// Core construction for a commuting pair of strict contractions (T1, T2):
//
//   g1 = [D1; D2 T1],  g2 = [D1 T2; D2]   (2n x n block columns)
//
// generate the subspaces M1, M2 of C^n (+) C^n. The map g2 h -> g1 h is
// isometric because both sides have norm ||D_{T1T2} h||, and M1 /\ M2 = {0}
// for strict pairs, so it extends to a full 2n x 2n unitary S with
//
//   S (D1 T2 h, D2 h) = (D1 h, D2 T1 h)      for all h.
//
// S is the engine behind the commuting block-shift isometries on
// H (+) l2(H (+) H). The classical four-slot analog pads the generators with
// alternating zero slots and extends on C^{4n}.

/// Generators and orthonormal bases of the defect subspaces M1, M2, together
/// with bases of their orthogonal complements.
struct DefectSubspaces {
  ComplexMatrix g1, g2;  // 2n x n generators
  ComplexMatrix b1, b2;  // orthonormal bases of M1, M2
  ComplexMatrix c1, c2;  // orthonormal bases of the complements
  double joint_min_sv = 0.0;  // smallest singular value of [g1 | g2]
};

/// A unitary extension together with its construction residuals.
struct AndoUnitary {
  ComplexMatrix s;
  double unitarity_residual = 0.0;  // ||S*S - I||_2
  double interp_residual = 0.0;     // ||S g_src - g_dst||_2
};

// Strictness gate: pairs with a defect margin this close to singular are
// rejected rather than regularized.
inline constexpr double kDefectMarginFloor = 1e-6;

/// Extend the isometric correspondence g_src h -> g_dst h to a full unitary:
/// factor g_src = b R (Householder QR, R upper-triangular with positive real
/// diagonal), set b' = g_dst R^{-1}, pair the orthonormal complements of b'
/// and b in index order, and return  b' b* + c' c*.
///
/// Requires ||g_dst h|| = ||g_src h|| for all h (then b' is automatically
/// orthonormal); a Gram-Schmidt pass re-orthonormalizes b' if rounding in an
/// ill-conditioned R leaves a Gram residual above 1e-12.
inline ComplexMatrix extend_partial_isometry(const ComplexMatrix& g_dst,
                                             const ComplexMatrix& g_src) {
  const Eigen::Index d = g_src.rows(), k = g_src.cols();
  if (g_dst.rows() != d || g_dst.cols() != k)
    throw Error(Err::DimMismatch, "generator shapes differ");
  Eigen::HouseholderQR<ComplexMatrix> qr(g_src);
  ComplexMatrix r =
      qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  ComplexMatrix b = ComplexMatrix(qr.householderQ()).leftCols(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double a = std::abs(r(j, j));
    if (a <= kRankFloor * std::max(1.0, std::abs(r(0, 0))))
      throw Error(Err::RankDeficient, "source generator not full rank", a);
    const Complex phase = r(j, j) / a;
    b.col(j) *= phase;
    r.row(j) *= std::conj(phase);
  }
  ComplexMatrix bp = r.template triangularView<Eigen::Upper>()
                         .template solve<Eigen::OnTheRight>(g_dst);
  const double gram_res = operator_norm_2(
      ComplexMatrix(bp.adjoint() * bp - ComplexMatrix::Identity(k, k)));
  if (gram_res > 1e-12) {
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < j; ++i)
        bp.col(j) -= (bp.col(i).adjoint() * bp.col(j))(0) * bp.col(i);
      bp.col(j).normalize();
    }
  }
  const ComplexMatrix cd = orthonormal_complement(bp, d);
  const ComplexMatrix cs = orthonormal_complement(b, d);
  return bp * b.adjoint() + cd * cs.adjoint();
}

inline DefectSubspaces build_subspaces(const ContractionPair& pair,
                                       const DefectData& defects) {
  const double worst =
      std::min({defects.margin1, defects.margin2, defects.margin_t});
  if (worst < kDefectMarginFloor)
    throw Error(Err::DegenerateDefect, "defect operator nearly singular",
                worst);
  const Eigen::Index n = pair.n;
  DefectSubspaces s;
  s.g1.resize(2 * n, n);
  s.g1 << defects.d1, defects.d2 * pair.t1;
  s.g2.resize(2 * n, n);
  s.g2 << defects.d1 * pair.t2, defects.d2;
  s.b1 = orthonormal_basis(s.g1);
  s.b2 = orthonormal_basis(s.g2);
  if (s.b1.cols() != n || s.b2.cols() != n)
    throw Error(Err::RankDeficient, "defect subspace generator lost rank");
  s.c1 = orthonormal_complement(s.b1, 2 * n);
  s.c2 = orthonormal_complement(s.b2, 2 * n);
  ComplexMatrix joint(2 * n, 2 * n);
  joint << s.g1, s.g2;
  const auto sv = singular_values(joint);
  s.joint_min_sv = sv.empty() ? 0.0 : sv.back();
  return s;
}

/// The 2n x 2n unitary with S g2 = g1.
inline AndoUnitary build_S(const ContractionPair& pair,
                           const DefectSubspaces& subspaces) {
  if (subspaces.g1.rows() != 2 * pair.n || subspaces.g2.cols() != pair.n)
    throw Error(Err::DimMismatch, "subspaces do not belong to this pair");
  AndoUnitary u;
  u.s = extend_partial_isometry(subspaces.g1, subspaces.g2);
  const Eigen::Index d = u.s.rows();
  u.unitarity_residual = operator_norm_2(
      ComplexMatrix(u.s.adjoint() * u.s - ComplexMatrix::Identity(d, d)));
  u.interp_residual =
      operator_norm_2(ComplexMatrix(u.s * subspaces.g2 - subspaces.g1));
  return u;
}

/// The classical 4n x 4n unitary built from the zero-padded generators,
/// oriented exactly as printed:
///   U (D1 T2 h, 0, D2 h, 0) = (D2 T1 h, 0, D1 h, 0).
/// Note the output component order is swapped relative to the 2-block S; the
/// engine's four-slot operators compensate (see dilation.hpp).
inline AndoUnitary build_classical_U4(const ContractionPair& pair,
                                      const DefectData& defects) {
  const double worst =
      std::min({defects.margin1, defects.margin2, defects.margin_t});
  if (worst < kDefectMarginFloor)
    throw Error(Err::DegenerateDefect, "defect operator nearly singular",
                worst);
  const Eigen::Index n = pair.n;
  const ComplexMatrix z = ComplexMatrix::Zero(n, n);
  ComplexMatrix gsrc(4 * n, n), gdst(4 * n, n);
  gsrc << defects.d1 * pair.t2, z, defects.d2, z;
  gdst << defects.d2 * pair.t1, z, defects.d1, z;
  AndoUnitary u;
  u.s = extend_partial_isometry(gdst, gsrc);
  u.unitarity_residual = operator_norm_2(ComplexMatrix(
      u.s.adjoint() * u.s - ComplexMatrix::Identity(4 * n, 4 * n)));
  u.interp_residual = operator_norm_2(ComplexMatrix(u.s * gsrc - gdst));
  return u;
}

/// Permutation swapping the slot pairs (1,2) <-> (3,4) of C^{4n}.
inline ComplexMatrix slot_pair_swap(Eigen::Index n) {
  ComplexMatrix p = ComplexMatrix::Zero(4 * n, 4 * n);
  p.block(0, 2 * n, 2 * n, 2 * n) =
      ComplexMatrix::Identity(2 * n, 2 * n);
  p.block(2 * n, 0, 2 * n, 2 * n) =
      ComplexMatrix::Identity(2 * n, 2 * n);
  return p;
}

}  // namespace andolab
