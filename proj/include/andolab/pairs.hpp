#pragma once

#include <cmath>
#include <string>

#include "linalg.hpp"
#include "rng.hpp"

namespace andolab {

/// Validated commuting pair (T1, T2) of contractions on C^n.
struct ContractionPair {
  Eigen::Index n = 0;
  ComplexMatrix t1, t2;
  double comm_residual = 0.0;  // ||T1 T2 - T2 T1||_2
  double norm1 = 0.0, norm2 = 0.0;
  bool strict = false;
};

/// Defect operators D = (I - T*T)^{1/2} of T1, T2 and T1T2, with their
/// smallest singular values (invertibility margins).
struct DefectData {
  ComplexMatrix d1, d2, dt;
  double margin1 = 0.0, margin2 = 0.0, margin_t = 0.0;
};

enum class PairMethod { polynomial, codiagonal, jordan };

inline const char* pair_method_name(PairMethod m) {
  switch (m) {
    case PairMethod::polynomial: return "polynomial";
    case PairMethod::codiagonal: return "codiagonal";
    case PairMethod::jordan: return "jordan";
  }
  return "unknown";
}

inline PairMethod pair_method_from_name(const std::string& s) {
  if (s == "polynomial") return PairMethod::polynomial;
  if (s == "codiagonal") return PairMethod::codiagonal;
  if (s == "jordan") return PairMethod::jordan;
  throw Error(Err::BadParams, "unknown pair method: " + s);
}

inline constexpr double kDefaultStrictMargin = 0.05;

/// Recompute all diagnostics and return a populated pair, or throw.
/// comm_tol <= 0 selects the default 1e-10 * max(1, ||T1|| ||T2||).
inline ContractionPair validate_pair(const ComplexMatrix& t1,
                                     const ComplexMatrix& t2,
                                     bool require_strict = true,
                                     double comm_tol = -1.0,
                                     double strict_margin =
                                         kDefaultStrictMargin) {
  if (t1.rows() != t1.cols() || t2.rows() != t2.cols() ||
      t1.rows() != t2.rows())
    throw Error(Err::BadParams, "pair matrices must be square of equal size");
  ContractionPair p;
  p.n = t1.rows();
  p.t1 = t1;
  p.t2 = t2;
  p.norm1 = operator_norm_2(t1);
  p.norm2 = operator_norm_2(t2);
  p.comm_residual = operator_norm_2(ComplexMatrix(t1 * t2 - t2 * t1));
  if (comm_tol <= 0.0) comm_tol = 1e-10 * std::max(1.0, p.norm1 * p.norm2);
  if (p.comm_residual > comm_tol)
    throw Error(Err::NotCommuting, "commutator norm exceeds tolerance",
                p.comm_residual);
  if (p.norm1 > 1.0 + 1e-12)
    throw Error(Err::NotContraction, "||T1|| > 1", p.norm1);
  if (p.norm2 > 1.0 + 1e-12)
    throw Error(Err::NotContraction, "||T2|| > 1", p.norm2);
  p.strict = p.norm1 <= 1.0 - strict_margin && p.norm2 <= 1.0 - strict_margin;
  if (require_strict && !p.strict) {
    if (p.norm1 > 1.0 - strict_margin)
      throw Error(Err::NotStrict, "||T1|| too close to 1", p.norm1);
    throw Error(Err::NotStrict, "||T2|| too close to 1", p.norm2);
  }
  return p;
}

inline DefectData defect_data(const ContractionPair& pair,
                              double tol = 1e-10) {
  const ComplexMatrix id = ComplexMatrix::Identity(pair.n, pair.n);
  const ComplexMatrix t = pair.t1 * pair.t2;
  DefectData d;
  d.d1 = hermitian_sqrt(ComplexMatrix(id - pair.t1.adjoint() * pair.t1), tol);
  d.d2 = hermitian_sqrt(ComplexMatrix(id - pair.t2.adjoint() * pair.t2), tol);
  d.dt = hermitian_sqrt(ComplexMatrix(id - t.adjoint() * t), tol);
  auto smallest = [](const ComplexMatrix& m) {
    const auto s = singular_values(m);
    return s.empty() ? 0.0 : s.back();
  };
  d.margin1 = smallest(d.d1);
  d.margin2 = smallest(d.d2);
  d.margin_t = smallest(d.dt);
  return d;
}

inline double product_norm(const ContractionPair& pair) {
  return operator_norm_2(ComplexMatrix(pair.t1 * pair.t2));
}

namespace detail {

// One deterministic draw of a raw commuting pair; rescaling to target norms
// happens in the caller.
inline std::pair<ComplexMatrix, ComplexMatrix> draw_commuting(
    Rng& rng, Eigen::Index n, PairMethod method) {
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  switch (method) {
    case PairMethod::polynomial: {
      ComplexMatrix a = rng.cnormal_matrix(n, n);
      const double na = operator_norm_2(a);
      if (na > 0) a *= 0.8 / na;
      auto poly = [&](int degree) {
        ComplexMatrix acc = ComplexMatrix::Zero(n, n);
        ComplexMatrix pw = id;
        for (int k = 0; k <= degree; ++k) {
          acc += rng.cnormal() * pw;
          pw = ComplexMatrix(pw * a);
        }
        return acc;
      };
      const int d1 = 1 + static_cast<int>(rng.uniform_index(3));
      const int d2 = 1 + static_cast<int>(rng.uniform_index(3));
      return {poly(d1), poly(d2)};
    }
    case PairMethod::codiagonal: {
      ComplexMatrix g = rng.cnormal_matrix(n, n);
      Eigen::HouseholderQR<ComplexMatrix> qr(g);
      ComplexMatrix u = fix_column_phases(ComplexMatrix(qr.householderQ()));
      ComplexVector l1(n), l2(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        l1(i) = rng.disc();
        l2(i) = rng.disc();
      }
      return {ComplexMatrix(u * l1.asDiagonal() * u.adjoint()),
              ComplexMatrix(u * l2.asDiagonal() * u.adjoint())};
    }
    case PairMethod::jordan: {
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = 0.5;
      const Complex alpha = rng.cnormal(), beta = rng.cnormal();
      const Complex gamma = rng.cnormal(), delta = rng.cnormal();
      return {ComplexMatrix(alpha * (a + beta * id)),
              ComplexMatrix(gamma * (a * a + delta * id))};
    }
  }
  throw Error(Err::BadParams, "unknown pair method");
}

}  // namespace detail

/// Deterministic commuting strict fixture with ||T_i|| = r_i (post-scaling).
inline ContractionPair generate_commuting_pair(std::uint64_t seed,
                                               Eigen::Index n,
                                               PairMethod method, double r1,
                                               double r2) {
  if (n < 1) throw Error(Err::BadParams, "n must be >= 1");
  if (!(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0))
    throw Error(Err::BadParams, "target norms must lie in (0, 1)");
  const std::uint64_t method_id = static_cast<std::uint64_t>(method);
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n),
                     method_id * 16 + attempt));
    auto [t1, t2] = detail::draw_commuting(rng, n, method);
    const double n1 = operator_norm_2(t1), n2 = operator_norm_2(t2);
    if (n1 < 1e-8 || n2 < 1e-8) continue;  // degenerate draw, redraw
    t1 *= r1 / n1;
    t2 *= r2 / n2;
    const double margin =
        std::min(kDefaultStrictMargin, (1.0 - std::max(r1, r2)) / 2.0);
    return validate_pair(t1, t2, /*require_strict=*/true, -1.0, margin);
  }
  throw Error(Err::BadParams, "could not draw a nondegenerate pair");
}

}  // namespace andolab
