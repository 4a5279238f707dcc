#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "verify.hpp"

namespace andolab {

// Normed-space layer: lp oracles, the A_T functional
// A_T(x) = (||x||^2 - ||Tx||^2)^{1/2}, the identities it satisfies over a
// commuting contractive pair, and the block-shift dilation driven by a
// mixed-norm unitary S with S(T2 x, x) = (x, T1 x).

/// A finite-dimensional normed space: dimension, evaluator, and a JSON
/// descriptor ({"kind":"lp",...} / {"kind":"a-norm",...} / mixed-pair).
struct NormOracle {
  Eigen::Index dim = 0;
  std::function<double(const ComplexVector&)> eval;
  json descriptor;
};

inline double lp_norm(const ComplexVector& x, double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      m = std::max(m, std::abs(x(i)));
    return m;
  }
  double acc = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    acc += std::pow(std::abs(x(i)), p);
  return std::pow(acc, 1.0 / p);
}

inline NormOracle lp_oracle(Eigen::Index n, double p) {
  if (std::isnan(p) || p < 1.0)
    throw Error(Err::BadP, "lp oracle requires p >= 1", p);
  NormOracle o;
  o.dim = n;
  o.eval = [p](const ComplexVector& x) { return lp_norm(x, p); };
  o.descriptor = {{"kind", "lp"}, {"p", p_to_json(p)}, {"dim", n}};
  return o;
}

// ---- operator p-norms ------------------------------------------------------

/// Norm estimate with provenance. For p in {1, 2, inf} the value is exact;
/// otherwise it is a lower bound (sample maximization plus the fixed-point
/// power iteration), never an upper bound. `maximizer` attains the reported
/// value.
struct PNormEstimate {
  double value = 0.0;
  std::string mode;
  int iterations = 0;
  ComplexVector maximizer;

  json certificate() const {
    return json{{"value", value}, {"mode", mode}, {"iterations", iterations}};
  }
};

namespace detail {

inline ComplexVector signed_power(const ComplexVector& y, double e) {
  ComplexVector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i));
    out(i) = a > 0 ? std::pow(a, e) * (y(i) / a) : Complex(0, 0);
  }
  return out;
}

}  // namespace detail

inline PNormEstimate operator_p_norm(const ComplexMatrix& t, double p,
                                     int max_iter = 200) {
  if (std::isnan(p) || p < 1.0)
    throw Error(Err::BadP, "operator p-norm requires p >= 1", p);
  const Eigen::Index n = t.cols();
  PNormEstimate est;
  if (p == 1.0) {
    est.mode = "exact-colsum";
    Eigen::Index jbest = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = t.col(j).cwiseAbs().sum();
      if (s > est.value) {
        est.value = s;
        jbest = j;
      }
    }
    est.maximizer = ComplexVector::Zero(n);
    if (n > 0) est.maximizer(jbest) = 1.0;
    return est;
  }
  if (std::isinf(p)) {
    est.mode = "exact-rowsum";
    Eigen::Index ibest = 0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const double s = t.row(i).cwiseAbs().sum();
      if (s > est.value) {
        est.value = s;
        ibest = i;
      }
    }
    est.maximizer = ComplexVector::Ones(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = std::abs(t(ibest, j));
      if (a > 0) est.maximizer(j) = std::conj(t(ibest, j)) / a;
    }
    return est;
  }
  if (p == 2.0) {
    est.mode = "exact-svd";
    Eigen::JacobiSVD<ComplexMatrix> svd(t, Eigen::ComputeThinV);
    est.value = svd.singularValues()(0);
    est.maximizer = svd.matrixV().col(0);
    return est;
  }

  // Boyd/Higham fixed-point iteration plus sample maximization; both give
  // lower bounds.
  est.mode = "power-method";
  const double q = p / (p - 1.0);
  auto record = [&](const ComplexVector& x) {
    const double nx = lp_norm(x, p);
    if (nx == 0) return;
    const double v = lp_norm(ComplexVector(t * x), p) / nx;
    if (v > est.value) {
      est.value = v;
      est.maximizer = x / nx;
    }
  };
  Rng rng(mix_seed(0x704e4f524dULL, static_cast<std::uint64_t>(p * 4096),
                   static_cast<std::uint64_t>(n)));
  std::vector<ComplexVector> starts;
  starts.push_back(ComplexVector::Ones(n));
  for (int r = 0; r < 3; ++r) starts.push_back(rng.cnormal_vector(n));
  for (auto& x0 : starts) {
    ComplexVector x = x0 / lp_norm(x0, p);
    for (int it = 0; it < max_iter; ++it) {
      ++est.iterations;
      const ComplexVector y = t * x;
      const double ny = lp_norm(y, p);
      record(x);
      if (ny == 0) break;
      const ComplexVector psi =
          detail::signed_power(y, p - 1.0) / std::pow(ny, p - 1.0);
      const ComplexVector z = t.adjoint() * psi;
      const double nz = lp_norm(z, q);
      const double zx = (z.adjoint() * x)(0).real();
      if (nz <= zx * (1.0 + 1e-13) + 1e-300) break;  // stationary point
      ComplexVector xn = detail::signed_power(z, q - 1.0);
      const double nxn = lp_norm(xn, p);
      if (nxn == 0) break;
      x = xn / nxn;
    }
    record(x);
  }
  for (int s = 0; s < 200; ++s) record(rng.cnormal_vector(n));
  return est;
}

// ---- the A_T functional ----------------------------------------------------

/// A_T over a base oracle, with the matrix and base kept for structured
/// probing.
struct ANormOracle {
  ComplexMatrix t;
  NormOracle base;
  NormOracle norm;
};

/// Builds the evaluator x -> (||x||^2 - ||Tx||^2)^{1/2}. Contractivity of T
/// in the base norm is spot-checked on the canonical basis plus `samples`
/// random draws. At evaluation time, a radicand below -1e-12 (relative to
/// ||x||^2) means the precondition is violated and raises; mere float noise
/// above that is clamped to zero.
inline ANormOracle a_norm_oracle(const ComplexMatrix& t,
                                 const NormOracle& base, int samples = 64,
                                 std::uint64_t seed = kDefaultCheckSeed) {
  if (t.rows() != t.cols() || t.rows() != base.dim)
    throw Error(Err::DimMismatch, "a-norm oracle: T must be dim x dim");
  const Eigen::Index n = base.dim;
  Rng rng(mix_seed(seed, 7));
  auto probe = [&](const ComplexVector& x) {
    const double bx = base.eval(x);
    const double btx = base.eval(ComplexVector(t * x));
    if (btx > bx * (1.0 + 1e-10) + 1e-14)
      throw Error(Err::NotContractiveInBase,
                  "||Tx|| exceeds ||x|| in the base norm", btx - bx);
  };
  for (Eigen::Index j = 0; j < n; ++j)
    probe(ComplexVector(ComplexVector::Unit(n, j)));
  for (int s = 0; s < samples; ++s) probe(rng.cnormal_vector(n));

  ANormOracle a;
  a.t = t;
  a.base = base;
  a.norm.dim = n;
  auto base_eval = base.eval;
  a.norm.eval = [t, base_eval](const ComplexVector& x) {
    const double bx = base_eval(x);
    const double btx = base_eval(ComplexVector(t * x));
    const double r = bx * bx - btx * btx;
    const double scale = std::max(bx * bx, 1e-300);
    if (r / scale < -1e-12)
      throw Error(Err::NotContractiveInBase,
                  "negative radicand beyond clamp threshold", r);
    return std::sqrt(std::max(r, 0.0));
  };
  a.norm.descriptor = {{"kind", "a-norm"},
                       {"T", matrix_to_json(t)},
                       {"base", base.descriptor}};
  return a;
}

/// Outcome of sampled norm-axiom verification. `triangle_counterexample`
/// reproduces A(x+y) > A(x) + A(y) + tol; `degeneracy_witness` is a unit
/// vector with A(x) ~ 0, which rules out positivity (the failure mode of
/// every finite-dimensional norm-one candidate).
struct ANormStatus {
  enum class Verdict { verified_sampled, counterexample, indeterminate };
  Verdict verdict = Verdict::indeterminate;
  std::optional<std::pair<ComplexVector, ComplexVector>>
      triangle_counterexample;
  std::optional<ComplexVector> degeneracy_witness;
  int samples_used = 0;
  double worst_slack = -std::numeric_limits<double>::infinity();

  const char* verdict_name() const {
    switch (verdict) {
      case Verdict::verified_sampled: return "verified-sampled";
      case Verdict::counterexample: return "counterexample";
      case Verdict::indeterminate: return "indeterminate";
    }
    return "unknown";
  }
};

inline constexpr double kDegeneracyTol = 1e-6;

/// Triangle inequality on random pairs plus structured pairs (colinear,
/// basis, hypercube diagonals, near-kernel of the Hilbert defect), and
/// positivity on normalized probes including the operator-norm maximizer.
inline ANormStatus check_a_norm(const ANormOracle& a, int samples,
                                double tol = 1e-10,
                                std::uint64_t seed = kDefaultCheckSeed) {
  ANormStatus st;
  if (samples <= 0) return st;
  const Eigen::Index n = a.base.dim;
  Rng rng(mix_seed(seed, 8));

  // Positivity probes. The top eigenvector of T*T is where ||Tx||/||x||
  // peaks in l2; the base-norm maximizer is queried when the base is lp.
  std::vector<ComplexVector> probes;
  for (Eigen::Index j = 0; j < n; ++j)
    probes.emplace_back(ComplexVector::Unit(n, j));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      ComplexMatrix(a.t.adjoint() * a.t));
  probes.emplace_back(es.eigenvectors().col(n - 1));
  if (a.base.descriptor.value("kind", "") == "lp") {
    const double p = p_from_json(a.base.descriptor.at("p"));
    probes.emplace_back(operator_p_norm(a.t, p).maximizer);
  }
  for (int s = 0; s < 32; ++s) probes.emplace_back(rng.cnormal_vector(n));
  for (const auto& x : probes) {
    const double bx = a.base.eval(x);
    if (bx < 1e-12) continue;
    ++st.samples_used;
    if (a.norm.eval(ComplexVector(x / bx)) <= kDegeneracyTol) {
      st.degeneracy_witness = x / bx;
      st.verdict = ANormStatus::Verdict::counterexample;
      return st;
    }
  }

  auto slack = [&](const ComplexVector& x, const ComplexVector& y) {
    return a.norm.eval(ComplexVector(x + y)) - a.norm.eval(x) -
           a.norm.eval(y);
  };
  std::vector<std::pair<ComplexVector, ComplexVector>> pairs;
  for (Eigen::Index i = 0; i < n && i < 8; ++i)
    for (Eigen::Index j = i + 1; j < n && j < 8; ++j) {
      const ComplexVector ei = ComplexVector::Unit(n, i);
      const ComplexVector ej = ComplexVector::Unit(n, j);
      pairs.emplace_back(ei, ej);
      pairs.emplace_back(ei + ej, ei - ej);  // hypercube diagonals
    }
  {
    const ComplexVector x = rng.cnormal_vector(n);
    pairs.emplace_back(x, ComplexVector(2.0 * x));
    pairs.emplace_back(x, ComplexVector(-0.5 * x));
    const ComplexVector vmax = es.eigenvectors().col(n - 1);
    pairs.emplace_back(vmax, ComplexVector(vmax + 0.01 * rng.cnormal_vector(n)));
  }
  for (int s = 0; s < samples; ++s)
    pairs.emplace_back(rng.cnormal_vector(n), rng.cnormal_vector(n));

  for (const auto& [x, y] : pairs) {
    ++st.samples_used;
    const double sl = slack(x, y);
    st.worst_slack = std::max(st.worst_slack, sl);
    if (sl > tol) {
      st.triangle_counterexample = {x, y};
      st.verdict = ANormStatus::Verdict::counterexample;
      return st;
    }
  }
  st.verdict = ANormStatus::Verdict::verified_sampled;
  return st;
}

namespace detail {

inline double rel_residual(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m < 1e-300 ? 0.0 : std::abs(a - b) / m;
}

}  // namespace detail

/// A_{T1T2}(x)^2 = A_{T1}(x)^2 + A_{T2}(T1 x)^2 on sampled x; exact given
/// commutation, so the residual is pure float noise.
inline VerificationReport product_a_norm_identity(
    const ContractionPair& pair, const NormOracle& base, int samples,
    double tol = 1e-12, std::uint64_t seed = kDefaultCheckSeed) {
  VerificationReport rep;
  rep.check = "product-a-norm-identity";
  rep.params = {{"tol", tol}, {"seed", seed}, {"base", base.descriptor}};
  const ANormOracle a1 = a_norm_oracle(pair.t1, base);
  const ANormOracle a2 = a_norm_oracle(pair.t2, base);
  const ANormOracle at =
      a_norm_oracle(ComplexMatrix(pair.t1 * pair.t2), base);
  Rng rng(mix_seed(seed, 9));
  const Eigen::Index n = pair.n;
  std::vector<ComplexVector> xs;
  xs.emplace_back(ComplexVector::Zero(n));
  for (Eigen::Index j = 0; j < n; ++j)
    xs.emplace_back(ComplexVector::Unit(n, j));
  for (int s = 0; s < samples; ++s) xs.emplace_back(rng.cnormal_vector(n));
  for (const auto& x : xs) {
    const double lhs = std::pow(at.norm.eval(x), 2);
    const double rhs = std::pow(a1.norm.eval(x), 2) +
                       std::pow(a2.norm.eval(ComplexVector(pair.t1 * x)), 2);
    const double res = detail::rel_residual(lhs, rhs);
    ++rep.trials;
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = vector_to_json(x);
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// A_{T1}(T2 x)^2 + A_{T2}(x)^2 = A_{T1}(x)^2 + A_{T2}(T1 x)^2 on sampled x:
/// the norm chain behind the subspace map (T2 x, x) -> (x, T1 x).
inline VerificationReport qhat_isometry_check(
    const ContractionPair& pair, const NormOracle& base, int samples,
    double tol = 1e-12, std::uint64_t seed = kDefaultCheckSeed) {
  VerificationReport rep;
  rep.check = "qhat-isometry";
  rep.params = {{"tol", tol}, {"seed", seed}, {"base", base.descriptor}};
  const ANormOracle a1 = a_norm_oracle(pair.t1, base);
  const ANormOracle a2 = a_norm_oracle(pair.t2, base);
  Rng rng(mix_seed(seed, 10));
  const Eigen::Index n = pair.n;
  std::vector<ComplexVector> xs;
  xs.emplace_back(ComplexVector::Zero(n));
  for (Eigen::Index j = 0; j < n; ++j)
    xs.emplace_back(ComplexVector::Unit(n, j));
  for (int s = 0; s < samples; ++s) xs.emplace_back(rng.cnormal_vector(n));
  for (const auto& x : xs) {
    const double lhs = std::pow(a1.norm.eval(ComplexVector(pair.t2 * x)), 2) +
                       std::pow(a2.norm.eval(x), 2);
    const double rhs = std::pow(a1.norm.eval(x), 2) +
                       std::pow(a2.norm.eval(ComplexVector(pair.t1 * x)), 2);
    const double res = detail::rel_residual(lhs, rhs);
    ++rep.trials;
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = vector_to_json(x);
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// Graph subspaces {(T2 x, x)} and {(x, T1 x)} with the triviality margin of
/// their intersection. `sigma_min` (smallest singular value of I - T1 T2)
/// decides triviality; `margin` = 1 - ||T1 T2||_p is the strictness bound
/// the triviality argument runs on, and never exceeds sigma_min.
struct MhatSubspaces {
  ComplexMatrix g1, g2;  // 2n x n generators [T2; I] and [I; T1]
  double sigma_min = 0.0;
  double margin = 0.0;
  PNormEstimate product_norm_est;
  VerificationReport intersection_check;
};

inline MhatSubspaces mhat_subspaces(const ContractionPair& pair, double p,
                                    double tol = 1e-8) {
  MhatSubspaces m;
  m.product_norm_est = operator_p_norm(ComplexMatrix(pair.t1 * pair.t2), p);
  if (m.product_norm_est.value >= 1.0)
    throw Error(Err::ProductNotStrict, "||T1 T2|| >= 1 in the requested norm",
                m.product_norm_est.value);
  m.margin = 1.0 - m.product_norm_est.value;
  const Eigen::Index n = pair.n;
  m.g1.resize(2 * n, n);
  m.g1 << pair.t2, ComplexMatrix::Identity(n, n);
  m.g2.resize(2 * n, n);
  m.g2 << ComplexMatrix::Identity(n, n), pair.t1;
  const auto sv = singular_values(
      ComplexMatrix(ComplexMatrix::Identity(n, n) - pair.t1 * pair.t2));
  m.sigma_min = sv.empty() ? 0.0 : sv.back();
  m.intersection_check.check = "mhat-intersection";
  m.intersection_check.trials = 1;
  m.intersection_check.worst_residual = m.sigma_min;
  m.intersection_check.params = {{"sigma_min", m.sigma_min},
                                 {"margin", m.margin},
                                 {"p", p_to_json(p)},
                                 {"tol", tol}};
  m.intersection_check.pass = m.sigma_min > tol;
  return m;
}

/// p = 2 realization of the mixed-norm unitary: with A_{Ti}(x) = ||D_i x||,
/// conjugating the Hilbert S by diag(D1, D2) turns the defect interpolation
/// into S^(T2 x, x) = (x, T1 x).
inline ComplexMatrix hilbert_S_to_banach_S(const ContractionPair& pair,
                                           const DefectData& defects,
                                           const ComplexMatrix& s) {
  const double worst = std::min(defects.margin1, defects.margin2);
  if (worst < kDefectMarginFloor)
    throw Error(Err::DegenerateDefect, "defect operator nearly singular",
                worst);
  const Eigen::Index n = pair.n;
  ComplexMatrix d = ComplexMatrix::Zero(2 * n, 2 * n);
  d.topLeftCorner(n, n) = defects.d1;
  d.bottomRightCorner(n, n) = defects.d2;
  ComplexMatrix dinv = ComplexMatrix::Zero(2 * n, 2 * n);
  dinv.topLeftCorner(n, n) = defects.d1.inverse();
  dinv.bottomRightCorner(n, n) = defects.d2.inverse();
  return dinv * s * d;
}

inline BlockNormContext make_mixed_context(const NormOracle& base,
                                           const ANormOracle& a1,
                                           const ANormOracle& a2) {
  return BlockNormContext{base.eval, a1.norm.eval, a2.norm.eval};
}

/// Direct 2-sum of two oracles: ||(x1, x2)|| = (o1(x1)^2 + o2(x2)^2)^{1/2}.
inline NormOracle mixed_pair_oracle(const NormOracle& o1,
                                    const NormOracle& o2) {
  NormOracle m;
  m.dim = o1.dim + o2.dim;
  const Eigen::Index split = o1.dim;
  auto e1 = o1.eval, e2 = o2.eval;
  m.eval = [split, e1, e2](const ComplexVector& z) {
    return std::sqrt(std::pow(e1(z.head(split)), 2) +
                     std::pow(e2(z.tail(z.size() - split)), 2));
  };
  m.descriptor = {{"kind", "mixed-pair"},
                  {"first", o1.descriptor},
                  {"second", o2.descriptor}};
  return m;
}

/// The verified ingredients of a normed-space dilation: the two engine specs
/// plus the norms their checks must run under.
struct BanachDilation {
  DilationOperatorSpec v1, v2;
  BlockNormContext ctx;
  ANormOracle a1, a2;
  ANormStatus status1, status2;
};

/// Assembles banach-V specs after verifying, by sampling, everything the
/// construction assumes: A-norm validity, the interpolation identity for
/// s_hat, and that s_hat and its inverse are isometries of the mixed norm.
inline BanachDilation build_banach_dilation(const ContractionPair& pair,
                                            const NormOracle& base,
                                            const ComplexMatrix& s_hat,
                                            int samples = 200,
                                            double tol = 1e-9,
                                            std::uint64_t seed =
                                                kDefaultCheckSeed) {
  const Eigen::Index n = pair.n;
  if (s_hat.rows() != 2 * n || s_hat.cols() != 2 * n)
    throw Error(Err::DimMismatch, "s_hat must be 2n x 2n");
  BanachDilation b{{},
                   {},
                   {},
                   a_norm_oracle(pair.t1, base),
                   a_norm_oracle(pair.t2, base),
                   {},
                   {}};
  b.status1 = check_a_norm(b.a1, 2000, 1e-10, mix_seed(seed, 11));
  b.status2 = check_a_norm(b.a2, 2000, 1e-10, mix_seed(seed, 12));
  if (b.status1.verdict != ANormStatus::Verdict::verified_sampled ||
      b.status2.verdict != ANormStatus::Verdict::verified_sampled)
    throw Error(Err::ANormInvalid, "A-norm failed sampled verification");

  auto mixed = [&](const ComplexVector& z) {
    return std::sqrt(std::pow(b.a1.norm.eval(z.head(n)), 2) +
                     std::pow(b.a2.norm.eval(z.tail(n)), 2));
  };
  const ComplexMatrix s_inv = s_hat.inverse();
  if (operator_norm_2(ComplexMatrix(
          s_hat * s_inv - ComplexMatrix::Identity(2 * n, 2 * n))) > 1e-8)
    throw Error(Err::SNotMixedIsometry, "s_hat is not invertible");

  Rng rng(mix_seed(seed, 13));
  for (int t = 0; t < samples; ++t) {
    ComplexVector x = rng.cnormal_vector(n);
    const double bx = base.eval(x);
    if (bx > 0) x /= bx;
    ComplexVector src(2 * n), dst(2 * n);
    src << pair.t2 * x, x;
    dst << x, pair.t1 * x;
    const double res = mixed(ComplexVector(s_hat * src - dst));
    if (res > tol)
      throw Error(Err::SNotInterpolating,
                  "s_hat does not satisfy S(T2 x, x) = (x, T1 x)", res);
  }
  for (int t = 0; t < samples; ++t) {
    ComplexVector z = rng.cnormal_vector(2 * n);
    const double mz = mixed(z);
    if (mz < 1e-12) continue;
    z /= mz;
    const double fwd = std::abs(mixed(ComplexVector(s_hat * z)) - 1.0);
    const double bwd = std::abs(mixed(ComplexVector(s_inv * z)) - 1.0);
    if (std::max(fwd, bwd) > tol)
      throw Error(Err::SNotMixedIsometry,
                  "s_hat is not a mixed-norm isometry", std::max(fwd, bwd));
  }

  b.v1 = DilationOperatorSpec{OperatorKind::BanachV1, pair, std::nullopt,
                              s_hat, s_inv};
  b.v2 = b.v1;
  b.v2.kind = OperatorKind::BanachV2;
  b.ctx = make_mixed_context(base, b.a1, b.a2);
  return b;
}

/// Unit-ball sandwich for strict T: (1 - ||T||^2)^{1/2} ||x|| <= A_T(x)
/// <= ||x|| on samples. Finite-dimensional stand-in for completeness of
/// (X, A_T), which is not directly testable.
inline VerificationReport check_a_norm_envelope(
    const ANormOracle& a, double t_norm_base, int samples, double tol = 1e-10,
    std::uint64_t seed = kDefaultCheckSeed) {
  VerificationReport rep;
  rep.check = "a-norm-envelope";
  rep.params = {{"tol", tol},
                {"seed", seed},
                {"t_norm_base", t_norm_base}};
  const double lo = std::sqrt(std::max(0.0, 1.0 - t_norm_base * t_norm_base));
  Rng rng(mix_seed(seed, 14));
  for (int s = 0; s < samples; ++s) {
    const ComplexVector x = rng.cnormal_vector(a.base.dim);
    const double bx = a.base.eval(x);
    const double ax = a.norm.eval(x);
    const double res =
        std::max(lo * bx - ax, ax - bx);  // positive iff a bound fails
    ++rep.trials;
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = vector_to_json(x);
    }
  }
  rep.worst_residual = std::max(rep.worst_residual, 0.0);
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// Rescales a commuting pair so max(||T_i||_1, ||T_i||_2, ||T_i||_inf) =
/// target. By Riesz-Thorin interpolation the result is then a strict
/// contraction in every l_p, p in [1, inf], which the all-p identity checks
/// require.
inline ContractionPair make_lp_safe(const ContractionPair& pair,
                                    double target = 0.95) {
  if (!(target > 0.0 && target < 1.0))
    throw Error(Err::BadParams, "target must lie in (0, 1)");
  auto worst = [](const ComplexMatrix& t) {
    return std::max({operator_p_norm(t, 1.0).value,
                     operator_norm_2(t),
                     operator_p_norm(
                         t, std::numeric_limits<double>::infinity())
                         .value});
  };
  const double w1 = worst(pair.t1), w2 = worst(pair.t2);
  if (w1 <= 0 || w2 <= 0)
    throw Error(Err::BadParams, "zero operator cannot be rescaled");
  return validate_pair(ComplexMatrix(pair.t1 * (target / w1)),
                       ComplexMatrix(pair.t2 * (target / w2)),
                       /*require_strict=*/true, -1.0,
                       std::min(kDefaultStrictMargin, (1.0 - target) / 2.0));
}

// ---- norm-one search -------------------------------------------------------

struct NormOneCandidate {
  ComplexMatrix t;
  PNormEstimate norm_est;
  ANormStatus status;
};

struct NormOneSearchResult {
  std::vector<NormOneCandidate> found;
  int examined = 0;
  int rejected_norm = 0;
  int rejected_contractivity = 0;
  int rejected_status = 0;
  json certificate;
};

/// Randomized search for ||T||_p = 1 (within 1e-6) with A_T still passing
/// sampled norm verification. In finite dimension the operator norm is
/// attained, so every candidate carries a degenerate direction and the
/// search is expected to come back empty; outcomes are data, not assertions.
inline NormOneSearchResult search_norm_one_examples(Eigen::Index n, double p,
                                                    std::uint64_t seed,
                                                    int budget) {
  NormOneSearchResult out;
  out.certificate = {{"n", n}, {"p", p_to_json(p)}, {"seed", seed},
                     {"budget", budget}};
  Rng rng(mix_seed(seed, 15));
  const NormOracle base = lp_oracle(n, p);
  for (int b = 0; b < budget; ++b) {
    ++out.examined;
    ComplexMatrix t = rng.cnormal_matrix(n, n);
    const PNormEstimate first = operator_p_norm(t, p);
    if (first.value <= 1e-12) {
      ++out.rejected_norm;
      continue;
    }
    t /= first.value;
    const PNormEstimate est = operator_p_norm(t, p);
    if (std::abs(est.value - 1.0) > 1e-6) {
      ++out.rejected_norm;
      continue;
    }
    try {
      const ANormOracle a = a_norm_oracle(t, base, 64, mix_seed(seed, b));
      const ANormStatus st = check_a_norm(a, 500, 1e-10, mix_seed(seed, b, 1));
      if (st.verdict == ANormStatus::Verdict::verified_sampled) {
        out.found.push_back({t, est, st});
      } else {
        ++out.rejected_status;
      }
    } catch (const Error& e) {
      if (e.code != Err::NotContractiveInBase) throw;
      ++out.rejected_contractivity;
    }
  }
  return out;
}

/// Cross-engine agreement at p = 2: pushing a banach state through
/// diag(D1, D2) blockwise must reproduce the Hilbert minimal engine, word by
/// word.
inline VerificationReport check_banach_hilbert_agreement(
    const BanachDilation& bd, const DilationOperatorSpec& hv1,
    const DilationOperatorSpec& hv2, const DefectData& defects, int trials,
    int max_word_len, double tol = 1e-9,
    std::uint64_t seed = kDefaultCheckSeed) {
  VerificationReport rep;
  rep.check = "banach-hilbert-agreement";
  rep.trials = trials;
  rep.params = {{"tol", tol}, {"seed", seed}, {"max_word_len", max_word_len}};
  const Eigen::Index n = bd.v1.pair.n;
  const DilationOperatorSpec bspecs[2] = {bd.v1, bd.v2};
  const DilationOperatorSpec hspecs[2] = {hv1, hv2};
  Rng rng(mix_seed(seed, 16));
  for (int t = 0; t < trials; ++t) {
    ComplexVector h = rng.cnormal_vector(n);
    if (h.norm() > 0) h /= h.norm();
    const auto len = rng.uniform_index(max_word_len + 1);
    std::vector<int> w(len);
    for (auto& c : w) c = 1 + static_cast<int>(rng.uniform_index(2));
    const DilationState bs =
        apply_word(std::span<const DilationOperatorSpec>(bspecs, 2),
                   std::span<const int>(w), embed(bd.v1, h));
    const DilationState hs =
        apply_word(std::span<const DilationOperatorSpec>(hspecs, 2),
                   std::span<const int>(w), embed(hv1, h));
    DilationState mapped = bs;
    for (auto& blk : mapped.blocks) {
      ComplexVector m(2 * n);
      m << defects.d1 * blk.head(n), defects.d2 * blk.tail(n);
      blk = m;
    }
    const double res = state_norm(state_sub(mapped, hs));
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = {{"word", w}, {"h", vector_to_json(h)}};
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

}  // namespace andolab
