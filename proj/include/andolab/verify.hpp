#pragma once

#include <algorithm>
#include <optional>

#include "io.hpp"

namespace andolab {

// Executable versions of the proved statements: isometry, commutation, the
// compression identity, orbit-rank minimality, plus the sub-identities the
// proofs lean on. Checks never throw on failure; they report.

struct VerificationReport {
  std::string check;
  bool pass = false;
  double worst_residual = 0.0;
  int trials = 0;
  json params = json::object();
  json witness;  // null when no witness is recorded

  json to_json() const {
    return json{{"check", check},
                {"pass", pass},
                {"residual", worst_residual},
                {"trials", trials},
                {"params", params},
                {"witness", witness.is_null() ? json() : witness}};
  }
};

inline constexpr std::uint64_t kDefaultCheckSeed = 0x414e444fULL;

namespace detail {

inline DilationState unit_random_state(Rng& rng, Eigen::Index n,
                                       Eigen::Index bd, Eigen::Index depth,
                                       const BlockNormContext* ctx) {
  DilationState s = random_state(rng, n, bd, depth);
  const double nn = ctx ? state_norm(s, *ctx) : state_norm(s);
  if (nn > 0) {
    s.head /= nn;
    for (auto& b : s.blocks) b /= nn;
  }
  return s;
}

}  // namespace detail

/// ||V x|| = ||x|| over random unit states of support depth <= max_depth.
/// A BlockNormContext switches the comparison to the mixed normed-space norm.
inline VerificationReport check_isometry(
    const DilationOperatorSpec& spec, int trials, Eigen::Index max_depth,
    double tol, std::uint64_t seed = kDefaultCheckSeed,
    const BlockNormContext* ctx = nullptr) {
  VerificationReport rep;
  rep.check = std::string("isometry/") + kind_name(spec.kind);
  rep.trials = trials;
  rep.params = {{"max_depth", max_depth}, {"tol", tol}, {"seed", seed}};
  Rng rng(mix_seed(seed, 1));
  const Eigen::Index n = spec.pair.n;
  const Eigen::Index bd = block_dim_for(spec.kind, n);
  for (int t = 0; t < trials; ++t) {
    const DilationState x =
        detail::unit_random_state(rng, n, bd, max_depth, ctx);
    const DilationState y = apply_op(spec, x);
    const double ny = ctx ? state_norm(y, *ctx) : state_norm(y);
    const double res = std::abs(ny - 1.0);
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = state_to_json(x);
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// V1 V2 x = V2 V1 x statewise over random unit states.
inline VerificationReport check_commutation(
    const DilationOperatorSpec& spec1, const DilationOperatorSpec& spec2,
    int trials, Eigen::Index max_depth, double tol,
    std::uint64_t seed = kDefaultCheckSeed,
    const BlockNormContext* ctx = nullptr) {
  VerificationReport rep;
  rep.check = std::string("commutation/") + kind_name(spec1.kind) + "+" +
              kind_name(spec2.kind);
  rep.trials = trials;
  rep.params = {{"max_depth", max_depth}, {"tol", tol}, {"seed", seed}};
  const Eigen::Index n = spec1.pair.n;
  const Eigen::Index bd = block_dim_for(spec1.kind, n);
  if (bd != block_dim_for(spec2.kind, n))
    throw Error(Err::DimMismatch, "specs act on different block spaces");
  Rng rng(mix_seed(seed, 2));
  for (int t = 0; t < trials; ++t) {
    const DilationState x =
        detail::unit_random_state(rng, n, bd, max_depth, ctx);
    const DilationState a = apply_op(spec1, apply_op(spec2, x));
    const DilationState b = apply_op(spec2, apply_op(spec1, x));
    const DilationState d = state_sub(a, b);
    const double res = ctx ? state_norm(d, *ctx) : state_norm(d);
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = state_to_json(x);
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// P_H V1^{s1} V2^{s2} h = T1^{s1} T2^{s2} h for all basis vectors and all
/// s1+s2 <= max_total_degree, plus random interleavings of each multidegree
/// (ordering is immaterial once commutation holds; asserted, not assumed).
/// The reference side is computed by plain matrix-vector powers.
inline VerificationReport check_dilation_identity(
    const DilationOperatorSpec& spec1, const DilationOperatorSpec& spec2,
    int max_total_degree, double tol, std::uint64_t seed = kDefaultCheckSeed,
    int interleavings_per_degree = 10,
    const std::function<double(const ComplexVector&)>* head_norm = nullptr) {
  VerificationReport rep;
  rep.check = std::string("dilation-identity/") + kind_name(spec1.kind) +
              "+" + kind_name(spec2.kind);
  rep.params = {{"max_total_degree", max_total_degree},
                {"tol", tol},
                {"seed", seed},
                {"interleavings", interleavings_per_degree}};
  const ContractionPair& pair = spec1.pair;
  const Eigen::Index n = pair.n;
  const DilationOperatorSpec specs[2] = {spec1, spec2};
  Rng rng(mix_seed(seed, 3));
  auto head_res = [&](const ComplexVector& a, const ComplexVector& b) {
    return head_norm ? (*head_norm)(ComplexVector(a - b))
                     : (a - b).norm();
  };
  int trials = 0;
  for (int s1 = 0; s1 <= max_total_degree; ++s1) {
    for (int s2 = 0; s1 + s2 <= max_total_degree; ++s2) {
      std::vector<std::vector<int>> words;
      std::vector<int> canonical;
      canonical.insert(canonical.end(), s2, 2);
      canonical.insert(canonical.end(), s1, 1);
      words.push_back(canonical);
      for (int r = 0; r < interleavings_per_degree && s1 + s2 > 1; ++r) {
        std::vector<int> w = canonical;
        for (std::size_t i = w.size(); i > 1; --i)
          std::swap(w[i - 1], w[rng.uniform_index(i)]);
        words.push_back(std::move(w));
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        ComplexVector ref = ComplexVector::Zero(n);
        ref(j) = 1.0;
        for (int k = 0; k < s2; ++k) ref = pair.t2 * ref;
        for (int k = 0; k < s1; ++k) ref = pair.t1 * ref;
        ComplexVector e = ComplexVector::Zero(n);
        e(j) = 1.0;
        for (const auto& w : words) {
          const DilationState out =
              apply_word(std::span<const DilationOperatorSpec>(specs, 2),
                         std::span<const int>(w), embed(spec1, e));
          const double res = head_res(project_head(out), ref);
          ++trials;
          if (res > rep.worst_residual) {
            rep.worst_residual = res;
            rep.witness = {{"s1", s1}, {"s2", s2}, {"basis", j}};
          }
        }
      }
    }
  }
  rep.trials = trials;
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// One-variable version: P_H V^s h = T^s h for s <= max_degree.
inline VerificationReport check_dilation_identity_single(
    const DilationOperatorSpec& spec, int max_degree, double tol) {
  VerificationReport rep;
  rep.check = std::string("dilation-identity/") + kind_name(spec.kind);
  rep.params = {{"max_degree", max_degree}, {"tol", tol}};
  const Eigen::Index n = spec.pair.n;
  const bool second = spec.kind == OperatorKind::Schaffer2 ||
                      spec.kind == OperatorKind::MinimalV2 ||
                      spec.kind == OperatorKind::BanachV2 ||
                      spec.kind == OperatorKind::NaiveV2 ||
                      spec.kind == OperatorKind::Classical4V2;
  const ComplexMatrix& t = second ? spec.pair.t2 : spec.pair.t1;
  int trials = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexVector e = ComplexVector::Zero(n);
    e(j) = 1.0;
    DilationState st = embed(spec, e);
    ComplexVector ref = e;
    for (int s = 0; s <= max_degree; ++s) {
      const double res = (project_head(st) - ref).norm();
      ++trials;
      if (res > rep.worst_residual) {
        rep.worst_residual = res;
        rep.witness = {{"s", s}, {"basis", j}};
      }
      if (s < max_degree) {
        st = apply_op(spec, st);
        ref = t * ref;
      }
    }
  }
  rep.trials = trials;
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

namespace detail {

inline ComplexVector flatten_state(const DilationState& s,
                                   Eigen::Index depth_m) {
  const Eigen::Index n = s.head.size();
  ComplexVector flat = ComplexVector::Zero(n + depth_m * s.block_dim);
  flat.head(n) = s.head;
  for (Eigen::Index k = 0; k < std::min(depth_m, s.depth()); ++k)
    flat.segment(n + k * s.block_dim, s.block_dim) = s.blocks[k];
  return flat;
}

}  // namespace detail

/// Orbit-rank proxy for minimality: the flattened span of
/// {V1^{s1} V2^{s2} e_j : s1+s2 <= degree_cap} must fill the whole truncated
/// space (rank n(1 + (bd/n) m)) for a minimal family.
inline VerificationReport check_minimality(
    const DilationOperatorSpec& spec1, const DilationOperatorSpec& spec2,
    Eigen::Index depth_m, int degree_cap, double rank_tol = 1e-8) {
  VerificationReport rep;
  rep.check = std::string("minimality/") + kind_name(spec1.kind) + "+" +
              kind_name(spec2.kind);
  const Eigen::Index n = spec1.pair.n;
  const Eigen::Index bd = block_dim_for(spec1.kind, n);
  const Eigen::Index flat_dim = n + depth_m * bd;
  std::vector<ComplexVector> cols;
  const DilationOperatorSpec specs[2] = {spec1, spec2};
  for (int s1 = 0; s1 <= degree_cap; ++s1)
    for (int s2 = 0; s1 + s2 <= degree_cap; ++s2)
      for (Eigen::Index j = 0; j < n; ++j) {
        ComplexVector e = ComplexVector::Zero(n);
        e(j) = 1.0;
        std::vector<int> w;
        w.insert(w.end(), s2, 2);
        w.insert(w.end(), s1, 1);
        cols.push_back(detail::flatten_state(
            apply_word(std::span<const DilationOperatorSpec>(specs, 2),
                       std::span<const int>(w), embed(spec1, e)),
            depth_m));
      }
  ComplexMatrix orbit(flat_dim, static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index c = 0; c < orbit.cols(); ++c) orbit.col(c) = cols[c];
  const auto sv = singular_values(orbit);
  const Eigen::Index achieved = numerical_rank(orbit, rank_tol);
  rep.trials = static_cast<int>(cols.size());
  rep.worst_residual = 0.0;
  rep.params = {{"depth", depth_m},
                {"degree_cap", degree_cap},
                {"rank_tol", rank_tol},
                {"achieved_rank", achieved},
                {"expected_rank", flat_dim},
                {"smallest_retained_sv",
                 achieved > 0 ? sv[static_cast<std::size_t>(achieved - 1)]
                              : 0.0}};
  rep.pass = achieved == flat_dim;
  return rep;
}

inline VerificationReport check_minimality_single(
    const DilationOperatorSpec& spec, Eigen::Index depth_m, int degree_cap,
    double rank_tol = 1e-8) {
  VerificationReport rep;
  rep.check = std::string("minimality/") + kind_name(spec.kind);
  const Eigen::Index n = spec.pair.n;
  const Eigen::Index bd = block_dim_for(spec.kind, n);
  const Eigen::Index flat_dim = n + depth_m * bd;
  std::vector<ComplexVector> cols;
  for (int s = 0; s <= degree_cap; ++s)
    for (Eigen::Index j = 0; j < n; ++j) {
      ComplexVector e = ComplexVector::Zero(n);
      e(j) = 1.0;
      DilationState st = embed(spec, e);
      for (int k = 0; k < s; ++k) st = apply_op(spec, st);
      cols.push_back(detail::flatten_state(st, depth_m));
    }
  ComplexMatrix orbit(flat_dim, static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index c = 0; c < orbit.cols(); ++c) orbit.col(c) = cols[c];
  const auto sv = singular_values(orbit);
  const Eigen::Index achieved = numerical_rank(orbit, rank_tol);
  rep.trials = static_cast<int>(cols.size());
  rep.params = {{"depth", depth_m},
                {"degree_cap", degree_cap},
                {"rank_tol", rank_tol},
                {"achieved_rank", achieved},
                {"expected_rank", flat_dim},
                {"smallest_retained_sv",
                 achieved > 0 ? sv[static_cast<std::size_t>(achieved - 1)]
                              : 0.0}};
  rep.pass = achieved == flat_dim;
  return rep;
}

/// Residual of S (D1 T2 h, D2 h) = (D1 h, D2 T1 h) on sampled h, plus the
/// matrix-level interpolation residual.
inline VerificationReport check_S_interpolation(
    const ContractionPair& pair, const DefectData& defects,
    const ComplexMatrix& s, int trials, double tol,
    std::uint64_t seed = kDefaultCheckSeed) {
  VerificationReport rep;
  rep.check = "s-interpolation";
  rep.trials = trials;
  const Eigen::Index n = pair.n;
  ComplexMatrix g1(2 * n, n), g2(2 * n, n);
  g1 << defects.d1, defects.d2 * pair.t1;
  g2 << defects.d1 * pair.t2, defects.d2;
  rep.params = {{"tol", tol},
                {"seed", seed},
                {"matrix_residual", operator_norm_2(ComplexMatrix(s * g2 - g1))}};
  Rng rng(mix_seed(seed, 4));
  for (int t = 0; t < trials; ++t) {
    ComplexVector h = rng.cnormal_vector(n);
    const double nh = h.norm();
    if (nh > 0) h /= nh;
    const double res = (s * (g2 * h) - g1 * h).norm();
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = vector_to_json(h);
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// ||g1 h|| = ||D_T h|| = ||g2 h|| on sampled h: the isometry identity that
/// makes the defect subspaces carriers of the construction.
inline VerificationReport check_w_isometry(const ContractionPair& pair,
                                           const DefectData& defects,
                                           int trials, double tol,
                                           std::uint64_t seed =
                                               kDefaultCheckSeed) {
  VerificationReport rep;
  rep.check = "w-isometry";
  rep.trials = trials;
  rep.params = {{"tol", tol}, {"seed", seed}};
  const Eigen::Index n = pair.n;
  ComplexMatrix g1(2 * n, n), g2(2 * n, n);
  g1 << defects.d1, defects.d2 * pair.t1;
  g2 << defects.d1 * pair.t2, defects.d2;
  Rng rng(mix_seed(seed, 5));
  for (int t = 0; t < trials; ++t) {
    ComplexVector h = rng.cnormal_vector(n);
    const double nh = h.norm();
    if (nh > 0) h /= nh;
    const double ref = (defects.dt * h).norm();
    const double res = std::max(std::abs((g1 * h).norm() - ref),
                                std::abs((g2 * h).norm() - ref));
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = vector_to_json(h);
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

/// Head and first block of both composition orders on embedded vectors:
/// V1 V2 h = (T1 T2 h, S(D1 T2 h, D2 h), 0, ...) and
/// V2 V1 h = (T1 T2 h, (D1 h, D2 T1 h), 0, ...).
inline VerificationReport check_first_block_identity(
    const DilationOperatorSpec& spec1, const DilationOperatorSpec& spec2,
    int trials, double tol, std::uint64_t seed = kDefaultCheckSeed) {
  VerificationReport rep;
  rep.check = "first-block-identity";
  rep.trials = trials;
  rep.params = {{"tol", tol}, {"seed", seed}};
  const ContractionPair& pair = spec1.pair;
  const DefectData& defects = *spec1.defects;
  const Eigen::Index n = pair.n;
  Rng rng(mix_seed(seed, 6));
  for (int t = 0; t < trials; ++t) {
    ComplexVector h = rng.cnormal_vector(n);
    const double nh = h.norm();
    if (nh > 0) h /= nh;
    const ComplexVector head_ref = pair.t1 * (pair.t2 * h);
    ComplexVector fwd_ref(2 * n);
    fwd_ref << defects.d1 * (pair.t2 * h), defects.d2 * h;
    fwd_ref = spec1.unitary * fwd_ref;
    ComplexVector rev_ref(2 * n);
    rev_ref << defects.d1 * h, defects.d2 * (pair.t1 * h);

    const DilationState fwd = apply_op(spec1, apply_op(spec2, embed(spec1, h)));
    const DilationState rev = apply_op(spec2, apply_op(spec1, embed(spec1, h)));
    double res = std::max((project_head(fwd) - head_ref).norm(),
                          (project_head(rev) - head_ref).norm());
    const ComplexVector zb = ComplexVector::Zero(2 * n);
    const ComplexVector& fb = fwd.depth() > 0 ? fwd.blocks[0] : zb;
    const ComplexVector& rb = rev.depth() > 0 ? rev.blocks[0] : zb;
    res = std::max({res, (fb - fwd_ref).norm(), (rb - rev_ref).norm(),
                    (fb - rb).norm()});
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.witness = vector_to_json(h);
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

}  // namespace andolab
