#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ando.hpp"

namespace andolab {

// Finitely supported elements of H (+) l2(B) and the block-shift isometries
// acting on them. Finite support makes every identity exact up to float
// rounding: no truncation enters any check.
//
// Block layouts (n = dim H):
//   minimal / banach : B = H (+) H           (block_dim 2n)
//   schaffer         : B = H                 (block_dim n)
//   naive            : two stacked H-slots   (block_dim 2n)
//   classical4       : B = H^4               (block_dim 4n)

enum class OperatorKind {
  MinimalV1,
  MinimalV2,
  NaiveV1,
  NaiveV2,
  Classical4V1,
  Classical4V2,
  Schaffer1,
  Schaffer2,
  BanachV1,
  BanachV2,
};

inline const char* kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::MinimalV1: return "minimal-V1";
    case OperatorKind::MinimalV2: return "minimal-V2";
    case OperatorKind::NaiveV1: return "naive-V1";
    case OperatorKind::NaiveV2: return "naive-V2";
    case OperatorKind::Classical4V1: return "classical4-V1";
    case OperatorKind::Classical4V2: return "classical4-V2";
    case OperatorKind::Schaffer1: return "schaffer-1";
    case OperatorKind::Schaffer2: return "schaffer-2";
    case OperatorKind::BanachV1: return "banach-V1";
    case OperatorKind::BanachV2: return "banach-V2";
  }
  return "unknown";
}

inline Eigen::Index block_dim_for(OperatorKind k, Eigen::Index n) {
  switch (k) {
    case OperatorKind::Schaffer1:
    case OperatorKind::Schaffer2:
      return n;
    case OperatorKind::Classical4V1:
    case OperatorKind::Classical4V2:
      return 4 * n;
    default:
      return 2 * n;
  }
}

inline bool kind_needs_unitary(OperatorKind k) {
  switch (k) {
    case OperatorKind::MinimalV1:
    case OperatorKind::MinimalV2:
    case OperatorKind::Classical4V1:
    case OperatorKind::Classical4V2:
    case OperatorKind::BanachV1:
    case OperatorKind::BanachV2:
      return true;
    default:
      return false;
  }
}

/// Finitely supported state: head in C^n plus an ordered finite list of
/// blocks in C^block_dim. Canonical form trims trailing blocks that are
/// exactly zero; near-zero blocks are kept so norms never change silently.
struct DilationState {
  ComplexVector head;
  std::vector<ComplexVector> blocks;
  Eigen::Index block_dim = 0;

  Eigen::Index depth() const {
    return static_cast<Eigen::Index>(blocks.size());
  }

  void trim() {
    while (!blocks.empty() && blocks.back().isZero(0.0)) blocks.pop_back();
  }
};

/// One dilation operator: its kind, the pair it dilates, defect data when the
/// kind uses D-multiplications, and the block unitary with its cached inverse
/// (the adjoint for Hilbert kinds, a verified matrix inverse for banach).
struct DilationOperatorSpec {
  OperatorKind kind = OperatorKind::MinimalV1;
  ContractionPair pair;
  std::optional<DefectData> defects;
  ComplexMatrix unitary;          // empty when the kind does not use one
  ComplexMatrix unitary_inverse;  // cached
};

inline DilationState embed(const ComplexVector& h, Eigen::Index block_dim) {
  DilationState s;
  s.head = h;
  s.block_dim = block_dim;
  return s;
}

inline DilationState embed(const DilationOperatorSpec& spec,
                           const ComplexVector& h) {
  if (h.size() != spec.pair.n)
    throw Error(Err::DimMismatch, "embed: vector dimension != n");
  return embed(h, block_dim_for(spec.kind, spec.pair.n));
}

inline ComplexVector project_head(const DilationState& s) { return s.head; }

namespace detail {

inline void require_unitary_present(const DilationOperatorSpec& spec,
                                    Eigen::Index dim) {
  if (spec.unitary.rows() != dim || spec.unitary.cols() != dim ||
      spec.unitary_inverse.rows() != dim)
    throw Error(Err::MissingUnitary,
                std::string("operator kind ") + kind_name(spec.kind) +
                    " requires a " + std::to_string(dim) + "-dim unitary");
}

}  // namespace detail

inline DilationState apply_op(const DilationOperatorSpec& spec,
                              const DilationState& x) {
  const Eigen::Index n = spec.pair.n;
  const Eigen::Index bd = block_dim_for(spec.kind, n);
  if (x.head.size() != n || x.block_dim != bd)
    throw Error(Err::DimMismatch, "state layout does not match operator kind");
  const Eigen::Index m = x.depth();
  const auto& blocks = x.blocks;

  DilationState out;
  out.block_dim = bd;
  out.blocks.reserve(m + 1);

  const ComplexVector zn = ComplexVector::Zero(n);
  auto half = [&](Eigen::Index k, bool second) -> ComplexVector {
    if (k >= m) return zn;
    return second ? blocks[k].tail(n) : blocks[k].head(n);
  };

  switch (spec.kind) {
    case OperatorKind::MinimalV1:
    case OperatorKind::BanachV1: {
      detail::require_unitary_present(spec, 2 * n);
      const bool hilbert = spec.kind == OperatorKind::MinimalV1;
      if (hilbert && !spec.defects)
        throw Error(Err::BadParams, "minimal kind needs defect data");
      out.head = spec.pair.t1 * x.head;
      ComplexVector buf(2 * n);
      buf << (hilbert ? ComplexVector(spec.defects->d1 * x.head) : x.head),
          half(0, true);
      out.blocks.emplace_back(spec.unitary * buf);
      for (Eigen::Index k = 0; k < m; ++k) {
        buf << half(k, false), half(k + 1, true);
        out.blocks.emplace_back(spec.unitary * buf);
      }
      break;
    }
    case OperatorKind::MinimalV2:
    case OperatorKind::BanachV2: {
      detail::require_unitary_present(spec, 2 * n);
      const bool hilbert = spec.kind == OperatorKind::MinimalV2;
      if (hilbert && !spec.defects)
        throw Error(Err::BadParams, "minimal kind needs defect data");
      out.head = spec.pair.t2 * x.head;
      std::vector<ComplexVector> primed(m);
      for (Eigen::Index k = 0; k < m; ++k)
        primed[k] = spec.unitary_inverse * blocks[k];
      auto phalf = [&](Eigen::Index k, bool second) -> ComplexVector {
        if (k >= m) return zn;
        return second ? primed[k].tail(n) : primed[k].head(n);
      };
      ComplexVector buf(2 * n);
      buf << phalf(0, false),
          (hilbert ? ComplexVector(spec.defects->d2 * x.head) : x.head);
      out.blocks.emplace_back(buf);
      for (Eigen::Index k = 0; k < m; ++k) {
        buf << phalf(k + 1, false), phalf(k, true);
        out.blocks.emplace_back(buf);
      }
      break;
    }
    case OperatorKind::Schaffer1:
    case OperatorKind::Schaffer2: {
      if (!spec.defects)
        throw Error(Err::BadParams, "schaffer kind needs defect data");
      const bool first = spec.kind == OperatorKind::Schaffer1;
      const ComplexMatrix& t = first ? spec.pair.t1 : spec.pair.t2;
      const ComplexMatrix& d = first ? spec.defects->d1 : spec.defects->d2;
      out.head = t * x.head;
      out.blocks.emplace_back(d * x.head);
      out.blocks.insert(out.blocks.end(), blocks.begin(), blocks.end());
      break;
    }
    case OperatorKind::NaiveV1:
    case OperatorKind::NaiveV2: {
      if (!spec.defects)
        throw Error(Err::BadParams, "naive kind needs defect data");
      const bool first = spec.kind == OperatorKind::NaiveV1;
      const ComplexMatrix& t = first ? spec.pair.t1 : spec.pair.t2;
      const ComplexMatrix& d = first ? spec.defects->d1 : spec.defects->d2;
      out.head = t * x.head;
      ComplexVector buf(2 * n);
      buf << d * x.head, zn;
      out.blocks.emplace_back(std::move(buf));
      out.blocks.insert(out.blocks.end(), blocks.begin(), blocks.end());
      break;
    }
    case OperatorKind::Classical4V1: {
      detail::require_unitary_present(spec, 4 * n);
      if (!spec.defects)
        throw Error(Err::BadParams, "classical4 kind needs defect data");
      out.head = spec.pair.t1 * x.head;
      const ComplexVector z2 = ComplexVector::Zero(2 * n);
      auto pairslot = [&](Eigen::Index k, bool hi) -> ComplexVector {
        if (k >= m) return z2;
        return hi ? blocks[k].tail(2 * n) : blocks[k].head(2 * n);
      };
      ComplexVector buf(4 * n);
      buf << spec.defects->d1 * x.head, zn, pairslot(0, true);
      out.blocks.emplace_back(spec.unitary * buf);
      for (Eigen::Index k = 0; k < m; ++k) {
        buf << pairslot(k, false), pairslot(k + 1, true);
        out.blocks.emplace_back(spec.unitary * buf);
      }
      break;
    }
    case OperatorKind::Classical4V2: {
      detail::require_unitary_present(spec, 4 * n);
      if (!spec.defects)
        throw Error(Err::BadParams, "classical4 kind needs defect data");
      out.head = spec.pair.t2 * x.head;
      std::vector<ComplexVector> primed(m);
      for (Eigen::Index k = 0; k < m; ++k)
        primed[k] = spec.unitary_inverse * blocks[k];
      const ComplexVector z2 = ComplexVector::Zero(2 * n);
      auto ppair = [&](Eigen::Index k, bool hi) -> ComplexVector {
        if (k >= m) return z2;
        return hi ? primed[k].tail(2 * n) : primed[k].head(2 * n);
      };
      ComplexVector buf(4 * n);
      buf << ppair(0, false), spec.defects->d2 * x.head, zn;
      out.blocks.emplace_back(buf);
      for (Eigen::Index k = 0; k < m; ++k) {
        buf << ppair(k + 1, false), ppair(k, true);
        out.blocks.emplace_back(buf);
      }
      break;
    }
  }
  out.trim();
  return out;
}

/// Left-to-right composition: entries of `word` are 1-based indices into
/// `specs`, applied in sequence. The empty word is the identity.
inline DilationState apply_word(std::span<const DilationOperatorSpec> specs,
                                std::span<const int> word,
                                const DilationState& x) {
  DilationState cur = x;
  for (int idx : word) {
    if (idx < 1 || static_cast<std::size_t>(idx) > specs.size())
      throw Error(Err::BadParams, "word index out of range");
    cur = apply_op(specs[static_cast<std::size_t>(idx - 1)], cur);
  }
  return cur;
}

/// Hilbert norm: l2 aggregation of head and all blocks (exact for finite
/// support).
inline double state_norm(const DilationState& s) {
  double sq = s.head.squaredNorm();
  for (const auto& b : s.blocks) sq += b.squaredNorm();
  return std::sqrt(sq);
}

/// Norms for the normed-space engine: the head is measured with `base`, a
/// block (x1, x2) contributes first(x1)^2 + second(x2)^2.
struct BlockNormContext {
  std::function<double(const ComplexVector&)> base, first, second;
};

inline double state_norm(const DilationState& s,
                         const BlockNormContext& ctx) {
  if (s.block_dim % 2 != 0)
    throw Error(Err::DimMismatch, "mixed norm needs paired blocks");
  const Eigen::Index n = s.block_dim / 2;
  double sq = std::pow(ctx.base(s.head), 2);
  for (const auto& b : s.blocks) {
    sq += std::pow(ctx.first(b.head(n)), 2);
    sq += std::pow(ctx.second(b.tail(n)), 2);
  }
  return std::sqrt(sq);
}

inline DilationState state_sub(const DilationState& a,
                               const DilationState& b) {
  if (a.block_dim != b.block_dim || a.head.size() != b.head.size())
    throw Error(Err::DimMismatch, "state layouts differ");
  DilationState out;
  out.block_dim = a.block_dim;
  out.head = a.head - b.head;
  const Eigen::Index m = std::max(a.depth(), b.depth());
  const ComplexVector z = ComplexVector::Zero(a.block_dim);
  for (Eigen::Index k = 0; k < m; ++k) {
    const ComplexVector& xa = k < a.depth() ? a.blocks[k] : z;
    const ComplexVector& xb = k < b.depth() ? b.blocks[k] : z;
    out.blocks.emplace_back(xa - xb);
  }
  out.trim();
  return out;
}

inline DilationState random_state(Rng& rng, Eigen::Index n,
                                  Eigen::Index block_dim,
                                  Eigen::Index max_depth) {
  DilationState s;
  s.block_dim = block_dim;
  s.head = rng.cnormal_vector(n);
  const auto depth = rng.uniform_index(static_cast<std::uint64_t>(max_depth) + 1);
  for (std::uint64_t k = 0; k < depth; ++k)
    s.blocks.emplace_back(rng.cnormal_vector(block_dim));
  return s;
}

// ---- spec factories -------------------------------------------------------

namespace detail {

inline void check_l2_unitary(const ComplexMatrix& u, const char* what) {
  const Eigen::Index d = u.rows();
  const double res = operator_norm_2(
      ComplexMatrix(u.adjoint() * u - ComplexMatrix::Identity(d, d)));
  if (res > 1e-10)
    throw Error(Err::BadParams,
                std::string(what) + ": unitarity residual too large", res);
}

}  // namespace detail

inline std::pair<DilationOperatorSpec, DilationOperatorSpec>
make_minimal_specs(const ContractionPair& pair, const DefectData& defects,
                   const AndoUnitary& s) {
  if (s.s.rows() != 2 * pair.n)
    throw Error(Err::DimMismatch, "S must be 2n x 2n");
  detail::check_l2_unitary(s.s, "minimal specs");
  DilationOperatorSpec v1{OperatorKind::MinimalV1, pair, defects, s.s,
                          s.s.adjoint()};
  DilationOperatorSpec v2 = v1;
  v2.kind = OperatorKind::MinimalV2;
  return {v1, v2};
}

inline std::pair<DilationOperatorSpec, DilationOperatorSpec>
make_schaffer_specs(const ContractionPair& pair, const DefectData& defects) {
  DilationOperatorSpec v1{OperatorKind::Schaffer1, pair, defects, {}, {}};
  DilationOperatorSpec v2 = v1;
  v2.kind = OperatorKind::Schaffer2;
  return {v1, v2};
}

inline std::pair<DilationOperatorSpec, DilationOperatorSpec>
make_naive_specs(const ContractionPair& pair, const DefectData& defects) {
  DilationOperatorSpec v1{OperatorKind::NaiveV1, pair, defects, {}, {}};
  DilationOperatorSpec v2 = v1;
  v2.kind = OperatorKind::NaiveV2;
  return {v1, v2};
}

/// Four-slot operators. `u4` must be the classical unitary in its printed
/// orientation, U(D1 T2 h, 0, D2 h, 0) = (D2 T1 h, 0, D1 h, 0); the engine
/// runs the two-slot pattern on slot pairs (1,2)/(3,4), which commutes with
/// the pair-swapped unitary P.U4 satisfying
/// (P.U4)(D1 T2 h, 0, D2 h, 0) = (D1 h, 0, D2 T1 h, 0).
inline std::pair<DilationOperatorSpec, DilationOperatorSpec>
make_classical4_specs(const ContractionPair& pair, const DefectData& defects,
                      const AndoUnitary& u4) {
  if (u4.s.rows() != 4 * pair.n)
    throw Error(Err::DimMismatch, "U4 must be 4n x 4n");
  detail::check_l2_unitary(u4.s, "classical4 specs");
  const ComplexMatrix pattern = slot_pair_swap(pair.n) * u4.s;
  DilationOperatorSpec v1{OperatorKind::Classical4V1, pair, defects, pattern,
                          pattern.adjoint()};
  DilationOperatorSpec v2 = v1;
  v2.kind = OperatorKind::Classical4V2;
  return {v1, v2};
}

}  // namespace andolab
