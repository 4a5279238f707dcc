#include <catch2/catch_amalgamated.hpp>

#include <andolab/ando.hpp>

using namespace andolab;

namespace {

struct Built {
  ContractionPair pair;
  DefectData defects;
  DefectSubspaces subs;
  AndoUnitary s;
};

Built build_all(const ContractionPair& pair) {
  Built b{pair, defect_data(pair), {}, {}};
  b.subs = build_subspaces(b.pair, b.defects);
  b.s = build_S(b.pair, b.subs);
  return b;
}

ComplexMatrix scalar(double v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("subspace generators: zero pair and scalar 1/2 values") {
  const Built z = build_all(
      validate_pair(ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1)));
  CHECK(std::abs(z.subs.g1(0, 0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(z.subs.g1(1, 0)) < 1e-15);
  CHECK(std::abs(z.subs.g2(0, 0)) < 1e-15);
  CHECK(std::abs(z.subs.g2(1, 0) - Complex(1.0)) < 1e-15);

  const double rt3h = 0.8660254037844386;  // sqrt(3)/2
  const Built s = build_all(validate_pair(scalar(0.5), scalar(0.5)));
  CHECK(std::abs(s.subs.g1(0, 0) - Complex(rt3h)) < 1e-12);
  CHECK(std::abs(s.subs.g1(1, 0) - Complex(rt3h * 0.5)) < 1e-12);
  CHECK(std::abs(s.subs.g2(0, 0) - Complex(rt3h * 0.5)) < 1e-12);
  CHECK(std::abs(s.subs.g2(1, 0) - Complex(rt3h)) < 1e-12);
}

TEST_CASE("subspace invariants on random strict pairs") {
  for (std::uint64_t seed : {1u, 5u, 9u}) {
    const Eigen::Index n = 2 + seed % 3;
    const ContractionPair pair = generate_commuting_pair(
        seed, n, static_cast<PairMethod>(seed % 3), 0.9, 0.85);
    const Built b = build_all(pair);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    CHECK(operator_norm_2(ComplexMatrix(b.subs.b1.adjoint() * b.subs.b1 -
                                        id)) < 1e-12);
    CHECK(operator_norm_2(ComplexMatrix(b.subs.b2.adjoint() * b.subs.b2 -
                                        id)) < 1e-12);
    CHECK(operator_norm_2(ComplexMatrix(b.subs.b1.adjoint() * b.subs.c1)) <
          1e-12);
    CHECK(operator_norm_2(ComplexMatrix(b.subs.b2.adjoint() * b.subs.c2)) <
          1e-12);
    // trivial intersection: [g1 | g2] keeps full rank 2n
    CHECK(b.subs.joint_min_sv > 1e-8);

    // W-isometry: ||g1 h|| = ||D_T h|| = ||g2 h|| over sampled h, plus the
    // two-sided energy identity computed from raw norms
    Rng rng(seed);
    for (int t = 0; t < 200; ++t) {
      const ComplexVector h = rng.cnormal_vector(n);
      const double ref = (b.defects.dt * h).norm();
      CHECK(std::abs((b.subs.g1 * h).norm() - ref) <= 1e-10 * ref);
      CHECK(std::abs((b.subs.g2 * h).norm() - ref) <= 1e-10 * ref);
      const double lhs = (b.subs.g1 * h).squaredNorm();
      const double rhs =
          h.squaredNorm() - (pair.t1 * (pair.t2 * h)).squaredNorm();
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("build_subspaces rejects near-boundary pairs") {
  const double r = 1.0 - 1e-13;
  ComplexMatrix t = r * ComplexMatrix::Identity(2, 2);
  const ContractionPair pair = validate_pair(t, t, true, -1.0, 1e-14);
  const DefectData d = defect_data(pair);
  CHECK(d.margin1 < 1e-6);
  CHECK_THROWS_MATCHES(build_subspaces(pair, d), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Err::DegenerateDefect;
                       }));
}

TEST_CASE("build_S on the zero pair is the swap") {
  const Built z = build_all(
      validate_pair(ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1)));
  ComplexMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  CHECK(operator_norm_2(ComplexMatrix(z.s.s - swap)) < 1e-12);
}

TEST_CASE("build_S: scalar pair interpolates, random pairs hit residuals") {
  const Built s = build_all(validate_pair(scalar(0.5), scalar(0.5)));
  CHECK(operator_norm_2(ComplexMatrix(s.s.s * s.subs.g2 - s.subs.g1)) <
        1e-12);
  CHECK(s.s.unitarity_residual <= 1e-12);

  for (std::uint64_t seed : {2u, 4u, 8u}) {
    const ContractionPair pair = generate_commuting_pair(
        seed, 5, static_cast<PairMethod>(seed % 3), 0.92, 0.88);
    const Built b = build_all(pair);
    CHECK(b.s.unitarity_residual <= 1e-10);
    CHECK(b.s.interp_residual <= 1e-9);
    // S maps the complement of M2 onto the complement of M1
    CHECK(operator_norm_2(ComplexMatrix(b.subs.b1.adjoint() * b.s.s *
                                        b.subs.c2)) <= 1e-9);
  }
}

TEST_CASE("build_S determinism is bitwise") {
  const ContractionPair pair =
      generate_commuting_pair(3, 4, PairMethod::polynomial, 0.9, 0.9);
  const Built a = build_all(pair);
  const Built b = build_all(pair);
  REQUIRE(a.s.s.rows() == b.s.s.rows());
  CHECK(a.s.s == b.s.s);  // exact equality, not tolerance
}

TEST_CASE("classical U4: padded swap fixes e3 on the zero pair") {
  const ContractionPair pair =
      validate_pair(ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1));
  const AndoUnitary u = build_classical_U4(pair, defect_data(pair));
  REQUIRE(u.s.rows() == 4);
  ComplexVector e3 = ComplexVector::Zero(4);
  e3(2) = 1.0;
  CHECK((u.s * e3 - e3).norm() < 1e-12);
}

TEST_CASE("classical U4: printed orientation on sampled h") {
  for (std::uint64_t seed : {1u, 6u}) {
    const Eigen::Index n = 3;
    const ContractionPair pair = generate_commuting_pair(
        seed, n, PairMethod::polynomial, 0.9, 0.85);
    const DefectData d = defect_data(pair);
    const AndoUnitary u = build_classical_U4(pair, d);
    CHECK(u.unitarity_residual <= 1e-10);
    CHECK(u.interp_residual <= 1e-9);
    Rng rng(seed + 100);
    for (int t = 0; t < 50; ++t) {
      const ComplexVector h = rng.cnormal_vector(n);
      ComplexVector src(4 * n), dst(4 * n);
      src.setZero();
      dst.setZero();
      src.segment(0, n) = d.d1 * (pair.t2 * h);
      src.segment(2 * n, n) = d.d2 * h;
      dst.segment(0, n) = d.d2 * (pair.t1 * h);
      dst.segment(2 * n, n) = d.d1 * h;
      CHECK((u.s * src - dst).norm() <= 1e-9 * std::max(1.0, h.norm()));
    }
  }
}

TEST_CASE("extend_partial_isometry flags rank-deficient sources") {
  ComplexMatrix g = ComplexMatrix::Zero(4, 2);
  g(0, 0) = 1.0;
  g(1, 1) = 0.0;  // second column identically zero
  CHECK_THROWS_MATCHES(extend_partial_isometry(g, g), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Err::RankDeficient;
                       }));
}
