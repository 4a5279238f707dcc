#include <catch2/catch_amalgamated.hpp>

#include <andolab/banach.hpp>
#include <andolab/dilation.hpp>

using namespace andolab;

namespace {

struct Rig {
  ContractionPair pair;
  DefectData defects;
  AndoUnitary s;
  DilationOperatorSpec v1, v2;
};

Rig make_rig(const ContractionPair& pair) {
  Rig r{pair, defect_data(pair), {}, {}, {}};
  r.s = build_S(pair, build_subspaces(pair, r.defects));
  std::tie(r.v1, r.v2) = make_minimal_specs(pair, r.defects, r.s);
  return r;
}

Rig scalar_rig(double a, double b) {
  ComplexMatrix ma(1, 1), mb(1, 1);
  ma(0, 0) = a;
  mb(0, 0) = b;
  return make_rig(validate_pair(ma, mb));
}

DilationState scaled(const DilationState& s, Complex c) {
  DilationState out = s;
  out.head *= c;
  for (auto& blk : out.blocks) blk *= c;
  return out;
}

DilationState add(const DilationState& a, const DilationState& b) {
  return state_sub(a, scaled(b, -1.0));
}

}  // namespace

TEST_CASE("embed and project_head") {
  ComplexVector h(2);
  h << Complex(1, 1), Complex(0, -2);
  const DilationState s = embed(h, 4);
  CHECK(s.depth() == 0);
  CHECK(project_head(s) == h);
  CHECK(state_norm(s) == h.norm());
  CHECK(state_norm(embed(ComplexVector::Zero(2), 4)) == 0.0);
}

TEST_CASE("minimal-V read-off on embedded vectors") {
  const Rig r = scalar_rig(0.5, 0.5);
  ComplexVector h(1);
  h << 1.0;

  const DilationState x1 = apply_op(r.v1, embed(r.v1, h));
  REQUIRE(x1.depth() == 1);
  CHECK(std::abs(project_head(x1)(0) - Complex(0.5)) < 1e-15);
  ComplexVector want(2);
  want << r.defects.d1(0, 0), 0.0;
  want = r.s.s * want;
  CHECK((x1.blocks[0] - want).norm() < 1e-14);

  const DilationState x2 = apply_op(r.v2, embed(r.v2, h));
  REQUIRE(x2.depth() == 1);
  CHECK(std::abs(project_head(x2)(0) - Complex(0.5)) < 1e-15);
  CHECK(std::abs(x2.blocks[0](0)) < 1e-15);  // (0, D2 h)
  CHECK(std::abs(x2.blocks[0](1) - r.defects.d2(0, 0)) < 1e-15);
}

TEST_CASE("scalar 1/2 pair: V1 V2 embed(1) hits the frozen state") {
  const Rig r = scalar_rig(0.5, 0.5);
  ComplexVector h(1);
  h << 1.0;
  const DilationState out = apply_op(r.v1, apply_op(r.v2, embed(r.v1, h)));
  REQUIRE(out.depth() == 1);
  CHECK(std::abs(project_head(out)(0) - Complex(0.25)) < 1e-14);
  // (T1 T2, S(D1 T2, D2)) = (1/4, (sqrt(3)/2, sqrt(3)/4))
  CHECK(std::abs(out.blocks[0](0) - Complex(0.8660254037844386)) < 1e-12);
  CHECK(std::abs(out.blocks[0](1) - Complex(0.4330127018922193)) < 1e-12);
}

TEST_CASE("apply_word: powers, commuted orders, empty word") {
  const ContractionPair pair =
      generate_commuting_pair(21, 3, PairMethod::polynomial, 0.9, 0.8);
  const Rig r = make_rig(pair);
  Rng rng(5);
  const ComplexVector h = rng.cnormal_vector(3);
  const DilationOperatorSpec specs[2] = {r.v1, r.v2};
  const auto sp = std::span<const DilationOperatorSpec>(specs, 2);

  const std::vector<int> w11 = {1, 1};
  const DilationState out =
      apply_word(sp, std::span<const int>(w11), embed(r.v1, h));
  CHECK((project_head(out) - pair.t1 * (pair.t1 * h)).norm() < 1e-12);

  const std::vector<int> w12 = {1, 2}, w21 = {2, 1};
  const DilationState a =
      apply_word(sp, std::span<const int>(w12), embed(r.v1, h));
  const DilationState b =
      apply_word(sp, std::span<const int>(w21), embed(r.v1, h));
  CHECK(state_norm(state_sub(a, b)) < 1e-10);

  const std::vector<int> empty;
  const DilationState same =
      apply_word(sp, std::span<const int>(empty), embed(r.v1, h));
  CHECK(state_norm(state_sub(same, embed(r.v1, h))) == 0.0);
}

TEST_CASE("support growth and canonical trimming for every kind") {
  const ContractionPair pair =
      generate_commuting_pair(22, 2, PairMethod::codiagonal, 0.9, 0.9);
  const Rig r = make_rig(pair);
  const DefectData& d = r.defects;
  const auto [s1, s2] = make_schaffer_specs(pair, d);
  const auto [n1, n2] = make_naive_specs(pair, d);
  const auto [c1, c2] =
      make_classical4_specs(pair, d, build_classical_U4(pair, d));
  Rng rng(7);
  for (const auto* spec : {&r.v1, &r.v2, &s1, &s2, &n1, &n2, &c1, &c2}) {
    for (int t = 0; t < 20; ++t) {
      DilationState s =
          random_state(rng, 2, block_dim_for(spec->kind, 2), 3);
      const Eigen::Index d0 = s.depth();
      CHECK(apply_op(*spec, s).depth() <= d0 + 1);
    }
  }
  // zero vector stays the canonical empty state
  const DilationState z = apply_op(r.v1, embed(r.v1, ComplexVector::Zero(2)));
  CHECK(z.depth() == 0);
}

TEST_CASE("linearity of apply_op") {
  const ContractionPair pair =
      generate_commuting_pair(23, 3, PairMethod::polynomial, 0.85, 0.9);
  const Rig r = make_rig(pair);
  Rng rng(11);
  DilationState x = random_state(rng, 3, 6, 4);
  DilationState y = random_state(rng, 3, 6, 2);
  const Complex alpha = rng.cnormal(), beta = rng.cnormal();
  const DilationState lhs =
      apply_op(r.v1, add(scaled(x, alpha), scaled(y, beta)));
  const DilationState rhs =
      add(scaled(apply_op(r.v1, x), alpha), scaled(apply_op(r.v1, y), beta));
  CHECK(state_norm(state_sub(lhs, rhs)) <= 1e-12 * state_norm(lhs));
}

TEST_CASE("hilbert state_norm equals the flat concatenation norm") {
  Rng rng(13);
  const DilationState s = random_state(rng, 3, 6, 5);
  ComplexVector flat(3 + 6 * s.depth());
  flat.head(3) = s.head;
  for (Eigen::Index k = 0; k < s.depth(); ++k)
    flat.segment(3 + 6 * k, 6) = s.blocks[k];
  CHECK(std::abs(state_norm(s) - flat.norm()) < 1e-13 * flat.norm());
}

TEST_CASE("state_norm with a mixed context") {
  // oracle case (0; (x, 0)) -> A1(x)
  const ContractionPair pair =
      generate_commuting_pair(31, 2, PairMethod::codiagonal, 0.8, 0.7);
  const NormOracle base = lp_oracle(2, 2.0);
  const ANormOracle a1 = a_norm_oracle(pair.t1, base);
  const ANormOracle a2 = a_norm_oracle(pair.t2, base);
  const BlockNormContext ctx = make_mixed_context(base, a1, a2);
  Rng rng(17);
  const ComplexVector x = rng.cnormal_vector(2);
  DilationState s = embed(ComplexVector::Zero(2), 4);
  ComplexVector blk(4);
  blk << x, ComplexVector::Zero(2);
  s.blocks.push_back(blk);
  CHECK(std::abs(state_norm(s, ctx) - a1.norm.eval(x)) < 1e-13);
  CHECK(std::abs(state_norm(embed(x, 4), ctx) - x.norm()) < 1e-13);
}

TEST_CASE("schaffer and naive read-off") {
  const ContractionPair pair =
      generate_commuting_pair(41, 2, PairMethod::polynomial, 0.9, 0.8);
  const DefectData d = defect_data(pair);
  const auto [s1, s2] = make_schaffer_specs(pair, d);
  Rng rng(19);
  const ComplexVector h = rng.cnormal_vector(2);

  const DilationState sch = apply_op(s1, embed(s1, h));
  REQUIRE(sch.depth() == 1);
  CHECK((project_head(sch) - pair.t1 * h).norm() < 1e-14);
  CHECK((sch.blocks[0] - d.d1 * h).norm() < 1e-14);

  const auto [n1, n2] = make_naive_specs(pair, d);
  const DilationState nva = apply_op(n1, embed(n1, h));
  REQUIRE(nva.depth() == 1);
  CHECK((nva.blocks[0].head(2) - d.d1 * h).norm() < 1e-14);
  CHECK(nva.blocks[0].tail(2).norm() == 0.0);
  // second application shifts the packed slot stream down one block
  const DilationState nvb = apply_op(n2, nva);
  REQUIRE(nvb.depth() == 2);
  CHECK((nvb.blocks[0].head(2) - d.d2 * (pair.t1 * h)).norm() < 1e-13);
  CHECK((nvb.blocks[1] - nva.blocks[0]).norm() == 0.0);
}

TEST_CASE("banach read-off with the swap unitary on the zero pair") {
  const ContractionPair pair =
      validate_pair(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2));
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap.topRightCorner(2, 2) = ComplexMatrix::Identity(2, 2);
  swap.bottomLeftCorner(2, 2) = ComplexMatrix::Identity(2, 2);
  DilationOperatorSpec v1{OperatorKind::BanachV1, pair, std::nullopt, swap,
                          swap.adjoint()};
  Rng rng(23);
  const ComplexVector x = rng.cnormal_vector(2);
  const DilationState out = apply_op(v1, embed(v1, x));
  REQUIRE(out.depth() == 1);
  CHECK(project_head(out).norm() == 0.0);
  CHECK(out.blocks[0].head(2).norm() < 1e-15);      // (0, x)
  CHECK((out.blocks[0].tail(2) - x).norm() < 1e-15);
}

TEST_CASE("dimension and unitary guards") {
  const ContractionPair pair =
      generate_commuting_pair(51, 2, PairMethod::codiagonal, 0.9, 0.9);
  const Rig r = make_rig(pair);
  CHECK_THROWS_MATCHES(apply_op(r.v1, embed(ComplexVector::Zero(2), 2)),
                       Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Err::DimMismatch;
                       }));
  DilationOperatorSpec broken = r.v1;
  broken.unitary = ComplexMatrix();
  broken.unitary_inverse = ComplexMatrix();
  CHECK_THROWS_MATCHES(apply_op(broken, embed(r.v1, ComplexVector::Zero(2))),
                       Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Err::MissingUnitary;
                       }));
  // the factory rejects a non-unitary S outright
  AndoUnitary bad;
  bad.s = 0.5 * ComplexMatrix::Identity(4, 4);
  CHECK_THROWS_AS(make_minimal_specs(pair, r.defects, bad), Error);
}

TEST_CASE("classical4 slot layout on embedded vectors") {
  const ContractionPair pair =
      generate_commuting_pair(61, 2, PairMethod::polynomial, 0.9, 0.85);
  const DefectData d = defect_data(pair);
  const AndoUnitary u4 = build_classical_U4(pair, d);
  const auto [c1, c2] = make_classical4_specs(pair, d, u4);
  Rng rng(29);
  const ComplexVector h = rng.cnormal_vector(2);

  // V1 embed(h) = (T1 h; U (D1 h, 0, 0, 0))
  const DilationState a = apply_op(c1, embed(c1, h));
  REQUIRE(a.depth() == 1);
  ComplexVector pad = ComplexVector::Zero(8);
  pad.head(2) = d.d1 * h;
  CHECK((a.blocks[0] - c1.unitary * pad).norm() < 1e-13);

  // V2 embed(h) = (T2 h; (0, 0, D2 h, 0))
  const DilationState b = apply_op(c2, embed(c2, h));
  REQUIRE(b.depth() == 1);
  CHECK(b.blocks[0].head(4).norm() < 1e-15);
  CHECK((b.blocks[0].segment(4, 2) - d.d2 * h).norm() < 1e-14);
  CHECK(b.blocks[0].tail(2).norm() < 1e-15);
}
