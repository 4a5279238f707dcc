#include <catch2/catch_amalgamated.hpp>

#include <andolab/banach.hpp>

using namespace andolab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ComplexMatrix scalar(double v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

// Frozen grid-search fixture: strict l_inf contraction whose A_T functional
// violates the triangle inequality on the hypercube diagonals.
ComplexMatrix inf_violator() {
  ComplexMatrix t = ComplexMatrix::Zero(2, 2);
  t(0, 1) = 0.9;
  return t;
}

}  // namespace

TEST_CASE("lp_oracle: frozen values and the BadP gate") {
  const NormOracle l1 = lp_oracle(2, 1.0);
  const NormOracle l2 = lp_oracle(2, 2.0);
  const NormOracle li = lp_oracle(2, kInf);
  ComplexVector e1(2), ones(2), pyth(2);
  e1 << 1.0, 0.0;
  ones << 1.0, 1.0;
  pyth << 3.0, 4.0;
  CHECK(l1.eval(e1) == 1.0);
  CHECK(l1.eval(ones) == 2.0);
  CHECK(std::abs(l2.eval(pyth) - 5.0) < 1e-14);
  CHECK(li.eval(pyth) == 4.0);
  CHECK_THROWS_MATCHES(lp_oracle(2, 0.5), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Err::BadP;
                       }));
}

TEST_CASE("a_norm_oracle: zero operator, scalar formula, defect bridge") {
  const NormOracle base = lp_oracle(3, 1.5);
  const ANormOracle a0 = a_norm_oracle(ComplexMatrix::Zero(3, 3), base);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const ComplexVector x = rng.cnormal_vector(3);
    CHECK(std::abs(a0.norm.eval(x) - base.eval(x)) < 1e-13);
  }

  const ANormOracle as = a_norm_oracle(scalar(0.5), lp_oracle(1, 2.0));
  ComplexVector x1(1);
  x1 << Complex(2.0, -1.0);
  CHECK(std::abs(as.norm.eval(x1) -
                 std::sqrt(1.0 - 0.25) * std::abs(x1(0))) < 1e-13);

  // p = 2: A_T(x) = ||D_T x|| with D_T from the Hilbert defect machinery
  const ContractionPair pair =
      generate_commuting_pair(4, 3, PairMethod::polynomial, 0.9, 0.8);
  const ANormOracle a2 = a_norm_oracle(pair.t1, lp_oracle(3, 2.0));
  const ComplexMatrix d = hermitian_sqrt(
      ComplexMatrix(ComplexMatrix::Identity(3, 3) -
                    pair.t1.adjoint() * pair.t1));
  for (int t = 0; t < 1000; ++t) {
    const ComplexVector x = rng.cnormal_vector(3);
    CHECK(std::abs(a2.norm.eval(x) - (d * x).norm()) <=
          1e-10 * std::max(1.0, (d * x).norm()));
  }
}

TEST_CASE("a_norm_oracle rejects operators that are not base contractions") {
  ComplexMatrix t = ComplexMatrix::Zero(2, 2);
  t(1, 0) = 1.2;  // column sum 1.2 > 1
  CHECK_THROWS_MATCHES(a_norm_oracle(t, lp_oracle(2, 1.0)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Err::NotContractiveInBase;
                       }));
}

TEST_CASE("check_a_norm: verified for p=2 strict and for T=0 at any p") {
  const ContractionPair pair =
      generate_commuting_pair(5, 3, PairMethod::codiagonal, 0.9, 0.85);
  const ANormStatus ok =
      check_a_norm(a_norm_oracle(pair.t1, lp_oracle(3, 2.0)), 2000);
  CHECK(ok.verdict == ANormStatus::Verdict::verified_sampled);
  CHECK(ok.worst_slack <= 1e-10);

  for (double p : {1.0, 1.5, 3.0, kInf}) {
    const ANormStatus z =
        check_a_norm(a_norm_oracle(ComplexMatrix::Zero(2, 2),
                                   lp_oracle(2, p)),
                     500);
    CHECK(z.verdict == ANormStatus::Verdict::verified_sampled);
  }

  CHECK(check_a_norm(a_norm_oracle(scalar(0.5), lp_oracle(1, 2.0)), 0)
            .verdict == ANormStatus::Verdict::indeterminate);
}

TEST_CASE("check_a_norm: frozen counterexample fixtures reproduce") {
  // p = inf, T = [[0, 0.9], [0, 0]]: A(x+y) = 2 vs A(x)+A(y) = 2 sqrt(0.19)
  const ANormOracle a = a_norm_oracle(inf_violator(), lp_oracle(2, kInf));
  ComplexVector x(2), y(2);
  x << 1.0, 1.0;
  y << 1.0, -1.0;
  const double slack = a.norm.eval(ComplexVector(x + y)) - a.norm.eval(x) -
                       a.norm.eval(y);
  CHECK(std::abs(slack - (2.0 - 2.0 * std::sqrt(0.19))) < 1e-12);

  const ANormStatus st = check_a_norm(a, 500);
  REQUIRE(st.verdict == ANormStatus::Verdict::counterexample);
  REQUIRE(st.triangle_counterexample.has_value());
  const auto& [cx, cy] = *st.triangle_counterexample;
  CHECK(a.norm.eval(ComplexVector(cx + cy)) >
        a.norm.eval(cx) + a.norm.eval(cy) + 1e-10);

  // p = 1, T = [[-0.9, -0.5], [0, 0]] on the canonical basis pair
  ComplexMatrix t1 = ComplexMatrix::Zero(2, 2);
  t1(0, 0) = -0.9;
  t1(0, 1) = -0.5;
  const ANormStatus st1 =
      check_a_norm(a_norm_oracle(t1, lp_oracle(2, 1.0)), 500);
  CHECK(st1.verdict == ANormStatus::Verdict::counterexample);
}

TEST_CASE("product_a_norm_identity: scalar algebra and random pairs") {
  ComplexMatrix a = scalar(0.5), b = scalar(0.5);
  const ContractionPair ps = validate_pair(a, b);
  for (double p : {1.0, 2.0, 3.0, kInf})
    CHECK(product_a_norm_identity(ps, lp_oracle(1, p), 100).pass);

  const ContractionPair pair =
      generate_commuting_pair(6, 3, PairMethod::polynomial, 0.6, 0.6);
  const VerificationReport rep =
      product_a_norm_identity(pair, lp_oracle(3, 3.0), 200);
  CHECK(rep.pass);
  CHECK(rep.worst_residual <= 1e-12);
}

TEST_CASE("qhat_isometry_check: scalar and p = 1.5") {
  const ContractionPair ps = validate_pair(scalar(0.5), scalar(0.7));
  const VerificationReport srep = qhat_isometry_check(ps, lp_oracle(1, 2.5), 100);
  CHECK(srep.pass);
  CHECK(srep.worst_residual <= 1e-14);

  const ContractionPair pair =
      generate_commuting_pair(7, 4, PairMethod::codiagonal, 0.7, 0.6);
  const VerificationReport rep =
      qhat_isometry_check(pair, lp_oracle(4, 1.5), 200);
  CHECK(rep.pass);
  CHECK(rep.worst_residual <= 1e-12);
}

TEST_CASE("mhat_subspaces: generators, margins, triviality") {
  const ContractionPair z =
      validate_pair(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2));
  const MhatSubspaces mz = mhat_subspaces(z, 2.0);
  CHECK(mz.g1.topRows(2).norm() == 0.0);  // [T2; I] = [0; I]
  CHECK(operator_norm_2(ComplexMatrix(
            mz.g1.bottomRows(2) - ComplexMatrix::Identity(2, 2))) == 0.0);
  CHECK(operator_norm_2(ComplexMatrix(
            mz.g2.topRows(2) - ComplexMatrix::Identity(2, 2))) == 0.0);
  CHECK(mz.margin == 1.0);
  CHECK(std::abs(mz.sigma_min - 1.0) < 1e-14);

  const ContractionPair ps = validate_pair(scalar(0.5), scalar(0.5));
  const MhatSubspaces m = mhat_subspaces(ps, 2.0);
  CHECK(std::abs(m.margin - 0.75) < 1e-14);
  CHECK(std::abs(m.sigma_min - 0.75) < 1e-14);
  CHECK(m.intersection_check.pass);

  const ContractionPair pair =
      generate_commuting_pair(8, 4, PairMethod::polynomial, 0.9, 0.9);
  const MhatSubspaces mp = mhat_subspaces(pair, 2.0);
  CHECK(mp.sigma_min >= 1.0 - product_norm(pair) - 1e-12);
  CHECK(std::abs(mp.margin - (1.0 - product_norm(pair))) < 1e-10);
}

TEST_CASE("operator_p_norm: exact modes and power-method consistency") {
  CHECK(std::abs(operator_p_norm(ComplexMatrix::Identity(3, 3), 1.7).value -
                 1.0) < 1e-9);
  ComplexMatrix t(2, 2);
  t << 1.0, 1.0, 0.0, 0.0;
  CHECK(operator_p_norm(t, 1.0).value == 1.0);
  CHECK(operator_p_norm(t, kInf).value == 2.0);
  CHECK_THROWS_AS(operator_p_norm(t, 0.9), Error);

  Rng rng(9);
  const ComplexMatrix m = rng.cnormal_matrix(4, 4);
  const PNormEstimate e2 = operator_p_norm(m, 2.0);
  CHECK(std::abs(e2.value - operator_norm_2(m)) < 1e-12);
  // maximizer attains the reported value
  CHECK(std::abs(lp_norm(ComplexVector(m * e2.maximizer), 2.0) - e2.value) <
        1e-10);

  const PNormEstimate e15 = operator_p_norm(m, 1.5);
  CHECK(e15.mode == "power-method");
  CHECK(std::abs(lp_norm(ComplexVector(m * e15.maximizer), 1.5) /
                     lp_norm(e15.maximizer, 1.5) -
                 e15.value) < 1e-10);
  // lower bound, and below the interpolation bound max(||.||_1, ||.||_inf)
  CHECK(e15.value <= std::max(operator_p_norm(m, 1.0).value,
                              operator_p_norm(m, kInf).value) +
                         1e-12);
  double sample_best = 0;
  for (int s = 0; s < 200; ++s) {
    const ComplexVector x = rng.cnormal_vector(4);
    sample_best = std::max(
        sample_best, lp_norm(ComplexVector(m * x), 1.5) / lp_norm(x, 1.5));
  }
  CHECK(e15.value >= sample_best - 1e-9);
}

TEST_CASE("hilbert_S_to_banach_S: swap at T=0, scalar identity, isometry") {
  const ContractionPair z =
      validate_pair(ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1));
  const DefectData dz = defect_data(z);
  const AndoUnitary sz = build_S(z, build_subspaces(z, dz));
  ComplexMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  CHECK(operator_norm_2(ComplexMatrix(
            hilbert_S_to_banach_S(z, dz, sz.s) - swap)) < 1e-12);

  const ContractionPair ps = validate_pair(scalar(0.5), scalar(0.5));
  const DefectData ds = defect_data(ps);
  const AndoUnitary ss = build_S(ps, build_subspaces(ps, ds));
  const ComplexMatrix sh = hilbert_S_to_banach_S(ps, ds, ss.s);
  ComplexVector src(2), dst(2);
  src << 0.5, 1.0;  // (b x, x) with x = 1
  dst << 1.0, 0.5;  // (x, a x)
  CHECK((sh * src - dst).norm() < 1e-12);

  const ContractionPair pair =
      generate_commuting_pair(10, 3, PairMethod::polynomial, 0.9, 0.85);
  const DefectData d = defect_data(pair);
  const AndoUnitary s = build_S(pair, build_subspaces(pair, d));
  const ComplexMatrix shat = hilbert_S_to_banach_S(pair, d, s.s);
  const NormOracle base = lp_oracle(3, 2.0);
  const ANormOracle a1 = a_norm_oracle(pair.t1, base);
  const ANormOracle a2 = a_norm_oracle(pair.t2, base);
  auto mixed = [&](const ComplexVector& v) {
    return std::sqrt(std::pow(a1.norm.eval(v.head(3)), 2) +
                     std::pow(a2.norm.eval(v.tail(3)), 2));
  };
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    ComplexVector v = rng.cnormal_vector(6);
    const double mv = mixed(v);
    CHECK(std::abs(mixed(ComplexVector(shat * v)) - mv) <=
          1e-9 * std::max(1.0, mv));
  }
}

TEST_CASE("build_banach_dilation: p=2 pipeline passes all engine checks") {
  const ContractionPair pair =
      generate_commuting_pair(12, 3, PairMethod::codiagonal, 0.9, 0.9);
  const DefectData d = defect_data(pair);
  const AndoUnitary s = build_S(pair, build_subspaces(pair, d));
  const ComplexMatrix shat = hilbert_S_to_banach_S(pair, d, s.s);
  const NormOracle base = lp_oracle(3, 2.0);
  const BanachDilation bd = build_banach_dilation(pair, base, shat);

  CHECK(check_isometry(bd.v1, 200, 6, 1e-9, kDefaultCheckSeed, &bd.ctx).pass);
  CHECK(check_isometry(bd.v2, 200, 6, 1e-9, kDefaultCheckSeed, &bd.ctx).pass);
  CHECK(check_commutation(bd.v1, bd.v2, 200, 6, 1e-9, kDefaultCheckSeed,
                          &bd.ctx)
            .pass);
  auto base_eval = base.eval;
  std::function<double(const ComplexVector&)> head_norm = base_eval;
  CHECK(check_dilation_identity(bd.v1, bd.v2, 6, 1e-9, kDefaultCheckSeed, 5,
                                &head_norm)
            .pass);

  const auto [hv1, hv2] = make_minimal_specs(pair, d, s);
  CHECK(check_banach_hilbert_agreement(bd, hv1, hv2, d, 100, 6).pass);
}

TEST_CASE("build_banach_dilation: scalar pair to degree 4") {
  const ContractionPair ps = validate_pair(scalar(0.5), scalar(0.5));
  const DefectData ds = defect_data(ps);
  const AndoUnitary ss = build_S(ps, build_subspaces(ps, ds));
  const BanachDilation bd = build_banach_dilation(
      ps, lp_oracle(1, 2.0), hilbert_S_to_banach_S(ps, ds, ss.s));
  CHECK(check_dilation_identity(bd.v1, bd.v2, 4, 1e-9).pass);
}

TEST_CASE("build_banach_dilation: rejection paths") {
  const ContractionPair pair =
      generate_commuting_pair(13, 2, PairMethod::polynomial, 0.9, 0.9);
  CHECK_THROWS_MATCHES(
      build_banach_dilation(pair, lp_oracle(2, 2.0),
                            ComplexMatrix::Identity(4, 4)),
      Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code == Err::SNotInterpolating;
      }));

  // A-norm invalid: the frozen l_inf violator commutes with itself
  const ComplexMatrix t = inf_violator();
  const ContractionPair bad = validate_pair(t, t);
  CHECK_THROWS_MATCHES(
      build_banach_dilation(bad, lp_oracle(2, kInf),
                            ComplexMatrix::Identity(4, 4)),
      Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code == Err::ANormInvalid;
      }));
}

TEST_CASE("a-norm envelope sandwich") {
  const ContractionPair pair = make_lp_safe(
      generate_commuting_pair(14, 3, PairMethod::codiagonal, 0.8, 0.8), 0.8);
  for (double p : {1.0, 2.0, kInf}) {
    const NormOracle base = lp_oracle(3, p);
    const ANormOracle a = a_norm_oracle(pair.t1, base);
    const double tnorm = operator_p_norm(pair.t1, p).value;
    CHECK(check_a_norm_envelope(a, tnorm, 500).pass);
  }
}

TEST_CASE("make_lp_safe bounds every lp norm via interpolation") {
  const ContractionPair pair = make_lp_safe(
      generate_commuting_pair(15, 4, PairMethod::polynomial, 0.9, 0.9), 0.9);
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    CHECK(operator_p_norm(pair.t1, p).value <= 0.9 + 1e-10);
    CHECK(operator_p_norm(pair.t2, p).value <= 0.9 + 1e-10);
  }
  CHECK(pair.comm_residual <= 1e-12);
}

TEST_CASE("search_norm_one_examples: empty budget and p=2 emptiness") {
  CHECK(search_norm_one_examples(2, 1.5, 1, 0).found.empty());

  const NormOneSearchResult r = search_norm_one_examples(2, 2.0, 7, 40);
  CHECK(r.found.empty());
  CHECK(r.examined == 40);
  // every surviving candidate was rejected by the degeneracy probe
  CHECK(r.rejected_status + r.rejected_contractivity + r.rejected_norm == 40);
  CHECK(r.rejected_status > 0);

  // other p: outcomes are data; just verify determinism of the certificate
  const NormOneSearchResult s1 = search_norm_one_examples(2, 1.0, 3, 10);
  const NormOneSearchResult s2 = search_norm_one_examples(2, 1.0, 3, 10);
  CHECK(s1.found.size() == s2.found.size());
  CHECK(s1.rejected_status == s2.rejected_status);
}
