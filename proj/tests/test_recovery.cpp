#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cslab/ensembles.hpp"
#include "cslab/recovery.hpp"

using cslab::Matrix;
using cslab::SensingMatrix;
using cslab::SignedSupport;
using cslab::Vector;

namespace {

SensingMatrix hand_instance() {
  SensingMatrix a;
  a.n = 2;
  a.N = 3;
  a.entries = Matrix(2, 3);
  a.entries(0, 0) = 1; a.entries(0, 1) = 0; a.entries(0, 2) = 1;
  a.entries(1, 0) = 0; a.entries(1, 1) = 1; a.entries(1, 2) = 1;
  a.spec = cslab::EnsembleSpec::custom("hand");
  return a;
}

SensingMatrix scaled_orthonormal(std::size_t n, std::size_t N) {
  SensingMatrix a;
  a.n = n;
  a.N = N;
  a.entries = Matrix(n, N);
  for (std::size_t j = 0; j < N; ++j) a.entries(j, j) = std::sqrt(static_cast<double>(n));
  a.spec = cslab::EnsembleSpec::custom("orthonormal");
  return a;
}

} // namespace

TEST_CASE("basis pursuit hand values") {
  const auto a = hand_instance();

  SECTION("y=(1,1) picks the single sparse column") {
    const auto out = cslab::basis_pursuit(a, {1.0, 1.0});
    REQUIRE(out.lp_status == cslab::LpStatus::Optimal);
    CHECK(out.solution[0] == Catch::Approx(0.0).margin(1e-10));
    CHECK(out.solution[1] == Catch::Approx(0.0).margin(1e-10));
    CHECK(out.solution[2] == Catch::Approx(1.0).margin(1e-10));
    CHECK(out.l1_objective == Catch::Approx(1.0).margin(1e-10));
  }
  SECTION("y=0 gives 0") {
    const auto out = cslab::basis_pursuit(a, {0.0, 0.0});
    REQUIRE(out.lp_status == cslab::LpStatus::Optimal);
    CHECK(cslab::norm_inf(out.solution) <= 1e-12);
  }
  SECTION("orthonormal: unique sparse preimage") {
    const auto o = scaled_orthonormal(4, 3);
    const auto out = cslab::basis_pursuit(o, o.column(1));
    REQUIRE(out.lp_status == cslab::LpStatus::Optimal);
    CHECK(out.solution[0] == Catch::Approx(1.0).margin(1e-10));
    CHECK(std::abs(out.solution[1]) + std::abs(out.solution[2]) < 1e-10);
  }
  SECTION("y outside the range is infeasible") {
    SensingMatrix thin;
    thin.n = 2;
    thin.N = 1;
    thin.entries = Matrix(2, 1);
    thin.entries(0, 0) = 1.0;
    thin.spec = cslab::EnsembleSpec::custom("thin");
    const auto out = cslab::basis_pursuit(thin, {0.0, 1.0});
    CHECK(out.lp_status == cslab::LpStatus::Infeasible);
  }
}

TEST_CASE("exact recovery trials on the hand instance") {
  const auto a = hand_instance();

  CHECK(cslab::exact_recovery_trial(a, {0.0, 0.0, 0.0}).success);
  CHECK(cslab::exact_recovery_trial(a, {0.0, 0.0, 1.0}).success);

  const auto fail = cslab::exact_recovery_trial(a, {1.0, 1.0, 0.0});
  CHECK_FALSE(fail.success);
  CHECK(fail.l1_minimality_ok);  // BP found something strictly better, as it should
  CHECK(fail.l1_objective == Catch::Approx(1.0).margin(1e-9));

  SECTION("success is scale invariant over six decades") {
    for (double lam : {1e-3, 1.0, 1e3}) {
      Vector z = {0.0, 0.0, lam};
      CHECK(cslab::exact_recovery_trial(a, z).success);
      Vector bad = {lam, lam, 0.0};
      CHECK_FALSE(cslab::exact_recovery_trial(a, bad).success);
    }
  }
  SECTION("feasibility and minimality invariants") {
    const auto out = cslab::exact_recovery_trial(a, {2.0, 0.0, -0.5});
    const Vector y = cslab::matvec(a.entries, {2.0, 0.0, -0.5});
    const Vector at = cslab::matvec(a.entries, out.solution);
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(std::abs(at[i] - y[i]) <= 1e-8 * (1.0 + cslab::norm_inf(y)));
    CHECK(out.l1_minimality_ok);
  }
}

TEST_CASE("l1 decoding") {
  SECTION("exact measurements, full row rank") {
    const auto a = cslab::generate_matrix(cslab::EnsembleSpec::gaussian(), 4, 10, 21);
    const Vector x0 = {1.5, -2.0, 0.25, 3.0};
    const Vector y = cslab::matvec_transposed(a.entries, x0);
    const auto dec = cslab::decode_l1(a, y);
    REQUIRE(dec.lp_status == cslab::LpStatus::Optimal);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(dec.x[i] == Catch::Approx(x0[i]).margin(1e-8));
    CHECK(dec.residual_l1 <= 1e-8);
  }
  SECTION("n=1 all-ones sensing vectors decode to the median") {
    SensingMatrix a;
    a.n = 1;
    a.N = 5;
    a.entries = Matrix(1, 5, 1.0);
    a.spec = cslab::EnsembleSpec::custom("ones");
    const auto dec = cslab::decode_l1(a, {3.0, 1.0, 4.0, 1.0, 5.0});
    REQUIRE(dec.lp_status == cslab::LpStatus::Optimal);
    CHECK(dec.x[0] == Catch::Approx(3.0).margin(1e-9));  // median of {1,1,3,4,5}
  }
  SECTION("one corrupted coordinate, Gaussian n=20 N=80") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto a = cslab::generate_matrix(cslab::EnsembleSpec::gaussian(), 20, 80, 500 + seed);
      cslab::RngStream stream(900 + seed, 0);
      Vector x0(20);
      for (auto& v : x0) v = cslab::sample_gaussian(stream);
      Vector y = cslab::matvec_transposed(a.entries, x0);
      const std::size_t j = static_cast<std::size_t>(stream.uniform01() * 80);
      y[j] += 5.0 * cslab::sample_gaussian(stream);
      const auto dec = cslab::decode_l1(a, y);
      REQUIRE(dec.lp_status == cslab::LpStatus::Optimal);
      double err = 0.0;
      for (std::size_t i = 0; i < 20; ++i) err = std::max(err, std::abs(dec.x[i] - x0[i]));
      ok += err <= 1e-6;
    }
    CHECK(ok >= 19);  // pilot frequency >= 0.95
  }
}

TEST_CASE("dual certificates on the hand instance") {
  const auto a = hand_instance();

  const auto c3 = cslab::dual_certificate_value(a, SignedSupport{{3}, {1}});
  REQUIRE(c3.classification == cslab::CertificateClass::Certified);
  CHECK(c3.gamma == Catch::Approx(0.5).margin(1e-9));
  CHECK(c3.w[0] == Catch::Approx(0.5).margin(1e-8));
  CHECK(c3.w[1] == Catch::Approx(0.5).margin(1e-8));

  const auto c12 = cslab::dual_certificate_value(a, SignedSupport{{1, 2}, {1, 1}});
  REQUIRE(c12.classification == cslab::CertificateClass::Failed);
  CHECK(c12.gamma == Catch::Approx(2.0).margin(1e-9));

  const auto ortho = scaled_orthonormal(4, 3);
  for (int i = 1; i <= 3; ++i) {
    const auto c = cslab::dual_certificate_value(ortho, SignedSupport{{i}, {-1}});
    REQUIRE(c.classification == cslab::CertificateClass::Certified);
    CHECK(c.gamma == Catch::Approx(0.0).margin(1e-10));
  }

  SECTION("rank-deficient support is reported") {
    SensingMatrix dup;
    dup.n = 2;
    dup.N = 2;
    dup.entries = Matrix(2, 2);
    dup.entries(0, 0) = 1.0;
    dup.entries(0, 1) = 1.0;
    dup.spec = cslab::EnsembleSpec::custom("dup");
    const auto c = cslab::dual_certificate_value(dup, SignedSupport{{1, 2}, {1, 1}});
    CHECK(c.classification == cslab::CertificateClass::RankDeficient);
  }
}

TEST_CASE("all sparse recovery check") {
  const auto a = hand_instance();

  const auto m1 = cslab::all_sparse_recovery_check(a, 1);
  CHECK(m1.pass);
  CHECK(m1.signed_supports_examined == 6.0);
  CHECK(m1.certified == 6);

  const auto m2 = cslab::all_sparse_recovery_check(a, 2);
  CHECK_FALSE(m2.pass);
  REQUIRE_FALSE(m2.failures.empty());
  CHECK(m2.failures.front().support == SignedSupport{{1, 2}, {1, 1}});

  const auto ortho = scaled_orthonormal(4, 4);
  for (int m = 1; m <= 4; ++m) CHECK(cslab::all_sparse_recovery_check(ortho, m).pass);

  CHECK(cslab::all_sparse_recovery_check(a, 0).pass);

  try {
    cslab::all_sparse_recovery_check(a, 2, 5.0);
    FAIL("expected BudgetError");
  } catch (const cslab::BudgetError& e) {
    CHECK(e.required() == 18.0);  // 3*2 + 3*4
  }
}

TEST_CASE("null-space property check") {
  const auto a = hand_instance();

  const auto m1 = cslab::nullspace_property_check(a, 1);
  CHECK(m1.pass);
  CHECK(m1.exhaustive);
  CHECK(m1.kernel_dim == 1);

  const auto m2 = cslab::nullspace_property_check(a, 2);
  CHECK_FALSE(m2.pass);
  REQUIRE_FALSE(m2.failures.empty());
  CHECK(m2.failures.front().support.indices == std::vector<int>{1, 2});

  SECTION("injective matrix passes vacuously") {
    const auto inj = scaled_orthonormal(4, 3);
    for (int m = 1; m <= 3; ++m) {
      const auto rep = cslab::nullspace_property_check(inj, m);
      CHECK(rep.pass);
      CHECK(rep.kernel_dim == 0);
    }
  }
  SECTION("signed slice values on the hand kernel") {
    const auto ns = cslab::nullspace_basis(a.entries);
    const auto ok = cslab::nsp_signed_slice(ns.basis, SignedSupport{{1}, {1}}, 3);
    CHECK(ok.pass);
    CHECK(ok.min_off_l1 == Catch::Approx(2.0).margin(1e-8));
    const auto bad = cslab::nsp_signed_slice(ns.basis, SignedSupport{{1, 2}, {1, 1}}, 3);
    CHECK_FALSE(bad.pass);
    CHECK(bad.min_off_l1 == Catch::Approx(0.5).margin(1e-8));
  }
}

TEST_CASE("certificate, null-space, and trial verdicts agree on random instances") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = cslab::generate_matrix(cslab::EnsembleSpec::gaussian(), 6, 9, 40 + seed);
    const auto ns = cslab::nullspace_basis(a.entries);
    for (int k = 1; k <= 2; ++k) {
      cslab::for_each_signed_support(9, k, [&](const SignedSupport& s) {
        const auto cert = cslab::dual_certificate_value(a, s);
        const auto slice = cslab::nsp_signed_slice(ns.basis, s, 9);
        if (cert.classification == cslab::CertificateClass::Certified) {
          REQUIRE(slice.pass);
          // gamma and the slice optimum are reciprocal LP values
          if (cert.gamma > 1e-6)
            REQUIRE(slice.min_off_l1 == Catch::Approx(1.0 / cert.gamma).epsilon(1e-5));
        } else if (cert.classification == cslab::CertificateClass::Failed) {
          REQUIRE_FALSE(slice.pass);
        }
        return true;
      });
    }
  }
}
