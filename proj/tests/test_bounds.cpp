#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cslab/bounds.hpp"

using cslab::BoundConstants;

TEST_CASE("uup bound plug-in arithmetic") {
  BoundConstants k;  // C=c=1, psi=K=K'=1 so xi=2, r=1
  k.theta = 0.2;
  k.r = 1.0;

  SECTION("m=10 at n=N=1e4 is not admissible") {
    const auto b = cslab::uup_bound(1e4, 1e4, 10, k);
    CHECK(b.sparsity_lhs == Catch::Approx(10.0 * std::pow(std::log(1e4), 2.0)).epsilon(1e-12));
    CHECK(b.sparsity_rhs == Catch::Approx(400.0).epsilon(1e-12));
    CHECK_FALSE(b.admissible);
  }
  SECTION("m=4 not admissible, m=3 admissible with bound 8000") {
    const auto b4 = cslab::uup_bound(1e4, 1e4, 4, k);
    CHECK(b4.sparsity_lhs ==
          Catch::Approx(4.0 * std::pow(std::log(2e4 / 0.8), 2.0)).epsilon(1e-12));
    CHECK_FALSE(b4.admissible);

    const auto b3 = cslab::uup_bound(1e4, 1e4, 3, k);
    CHECK(b3.admissible);
    CHECK(b3.bound_on_bm2 == Catch::Approx(1.0 * 4.0 * 0.2 * 1e4).epsilon(1e-12));
  }
  SECTION("theta boundary: 0.25 rejected, just under accepted") {
    k.theta = 0.25;
    CHECK_THROWS_AS(cslab::uup_bound(100, 100, 1, k), std::invalid_argument);
    k.theta = 0.2499999;
    CHECK_NOTHROW(cslab::uup_bound(100, 100, 1, k));
  }
  SECTION("caller-provided max-norm probability adds to the failure bound") {
    const auto base = cslab::uup_bound(1e4, 1e4, 3, k);
    const auto shifted = cslab::uup_bound(1e4, 1e4, 3, k, 0.125);
    CHECK(shifted.failure_prob == Catch::Approx(base.failure_prob + 0.125).epsilon(1e-12));
  }
}

TEST_CASE("rip bound rhs") {
  BoundConstants k;
  k.psi = 1.0;
  k.K = 1.0;
  k.K_prime = 0.0;  // invalid on purpose below
  CHECK_THROWS_AS(cslab::rip_bound_rhs(4, 4, 4, k), std::invalid_argument);

  k.K_prime = 1.0;
  k.r = 1.0;
  SECTION("n=N=m makes the log term exactly 1") {
    const auto b = cslab::rip_bound_rhs(16, 16, 16, k);
    CHECK(b.log_argument == Catch::Approx(std::exp(1.0)).epsilon(1e-12));
    // xi = psi K + K' = 2 with the defaults; rhs = C xi^2 * 1 * 1 + theta'
    CHECK(b.rhs == Catch::Approx(4.0 + k.theta_prime).epsilon(1e-12));
    CHECK(b.vacuous);  // rhs >= 1 cannot bind an isometry constant

    // xi -> 1 by letting psi vanish: rhs -> 1 + theta' = 1.2071...
    BoundConstants unit = k;
    unit.psi = 1e-13;
    const auto bu = cslab::rip_bound_rhs(16, 16, 16, unit);
    CHECK(bu.rhs == Catch::Approx(1.0 + unit.theta_prime).epsilon(1e-9));
  }
  SECTION("bound decreases when n grows at fixed m, N") {
    const auto b1 = cslab::rip_bound_rhs(100, 200, 4, k);
    const auto b2 = cslab::rip_bound_rhs(200, 200, 4, k);
    CHECK(b2.rhs < b1.rhs);
  }
}

TEST_CASE("neighborliness threshold") {
  BoundConstants k;
  k.r = 1.0;
  SECTION("n=100, N=1000 gives floor(100 / ln^2 10) = 18") {
    const auto t = cslab::neighborliness_threshold(100, 1000, k);
    CHECK(t.m_bar == 18.0);
    CHECK_FALSE(t.log_vacuous);
  }
  SECTION("r=2 halves the log exponent: floor(100 / ln 10) = 43") {
    k.r = 2.0;
    CHECK(cslab::neighborliness_threshold(100, 1000, k).m_bar == 43.0);
  }
  SECTION("N = e n makes the denominator exactly 1") {
    k.r = 1.0;
    const auto t = cslab::neighborliness_threshold(100, 100.0 * std::exp(1.0), k);
    CHECK(t.m_bar == 100.0);
  }
  SECTION("threshold grows with n") {
    double prev = 0.0;
    for (double n : {50.0, 100.0, 200.0, 400.0}) {
      const auto t = cslab::neighborliness_threshold(n, 4.0 * n, k);
      CHECK(t.m_bar >= prev);
      prev = t.m_bar;
    }
  }
  SECTION("r=1 bound never exceeds r=2 bound once the log exceeds 1") {
    for (double N : {300.0, 1000.0, 5000.0}) {
      BoundConstants k1 = k, k2 = k;
      k1.r = 1.0;
      k2.r = 2.0;
      CHECK(cslab::neighborliness_threshold(100, N, k1).m_bar <=
            cslab::neighborliness_threshold(100, N, k2).m_bar);
    }
  }
}

TEST_CASE("bernstein tail") {
  SECTION("single variable, norms 1, t=2: 2 e^{-1/2}") {
    CHECK(cslab::bernstein_tail(2.0, {1.0}, 1.0) ==
          Catch::Approx(2.0 * std::exp(-0.5)).epsilon(1e-12));
  }
  SECTION("monotone decreasing to zero in t") {
    double prev = 3.0;
    for (double t : {1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
      const double v = cslab::bernstein_tail(t, {1.0, 1.0, 1.0}, 1.0);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(prev < 1e-6);
  }
  SECTION("n equal norms at t=n: 2 exp(-n/(4+2psi))") {
    const double n = 16, psi = 1.5;
    const std::vector<double> norms(16, 1.0);
    CHECK(cslab::bernstein_tail(n, norms, psi) ==
          Catch::Approx(2.0 * std::exp(-n / (4.0 + 2.0 * psi))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cslab::bernstein_tail(1.0, {2.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cslab::bernstein_tail(0.0, {1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("weibull and mixed tail bounds") {
  SECTION("single coefficient, r=2: 2 exp(-c t^2)") {
    for (double t : {0.5, 1.0, 3.0})
      CHECK(cslab::weibull_tail_bound(t, {1.0}, 2.0, 0.125) ==
            Catch::Approx(2.0 * std::exp(-0.125 * t * t)).epsilon(1e-12));
  }
  SECTION("flat normalized profile at r=1 switches regimes at t = sqrt(n)") {
    const int n = 16;
    std::vector<double> a(n, 1.0 / 4.0);  // ||a||_2 = 1, ||a||_inf = 1/4
    const double c = 1.0;
    // below the switch: gaussian regime t^2; above: t sqrt(n)
    CHECK(cslab::weibull_tail_bound(2.0, a, 1.0, c) ==
          Catch::Approx(2.0 * std::exp(-4.0)).epsilon(1e-12));
    CHECK(cslab::weibull_tail_bound(8.0, a, 1.0, c) ==
          Catch::Approx(2.0 * std::exp(-32.0)).epsilon(1e-12));
  }
  SECTION("mixed bound formula") {
    CHECK(cslab::mixed_tail_bound(4.0, 16.0, 1.0, 0.5, 1.0) ==
          Catch::Approx(2.0 * std::exp(-std::min(1.0, 2.0))).epsilon(1e-12));
    CHECK_THROWS_AS(cslab::mixed_tail_bound(1.0, 4.0, 1.0, 0.4, 1.0), std::invalid_argument);
  }
}

TEST_CASE("thin shell and max norm probabilities") {
  BoundConstants k;
  SECTION("C=c=1, theta=1 is out of range; theta just under works") {
    CHECK_THROWS_AS(cslab::thin_shell_prob(1, 1, 1.0, k), std::invalid_argument);
    const auto p = cslab::thin_shell_prob(1, 1, 0.9999999, k);
    CHECK(p.prob == Catch::Approx(std::exp(-1.0)).epsilon(1e-5));
  }
  SECTION("default exponents are theta^3.33 n^0.33") {
    const auto p = cslab::thin_shell_prob(1000, 10, 0.5, k);
    CHECK(p.exponent ==
          Catch::Approx(std::pow(0.5, 3.33) * std::pow(1000.0, 0.33)).epsilon(1e-12));
  }
  SECTION("conjectured mode uses sqrt(n)") {
    const auto p = cslab::thin_shell_prob(400, 10, 0.5, k, cslab::ThinShellExponent::Conjectured);
    CHECK(p.exponent == Catch::Approx(20.0).epsilon(1e-12));
    CHECK(p.mode == cslab::ThinShellExponent::Conjectured);
  }
  SECTION("max norm: K=1, n=100 fails with probability e^-10") {
    const auto p = cslab::max_norm_prob(100, 50, 1.0);
    CHECK(p.failure_prob == Catch::Approx(std::exp(-10.0)).epsilon(1e-12));
    CHECK(p.threshold == Catch::Approx(10.0).epsilon(1e-12));
    CHECK(p.n_range_ok);
    CHECK_FALSE(cslab::max_norm_prob(4, 100, 1.0).n_range_ok);
  }
}

TEST_CASE("A_m lower bound") {
  const auto b = cslab::am_lower_bound(100, 40, 4, 1.0, 1.0);
  CHECK(b.threshold == Catch::Approx(10.0 + 2.0 * std::log(20.0) + 1.0).epsilon(1e-12));
  CHECK(b.prob_floor == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));

  CHECK(cslab::am_lower_bound(100, 40, 4, 3.0, 1.0).prob_floor ==
        Catch::Approx(std::exp(-3.0)).epsilon(1e-12));
  CHECK(cslab::am_lower_bound(100, 40, 4, 3.0, 0.01).prob_floor == 0.01);
  CHECK_THROWS_AS(cslab::am_lower_bound(100, 40, 4, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("moment growth of weighted weibull sums") {
  cslab::RngStream s(61, 0);
  SECTION("single variance-one variable: second moment is 1") {
    const auto rep = cslab::moment_growth_check(2.0, {1.0}, s, 100000);
    CHECK(rep.moments[0] == Catch::Approx(1.0).epsilon(0.02));
  }
  SECTION("flat profile at r=1: ratios bounded by 3") {
    const int n = 32;
    std::vector<double> a(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const auto rep = cslab::moment_growth_check(1.0, a, s, 100000);
    for (double ratio : rep.ratios) {
      CHECK(ratio > 0.0);
      CHECK(ratio <= 3.0);
    }
  }
  SECTION("positive homogeneity: doubling a doubles every moment") {
    std::vector<double> a = {0.3, -0.5, 0.8};
    std::vector<double> a2 = {0.6, -1.0, 1.6};
    cslab::RngStream s1(62, 0), s2(62, 0);
    const auto r1 = cslab::moment_growth_check(1.5, a, s1, 100000);
    const auto r2 = cslab::moment_growth_check(1.5, a2, s2, 100000);
    for (std::size_t k = 0; k < r1.moments.size(); ++k)
      CHECK(r2.moments[k] == Catch::Approx(2.0 * r1.moments[k]).epsilon(0.01));
  }
}
