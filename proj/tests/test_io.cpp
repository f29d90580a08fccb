#include <catch2/catch_amalgamated.hpp>

#include "cslab/io.hpp"

using cslab::EnsembleSpec;
using cslab::SignedSupport;

TEST_CASE("matrix CSV round trip is bit exact") {
  const auto a = cslab::generate_matrix(EnsembleSpec::iid_entries(1.5), 7, 11, 99);
  const std::string csv = matrix_to_csv(a);
  const auto b = cslab::matrix_from_csv(csv);
  CHECK(b.n == a.n);
  CHECK(b.N == a.N);
  CHECK(b.spec == a.spec);
  CHECK(b.seed == a.seed);
  CHECK(b.algorithm_id == a.algorithm_id);
  CHECK(b.entries == a.entries);   // bit-exact through %.17g
  CHECK(matrix_to_csv(b) == csv);  // and the text is stable

  SECTION("header schema: n,N,spec,seed,algorithm_id") {
    const std::string head = csv.substr(0, csv.find('\n'));
    CHECK(head == "7,11,iid_entries:r=1.5,99,xoshiro256++");
  }
  SECTION("malformed input is rejected") {
    CHECK_THROWS_AS(cslab::matrix_from_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(cslab::matrix_from_csv("1,2,gaussian,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(cslab::matrix_from_csv("2,2,gaussian,0,x\n1,2\n"), std::invalid_argument);
  }
}

TEST_CASE("matrix JSON round trip is bit exact") {
  const auto a = cslab::generate_matrix(EnsembleSpec::lp_ball(1.5), 5, 8, 123);
  const auto j = cslab::matrix_to_json(a);
  const auto b = cslab::matrix_from_json(cslab::json::parse(j.dump()));
  CHECK(b.entries == a.entries);
  CHECK(b.spec == a.spec);
}

TEST_CASE("signed support parsing") {
  const auto s = cslab::parse_signed_support("3:+,5:-");
  CHECK(s.indices == std::vector<int>{3, 5});
  CHECK(s.signs == std::vector<int>{1, -1});
  CHECK_THROWS_AS(cslab::parse_signed_support("3"), std::invalid_argument);
  CHECK_THROWS_AS(cslab::parse_signed_support("3:x"), std::invalid_argument);
  CHECK_THROWS_AS(cslab::parse_signed_support(""), std::invalid_argument);

  const auto j = cslab::to_json(s);
  CHECK(j["indices"] == std::vector<int>{3, 5});
}

TEST_CASE("report serializers carry witness data") {
  const auto a = cslab::generate_matrix(EnsembleSpec::gaussian(), 6, 9, 7);

  cslab::RipReport rep;
  rep.n = a.n;
  rep.N = a.N;
  rep.spec = a.spec.to_string();
  rep.seed = a.seed;
  rep.algorithm_id = a.algorithm_id;
  rep.insert(cslab::isometry_constant_exact(a, 1));
  rep.insert(cslab::isometry_constant_exact(a, 2));
  const auto j = to_json(rep);
  CHECK(j["entries"].size() == 2);
  CHECK(j["entries"][1]["witness_support"].size() == 2);
  CHECK(j["entries"][1]["method"] == "exact");

  const auto chaos = cslab::chaos_statistics(a, 2);
  const auto cj = to_json(chaos);
  CHECK(cj["B_m"].get<double>() == chaos.b_m);
  CHECK(cj["witness_B"].size() == 2);

  const auto cross = cslab::donoho_cross_check(a, 1);
  const auto xj = to_json(cross);
  CHECK(xj.contains("agree"));
}

TEST_CASE("bound constants JSON honors defaults and overrides") {
  const auto k = cslab::bound_constants_from_json(cslab::json::parse(R"({"theta": 0.1, "r": 2})"));
  CHECK(k.theta == 0.1);
  CHECK(k.r == 2.0);
  CHECK(k.c0 == 3.33);
  CHECK(k.c1 == 0.33);
  CHECK(to_json(k)["log_base"] == "e");
}

TEST_CASE("lp dump is self describing") {
  cslab::LinearProgram lp;
  lp.constraints = cslab::Matrix(1, 2);
  lp.constraints(0, 0) = 1.0;
  lp.constraints(0, 1) = -1.0;
  lp.rhs = {2.0};
  lp.objective = {1.0, 1.0};
  const auto j = to_json(lp);
  CHECK(j["form"].get<std::string>().find("x >= 0") != std::string::npos);
  CHECK(j["M"][0][1] == -1.0);
}
