#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adp/oracle.hpp"
#include "support.hpp"

using namespace adp;
using adp::test::chain_full;
using adp::test::chain_instance;
using adp::test::q;
using adp::test::random_instance;
using adp::test::tup;

TEST_CASE("brute force on the running example") {
  Query q1 = chain_full();
  Instance d = chain_instance();
  CHECK(brute_force_adp(q1, d, 1).cost == 1);
  AdpResult r2 = brute_force_adp(q1, d, 2);
  CHECK(r2.cost == 1);
  CHECK(r2.removed_outputs >= 2);
  REQUIRE(r2.removals.has_value());
  CHECK(delta_count(q1, d, *r2.removals) >= 2);
  CHECK(brute_force_adp(q1, d, 3).cost == 2);
  CHECK(brute_force_adp(q1, d, 4).cost == 3);
  CHECK_THROWS_AS(brute_force_adp(q1, d, 5), OracleError);
  CHECK_THROWS_AS(brute_force_adp(q1, d, 1, /*max_tuples=*/4), OracleError);
}

TEST_CASE("fixed-k route agrees with subset enumeration") {
  std::mt19937 rng(7);
  std::vector<Query> shapes = {
      chain_full(),
      q("Q(A, B) :- R1(A), R2(A, B), R3(B)"),
      q("Q(A, B) :- R1(A), R2(B)"),
      q("Q(A, B, C) :- R1(A, B), R2(B, C)"),
  };
  int done = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Query& shape = shapes[trial % shapes.size()];
    Instance d = random_instance(shape, rng, 4, 3);
    long long n = static_cast<long long>(count_results(shape, d));
    for (long long k = 1; k <= std::min<long long>(n, 3); ++k) {
      AdpResult a = brute_force_adp(shape, d, k);
      AdpResult b = fixed_k_full_adp(shape, d, k);
      CHECK(a.cost == b.cost);
      CHECK(delta_count(shape, d, *b.removals) >= k);
      ++done;
    }
  }
  CHECK(done > 40);
  CHECK_THROWS_AS(fixed_k_full_adp(chain_full(), chain_instance(), 4), OracleError);
}

TEST_CASE("naive combiners match brute force") {
  std::mt19937 rng(11);
  std::vector<Query> shapes = {
      q("Q(A, B) :- R1(A), R2(B)"),
      q("Q(A, B, C) :- R1(A), R2(B, C)"),
      q("Q(F, G, H) :- R2(F, G), R5(G, H)"),
      q("Q(A, B, E) :- R1(A, E), R2(A, B, E), R3(B, E), R4(E)"),
  };
  for (int trial = 0; trial < 24; ++trial) {
    const Query& shape = shapes[trial % shapes.size()];
    Instance d = random_instance(shape, rng, 3, 3);
    long long n = static_cast<long long>(count_results(shape, d));
    for (long long k = 1; k <= n; ++k)
      CHECK(naive_combiners(shape, d, k).cost == brute_force_adp(shape, d, k).cost);
  }
  // Connected query with no universal attribute is out of scope here.
  Query path = q("Q(A, B) :- R1(A), R2(A, B), R3(B)");
  Instance dp = random_instance(path, rng, 3, 2);
  if (count_results(path, dp) == 0) dp = random_instance(path, rng, 4, 2);
  CHECK_THROWS_AS(naive_combiners(path, dp, 1), OracleError);
}

TEST_CASE("zipf generation is deterministic and well-formed") {
  Query shape = q("Q(A, B, C) :- R1(A, B), R2(B, C)");
  ZipfSpec spec;
  spec.tuples_per_relation = 200;
  spec.distinct = {{"A", 40}, {"B", 25}, {"C", 40}};
  spec.alpha = 1.0;
  spec.seed = 42;

  Instance d1 = generate_zipf(spec, shape);
  Instance d2 = generate_zipf(spec, shape);
  CHECK(d1 == d2);
  spec.seed = 43;
  CHECK_FALSE(generate_zipf(spec, shape) == d1);

  for (const auto& [rid, tuples] : d1.relations) {
    CHECK(tuples.size() == 200);
    for (const Tuple& t : tuples)
      for (const auto& [attr, value] : t) {
        CHECK(value.rfind(attr + "_", 0) == 0);
        std::size_t idx = std::stoul(value.substr(attr.size() + 1));
        CHECK(idx < spec.distinct.at(attr));
      }
  }
  CHECK(count_results(shape, d1) > 0);  // shared B pool makes the join land

  ZipfSpec tight = spec;
  tight.distinct = {{"A", 2}, {"B", 2}, {"C", 2}};
  CHECK_THROWS_AS(generate_zipf(tight, shape), OracleError);
  ZipfSpec missing = spec;
  missing.distinct.erase("C");
  CHECK_THROWS_AS(generate_zipf(missing, shape), OracleError);
}

TEST_CASE("sampler frequencies follow the exponent") {
  SUBCASE("alpha 0 is uniform") {
    const std::size_t n = 20, draws = 100000;
    ZipfSampler s(n, 0.0, 9001);
    std::vector<double> freq(n, 0.0);
    for (std::size_t i = 0; i < draws; ++i) freq[s.next()] += 1.0;
    double expected = static_cast<double>(draws) / n;
    double chi2 = 0.0;
    for (double f : freq) chi2 += (f - expected) * (f - expected) / expected;
    CHECK(chi2 < 45.0);  // 19 dof, far beyond the 0.999 quantile
  }
  SUBCASE("alpha 1 has log-log slope near -1") {
    const std::size_t n = 64, draws = 400000;
    ZipfSampler s(n, 1.0, 1234);
    std::vector<double> freq(n, 0.0);
    for (std::size_t i = 0; i < draws; ++i) freq[s.next()] += 1.0;
    // Least-squares fit over the well-populated top ranks.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = 16;
    for (int i = 0; i < m; ++i) {
      double x = std::log(i + 1.0), y = std::log(freq[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
  }
}

TEST_CASE("removal sets from every oracle are real removals") {
  Query shape = q("Q(A, B) :- R1(A, B), R2(B)");
  std::mt19937 rng(5);
  Instance d = random_instance(shape, rng, 5, 3);
  long long n = static_cast<long long>(count_results(shape, d));
  REQUIRE(n >= 2);
  for (long long k : {1LL, n}) {
    AdpResult r = brute_force_adp(shape, d, k);
    REQUIRE(r.removals.has_value());
    CHECK(static_cast<long long>(r.removals->size()) == r.cost);
    CHECK(delta_count(shape, d, *r.removals) == r.removed_outputs);
    CHECK(r.removed_outputs >= k);
    for (const auto& [rid, t] : *r.removals) CHECK(d.relations.at(rid).count(t) == 1);
    // The count-only oracle still has to agree on the cost.
    CHECK(naive_combiners(shape, d, k).cost == r.cost);
  }
}
