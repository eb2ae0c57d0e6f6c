#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adp/oracle.hpp"
#include "adp/solver.hpp"
#include "support.hpp"

using namespace adp;
using adp::test::chain_full;
using adp::test::chain_instance;
using adp::test::chain_projected;
using adp::test::q;
using adp::test::tup;

TEST_CASE("running example end to end") {
  Query q1 = chain_full();
  Instance d = chain_instance();

  AdpResult r2 = compute_adp(q1, d, 2, Mode::Report);
  CHECK(r2.cost == 1);
  CHECK_FALSE(r2.exact);
  REQUIRE(r2.removals.has_value());
  CHECK(*r2.removals == RemovalSet{{2, tup({{"C", "c3"}, {"E", "e3"}})}});
  CHECK(r2.removed_outputs == 2);

  CHECK(compute_adp(q1, d, 1).cost == 1);
  CHECK(compute_adp(q1, d, 4).cost == brute_force_adp(q1, d, 4).cost);

  AdpResult p2 = compute_adp(chain_projected(), d, 2, Mode::Report);
  CHECK(p2.cost == brute_force_adp(chain_projected(), d, 2).cost);
  CHECK(delta_count(chain_projected(), d, *p2.removals) >= 2);
}

TEST_CASE("k validation") {
  Query q1 = chain_full();
  Instance d = chain_instance();
  CHECK_THROWS_AS(compute_adp(q1, d, 0), SolverError);
  CHECK_THROWS_AS(compute_adp(q1, d, 5), SolverError);
  Instance empty;
  empty.relations[0] = {};
  empty.relations[1] = {};
  empty.relations[2] = {};
  CHECK_THROWS_AS(compute_adp(q1, empty, 1), SolverError);
}

TEST_CASE("boolean min cut") {
  Query chain = q("Q() :- R1(A, B), R2(B, C)");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}, {"B", "b1"}}), tup({{"A", "a2"}, {"B", "b1"}}),
                    tup({{"A", "a3"}, {"B", "b2"}})};
  d.relations[1] = {tup({{"B", "b1"}, {"C", "c1"}}), tup({{"B", "b2"}, {"C", "c1"}}),
                    tup({{"B", "b2"}, {"C", "c2"}})};
  AdpResult r = solve_boolean(chain, d, Mode::Report);
  CHECK(r.cost == 2);  // cut {R2(b1,c1)} side plus the cheaper b2 side
  CHECK(r.exact);
  CHECK(delta_count(chain, d, *r.removals) == 1);
  CHECK(r.cost == brute_force_adp(chain, d, 1).cost);

  // Single endogenous relation: every surviving tuple must go.
  Query single = q("Q() :- R1(A), R2(A, B)");
  Instance ds;
  ds.relations[0] = {tup({{"A", "a1"}}), tup({{"A", "a2"}}), tup({{"A", "a3"}})};
  ds.relations[1] = {tup({{"A", "a1"}, {"B", "b1"}}), tup({{"A", "a2"}, {"B", "b2"}})};
  AdpResult rs = solve_boolean(single, ds, Mode::Report);
  CHECK(rs.cost == 2);  // a3 dangles
  CHECK(delta_count(single, ds, *rs.removals) == 1);

  CHECK_THROWS_AS(solve_boolean(chain_full(), chain_instance(), Mode::Count),
                  SolverError);
}

TEST_CASE("singleton, pivot inside the head") {
  Query s = q("Q(A, B) :- R1(A), R2(A, B)");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}}), tup({{"A", "a2"}})};
  d.relations[1] = {tup({{"A", "a1"}, {"B", "b1"}}), tup({{"A", "a1"}, {"B", "b2"}}),
                    tup({{"A", "a2"}, {"B", "b3"}})};
  AdpResult r = solve_singleton(s, d, 2, Mode::Report);
  CHECK(r.cost == 1);
  CHECK(*r.removals == RemovalSet{{0, tup({{"A", "a1"}})}});
  CHECK(r.removed_outputs == 2);
  CHECK(solve_singleton(s, d, 3, Mode::Count).cost == 2);
}

TEST_CASE("singleton, head inside the pivot") {
  Query s = q("Q(A) :- R1(A, B)");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}, {"B", "b1"}}), tup({{"A", "a1"}, {"B", "b2"}}),
                    tup({{"A", "a2"}, {"B", "b3"}})};
  AdpResult r = solve_singleton(s, d, 1, Mode::Report);
  CHECK(r.cost == 1);
  CHECK(*r.removals == RemovalSet{{0, tup({{"A", "a2"}, {"B", "b3"}})}});
  CHECK(solve_singleton(s, d, 2, Mode::Count).cost == 3);
}

TEST_CASE("universal attribute DP") {
  Query u = q("Q(F, G, H) :- R2(F, G), R5(G, H)");
  Instance d;
  d.relations[0] = {tup({{"F", "f1"}, {"G", "g1"}}), tup({{"F", "f2"}, {"G", "g1"}}),
                    tup({{"F", "f1"}, {"G", "g2"}})};
  d.relations[1] = {tup({{"G", "g1"}, {"H", "h1"}}), tup({{"G", "g2"}, {"H", "h1"}}),
                    tup({{"G", "g2"}, {"H", "h2"}})};
  CHECK(count_results(u, d) == 4);
  AdpResult r = solve_universe(u, d, 2, Mode::Report);
  CHECK(r.cost == 1);
  CHECK(r.exact);
  CHECK(*r.removals == RemovalSet{{1, tup({{"G", "g1"}, {"H", "h1"}})}});
  CHECK(delta_count(u, d, *r.removals) == 2);
  CHECK(solve_universe(u, d, 4, Mode::Count).cost == 2);
  CHECK(naive_combiners(u, d, 2).cost == 1);
  CHECK(naive_combiners(u, d, 4).cost == 2);
}

TEST_CASE("component DP") {
  Query c = q("Q(A, B) :- R1(A), R2(B)");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}}), tup({{"A", "a2"}})};
  d.relations[1] = {tup({{"B", "b1"}}), tup({{"B", "b2"}}), tup({{"B", "b3"}})};
  CHECK(count_results(c, d) == 6);
  AdpResult r3 = solve_decompose(c, d, 3, Mode::Report);
  CHECK(r3.cost == 1);
  CHECK(r3.exact);
  CHECK(delta_count(c, d, *r3.removals) >= 3);
  CHECK(solve_decompose(c, d, 4, Mode::Count).cost == 2);
  CHECK(naive_combiners(c, d, 3).cost == 1);
  CHECK(naive_combiners(c, d, 4).cost == 2);
  AdpResult r6 = solve_decompose(c, d, 6, Mode::Report);
  CHECK(r6.cost == 2);
  CHECK(delta_count(c, d, *r6.removals) == 6);
}

TEST_CASE("greedy on the running example") {
  Query q1 = chain_full();
  Instance d = chain_instance();
  AdpResult r = greedy_for_cq(q1, d, 2, Mode::Report);
  CHECK(r.cost == 1);
  CHECK_FALSE(r.exact);
  // Greedy's first pick is the lowest-id tuple of maximum profit.
  CHECK(*r.removals == RemovalSet{{0, tup({{"A", "a2"}, {"B", "b2"}})}});
  CHECK(delta_count(q1, d, *r.removals) >= 2);

  AdpResult r4 = greedy_for_cq(q1, d, 4, Mode::Report);
  CHECK(delta_count(q1, d, *r4.removals) >= 4);

  // Projected variant works too (profits measured on the projection).
  AdpResult p = greedy_for_cq(chain_projected(), d, 3, Mode::Report);
  CHECK(delta_count(chain_projected(), d, *p.removals) >= 3);
}

TEST_CASE("drastic greedy") {
  Query q1 = chain_full();
  Instance d = chain_instance();
  AdpResult r = drastic_greedy_full(q1, d, 2, Mode::Report);
  CHECK(r.cost == 1);
  // Later relations win profit ties, so R3(c3,e3) beats R1(a2,b2).
  CHECK(*r.removals == RemovalSet{{2, tup({{"C", "c3"}, {"E", "e3"}})}});

  AdpResult r4 = drastic_greedy_full(q1, d, 4, Mode::Report);
  CHECK(r4.cost == 3);  // single-relation restriction pays here; optimum is 3 too
  CHECK(delta_count(q1, d, *r4.removals) >= 4);
  CHECK(brute_force_adp(q1, d, 4).cost == 3);

  CHECK_THROWS_AS(drastic_greedy_full(chain_projected(), d, 2, Mode::Count),
                  SolverError);
}

TEST_CASE("dispatch and exactness flags") {
  // Easy query: the full pipeline stays exact.
  Query easy = q("Q(A, B, E) :- R1(A, E), R2(A, B, E), R3(B, E), R4(E)");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}, {"E", "e1"}}), tup({{"A", "a2"}, {"E", "e1"}})};
  d.relations[1] = {tup({{"A", "a1"}, {"B", "b1"}, {"E", "e1"}}),
                    tup({{"A", "a2"}, {"B", "b1"}, {"E", "e1"}})};
  d.relations[2] = {tup({{"B", "b1"}, {"E", "e1"}})};
  d.relations[3] = {tup({{"E", "e1"}})};
  long long n = static_cast<long long>(count_results(easy, d));
  for (long long k = 1; k <= n; ++k) {
    AdpResult r = compute_adp(easy, d, k, Mode::Report);
    CHECK(r.exact);
    CHECK(r.cost == brute_force_adp(easy, d, k).cost);
    CHECK(delta_count(easy, d, *r.removals) >= k);
  }

  // Hard query: flag drops, heuristic path reported.
  AdpResult hard = compute_adp(chain_full(), chain_instance(), 2);
  CHECK_FALSE(hard.exact);
  CHECK(hard.path.front() == "drastic");

  AdpResult hard_greedy =
      compute_adp(chain_full(), chain_instance(), 2, Mode::Count, Heuristic::Greedy);
  CHECK(hard_greedy.path.front() == "greedy");

  // Forcing drastic on a non-full residual falls back to greedy.
  AdpResult fb = compute_adp(chain_projected(), chain_instance(), 1, Mode::Count,
                             Heuristic::Drastic);
  CHECK_FALSE(fb.exact);
  CHECK(std::find(fb.path.begin(), fb.path.end(), "drastic-fallback") != fb.path.end());
}

TEST_CASE("selection wrapper") {
  Query s = q("Q(A) :- R1(A, B), R2(B) | R2.B = \"b1\"");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}, {"B", "b1"}}), tup({{"A", "a2"}, {"B", "b1"}}),
                    tup({{"A", "a3"}, {"B", "b2"}})};
  d.relations[1] = {tup({{"B", "b1"}}), tup({{"B", "b2"}})};
  AdpResult r = compute_adp(s, d, 2, Mode::Report);
  CHECK(r.cost == 1);
  CHECK(r.exact);
  CHECK(r.path.front() == "selection");
  // The reported removal is the original R2 tuple, not the stripped residual.
  CHECK(*r.removals == RemovalSet{{1, tup({{"B", "b1"}})}});
}

TEST_CASE("vacuum pivot solves in one deletion") {
  Query v = q("Q(A) :- R1(A), R2()");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}}), tup({{"A", "a2"}})};
  d.relations[1] = {Tuple{}};
  AdpResult r = compute_adp(v, d, 2, Mode::Report);
  CHECK(r.cost == 1);
  CHECK(r.exact);
  CHECK(*r.removals == RemovalSet{{1, Tuple{}}});
}
