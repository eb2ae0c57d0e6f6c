#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "adp/engine.hpp"
#include "support.hpp"

using namespace adp;
using adp::test::chain_full;
using adp::test::chain_instance;
using adp::test::chain_projected;
using adp::test::q;
using adp::test::tup;

TEST_CASE("csv loading") {
  RelationSchema r{0, "R1", {"A", "B"}};

  SUBCASE("plain") {
    CsvLoad l = load_relation_csv(r, "A,B\na1,b1\na2,b2\n");
    CHECK(l.tuples.size() == 2);
    CHECK(l.duplicates_dropped == 0);
    CHECK(l.tuples.count(tup({{"A", "a1"}, {"B", "b1"}})) == 1);
  }
  SUBCASE("reordered header, CRLF, missing final newline") {
    CsvLoad l = load_relation_csv(r, "B,A\r\nb1,a1\r\nb2,a2");
    CHECK(l.tuples.count(tup({{"A", "a2"}, {"B", "b2"}})) == 1);
  }
  SUBCASE("quoting per RFC 4180") {
    CsvLoad l = load_relation_csv(r, "A,B\n\"a,1\",\"b\"\"x\"\"\"\n\"line\nbreak\",v\n");
    CHECK(l.tuples.count(tup({{"A", "a,1"}, {"B", "b\"x\""}})) == 1);
    CHECK(l.tuples.count(tup({{"A", "line\nbreak"}, {"B", "v"}})) == 1);
  }
  SUBCASE("duplicates collapse with a count") {
    CsvLoad l = load_relation_csv(r, "A,B\nx,y\nx,y\nx,y\n");
    CHECK(l.tuples.size() == 1);
    CHECK(l.duplicates_dropped == 2);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(load_relation_csv(r, ""), EngineError);             // no header
    CHECK_THROWS_AS(load_relation_csv(r, "A,C\n1,2\n"), EngineError);   // bad header
    CHECK_THROWS_AS(load_relation_csv(r, "A,B\n1\n"), EngineError);     // ragged
    CHECK_THROWS_AS(load_relation_csv(r, "A,B\n1,2,3\n"), EngineError); // ragged
    CHECK_THROWS_AS(load_relation_csv(r, "A,B\n\xff\xfe,2\n"), EngineError);
    CHECK_THROWS_AS(load_relation_csv(r, "A,B\n\"x,2\n"), EngineError); // open quote
  }
  SUBCASE("vacuum relations") {
    RelationSchema v{1, "R0", {}};
    CHECK(load_relation_csv(v, "").tuples.empty());
    CHECK(load_relation_csv(v, "()\n").tuples == TupleSet{Tuple{}});
    CHECK_THROWS_AS(load_relation_csv(v, "A\n1\n"), EngineError);
  }
}

TEST_CASE("instance directory round trip") {
  namespace fs = std::filesystem;
  Query query = q("Q(A) :- R1(A, B), R2(B), R3()");
  Instance d;
  d.relations[0] = {tup({{"A", "a,1"}, {"B", "b\n2"}}),
                    tup({{"A", "a2"}, {"B", "b2"}})};
  d.relations[1] = {tup({{"B", "b2"}})};
  d.relations[2] = {Tuple{}};

  fs::path dir = fs::temp_directory_path() / "adp_engine_roundtrip";
  fs::remove_all(dir);
  write_instance_dir(query, d, dir);
  Instance back = load_instance_dir(query, dir);
  CHECK(back == d);
  fs::remove_all(dir);
}

TEST_CASE("evaluation on the running example") {
  Instance d = chain_instance();
  CHECK(evaluate(chain_full(), d).size() == 4);
  CHECK(count_results(chain_full(), d) == 4);
  CHECK(evaluate(chain_projected(), d).size() == 3);
  CHECK(count_results(chain_projected(), d) == 3);

  TupleSet out = evaluate(chain_projected(), d);
  CHECK(out.count(tup({{"A", "a1"}, {"E", "e1"}})) == 1);
  CHECK(out.count(tup({{"A", "a2"}, {"E", "e3"}})) == 1);
  CHECK(out.count(tup({{"A", "a3"}, {"E", "e3"}})) == 1);
}

TEST_CASE("boolean and vacuum semantics") {
  Query b = q("Q() :- R1(A), R2(A, B)");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}})};
  d.relations[1] = {tup({{"A", "a1"}, {"B", "b1"}})};
  CHECK(count_results(b, d) == 1);
  d.relations[0].clear();
  CHECK(count_results(b, d) == 0);

  Query v = q("Q(A) :- R1(A), R2()");
  Instance dv;
  dv.relations[0] = {tup({{"A", "a1"}})};
  dv.relations[1] = {Tuple{}};
  CHECK(count_results(v, dv) == 1);
  dv.relations[1].clear();
  CHECK(count_results(v, dv) == 0);

  Query allv = q("Q() :- R1()");
  Instance da;
  da.relations[0] = {Tuple{}};
  CHECK(count_results(allv, da) == 1);
}

TEST_CASE("reduce_dangling keeps exactly the joining tuples") {
  Query query = chain_full();
  Instance d = chain_instance();
  d.relations[0].insert(tup({{"A", "ax"}, {"B", "bx"}}));   // dangling
  d.relations[2].insert(tup({{"C", "cx"}, {"E", "ex"}}));   // dangling
  Instance r = reduce_dangling(query, d);
  CHECK(r == chain_instance());
  CHECK(count_results(query, r) == count_results(query, d));
}

TEST_CASE("partition_by splits on shared attributes") {
  Query query = q("Q(B, C, A) :- R1(A, B), R2(B, C)");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}, {"B", "b1"}}), tup({{"A", "a2"}, {"B", "b2"}})};
  d.relations[1] = {tup({{"B", "b1"}, {"C", "c1"}}), tup({{"B", "b3"}, {"C", "c3"}})};
  auto groups = partition_by(query, d, {"B"});
  REQUIRE(groups.size() == 1);  // only b1 appears on both sides
  const Instance& g = groups.at(tup({{"B", "b1"}}));
  CHECK(g.relations.at(0).size() == 1);
  CHECK(g.relations.at(1).size() == 1);

  CHECK_THROWS_AS(partition_by(query, d, {"A"}), EngineError);
}

TEST_CASE("apply_selection filters and strips") {
  Query query = q("Q(A) :- R1(A, B), R2(B) | R1.B = \"b1\"");
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}, {"B", "b1"}}), tup({{"A", "a2"}, {"B", "b2"}})};
  d.relations[1] = {tup({{"B", "b1"}}), tup({{"B", "b2"}})};

  SelectionResult r = apply_selection(query, d);
  CHECK(r.query.selections.empty());
  CHECK(r.query.head == AttrSet{"A"});
  CHECK(r.query.body[0].attrs == std::vector<Attr>{"A"});
  CHECK(r.query.body[1].is_vacuum());
  // The predicate reaches R2 as well: its b2 tuple can never join.
  CHECK(r.instance.relations.at(0) == TupleSet{tup({{"A", "a1"}})});
  CHECK(r.instance.relations.at(1) == TupleSet{Tuple{}});
  CHECK(r.back.at({1, Tuple{}}) == tup({{"B", "b1"}}));
  CHECK(count_results(r.query, r.instance) == 1);
}

TEST_CASE("profit and delta_count") {
  Query query = chain_full();
  Instance d = chain_instance();
  CHECK(profit(query, d, 2, tup({{"C", "c3"}, {"E", "e3"}})) == 2);
  CHECK(profit(query, d, 0, tup({{"A", "a1"}, {"B", "b1"}})) == 1);
  CHECK(profit(query, d, 0, tup({{"A", "a2"}, {"B", "b2"}})) == 2);
  RemovalSet both = {{2, tup({{"C", "c3"}, {"E", "e3"}})},
                     {0, tup({{"A", "a1"}, {"B", "b1"}})}};
  CHECK(delta_count(query, d, both) == 3);
  CHECK(delta_count(chain_projected(), d, both) == 2);
}
