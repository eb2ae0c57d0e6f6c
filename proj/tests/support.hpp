#pragma once

#include <random>
#include <string>
#include <vector>

#include "adp/engine.hpp"
#include "adp/text.hpp"

namespace adp::test {

inline Query q(const std::string& text) { return parse_query_or_throw(text); }

inline Tuple tup(const std::vector<std::pair<std::string, std::string>>& kv) {
  Tuple t;
  for (const auto& [a, v] : kv) t[a] = v;
  return t;
}

// Running example: a two-hop chain over R1(A,B), R2(B,C), R3(C,E) with four
// full results.
inline Query chain_full() {
  return q("Q1(A, B, C, E) :- R1(A, B), R2(B, C), R3(C, E)");
}

inline Query chain_projected() {
  return q("Q2(A, E) :- R1(A, B), R2(B, C), R3(C, E)");
}

inline Instance chain_instance() {
  Instance d;
  d.relations[0] = {tup({{"A", "a1"}, {"B", "b1"}}),
                    tup({{"A", "a2"}, {"B", "b2"}}),
                    tup({{"A", "a3"}, {"B", "b3"}})};
  d.relations[1] = {tup({{"B", "b1"}, {"C", "c1"}}),
                    tup({{"B", "b2"}, {"C", "c2"}}),
                    tup({{"B", "b2"}, {"C", "c3"}}),
                    tup({{"B", "b3"}, {"C", "c3"}})};
  d.relations[2] = {tup({{"C", "c1"}, {"E", "e1"}}),
                    tup({{"C", "c2"}, {"E", "e3"}}),
                    tup({{"C", "c3"}, {"E", "e3"}})};
  return d;
}

// Small random instance: each relation gets `per_relation` tuples with
// attribute values drawn from `domain` symbols per attribute.
inline Instance random_instance(const Query& query, std::mt19937& rng,
                                int per_relation, int domain) {
  Instance d;
  std::uniform_int_distribution<int> pick(0, domain - 1);
  for (const auto& r : query.body) {
    TupleSet ts;
    if (r.is_vacuum()) {
      ts.insert(Tuple{});
    } else {
      for (int i = 0; i < per_relation; ++i) {
        Tuple t;
        for (const Attr& a : r.attrs)
          t[a] = a + std::to_string(pick(rng));
        ts.insert(std::move(t));
      }
    }
    d.relations[r.id] = std::move(ts);
  }
  return d;
}

}  // namespace adp::test
