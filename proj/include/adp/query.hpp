#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <tuple>
#include <variant>
#include <vector>

namespace adp {

using Attr = std::string;
using AttrSet = std::set<Attr>;

// One atom of a query body. Ids are assigned in body order at parse/build
// time and survive every rewrite, so structural witnesses can always be
// traced back to the original query.
struct RelationSchema {
  int id = -1;
  std::string name;
  std::vector<Attr> attrs;  // ordered, duplicate-free

  AttrSet attr_set() const { return AttrSet(attrs.begin(), attrs.end()); }
  bool is_vacuum() const { return attrs.empty(); }
  bool contains(const Attr& a) const;
};

// Equality predicate `relation.attr = value`.
struct Selection {
  int relation = -1;
  Attr attr;
  std::string value;

  bool operator<(const Selection& o) const {
    return std::tie(relation, attr, value) < std::tie(o.relation, o.attr, o.value);
  }
  bool operator==(const Selection& o) const {
    return relation == o.relation && attr == o.attr && value == o.value;
  }
};

// Self-join-free conjunctive query.
struct Query {
  AttrSet head;
  std::vector<RelationSchema> body;
  std::vector<Selection> selections;

  AttrSet attrs() const;
  bool is_boolean() const { return head.empty(); }
  bool is_full() const { return head == attrs(); }
  const RelationSchema* find(int id) const;
  const RelationSchema& at(int id) const;
};

struct QueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks every structural invariant: head contained in the body attributes,
// unique relation names, no repeated attribute inside a relation, selections
// referencing existing attributes. Duplicate attribute sets across relations
// are rejected unless allow_duplicate_attr_sets is set; rewrites that strip
// selected attributes can legitimately produce them.
void validate(const Query& q, bool allow_duplicate_attr_sets = false);

// NP-hardness witnesses. Fields hold relation ids of the input query.
struct TriadLike {
  int r1, r2, r3;
};
struct Strand {
  int ri, rj;
};
struct NonHierarchicalHeadJoin {
  Attr a, b;
  int r1, r2, r3;
};
using HardStructure = std::variant<TriadLike, Strand, NonHierarchicalHeadJoin>;

// Output attributes present in every non-vacuum relation.
AttrSet universal_attributes(const Query& q);

struct AttributeRemoval {
  Query query;
  // Relations whose attribute set collapsed onto an earlier relation after
  // the removal: (dropped id, kept id), in id order.
  std::vector<std::pair<int, int>> collapsed;
};

// Residual query after deleting the attributes in s from the head and every
// relation. Keeps the first relation of any group that ends up with an
// identical attribute set and records the dropped ones.
AttributeRemoval remove_attributes(const Query& q, const AttrSet& s);

// Partition of the body by connectivity of the relation-intersection graph.
// Vacuum relations form their own components. Component heads are the
// restriction of head(q); selections follow their relation.
std::vector<Query> connected_components(const Query& q);

std::set<int> vacuum_relations(const Query& q);

// A relation is exogenous when another relation's attribute set is strictly
// contained in its own (equal sets tie-break to the lowest id).
std::set<int> endogenous_relations(const Query& q);

// Lowest-id dominator of rj, or nullopt.
std::optional<int> dominated_by(const Query& q, int rj);
std::set<int> non_dominated_relations(const Query& q);

// Residual query with all non-output attributes deleted. Never collapses
// relations: identity matters for the dichotomy checks.
Query head_join(const Query& q);

// Full CQs only; throws QueryError otherwise. Vacuum relations contribute no
// constraint.
bool is_hierarchical(const Query& q);

std::optional<int> singleton_pivot(const Query& q);

std::optional<TriadLike> find_triad_like(const Query& q);
std::optional<Strand> find_strand(const Query& q);

// Checks triad-like, then strand, then non-hierarchical head join of the
// non-dominated relations. Returns the first witness found.
std::optional<HardStructure> hard_structure(const Query& q);

}  // namespace adp
