#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "adp/query.hpp"

namespace adp {

// A tuple maps attribute names to opaque string values. The vacuum tuple is
// the empty map.
using Tuple = std::map<Attr, std::string>;
using TupleSet = std::set<Tuple>;

struct Instance {
  std::map<int, TupleSet> relations;  // keyed by relation id

  std::size_t total_tuples() const;
  bool operator==(const Instance&) const = default;
};

// A tuple identified together with its relation.
using TupleRef = std::pair<int, Tuple>;
using RemovalSet = std::set<TupleRef>;

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvLoad {
  TupleSet tuples;
  std::size_t duplicates_dropped = 0;
};

// RFC-4180 with a mandatory header row naming exactly the schema attributes
// (any order). Duplicate rows collapse, counted in duplicates_dropped.
CsvLoad load_relation_csv(const RelationSchema& schema, std::string_view bytes);

// Reads <name>.csv for every body relation from dir.
Instance load_instance_dir(const Query& q, const std::filesystem::path& dir);

void write_instance_dir(const Query& q, const Instance& d,
                        const std::filesystem::path& dir);

// Join results in a flat columnar form; cheaper than materialised Tuples when
// the join is large.
struct JoinRows {
  std::vector<Attr> attrs;                     // column order
  std::vector<std::vector<std::string>> rows;  // distinct, unsorted

  std::vector<std::size_t> column_indexes(const AttrSet& of) const;
};

// Natural join of all non-vacuum relations (left-deep hash join, smallest
// first). An empty vacuum relation empties the result; a true one is neutral.
// Selections must already be applied (or absent).
JoinRows full_join_rows(const Query& q, const Instance& d);

TupleSet full_join(const Query& q, const Instance& d);

// Distinct projection of the full join onto head(q).
TupleSet evaluate(const Query& q, const Instance& d);
std::size_t count_results(const Query& q, const Instance& d);

// Semi-join reduction: keeps only tuples that take part in some full join
// result.
Instance reduce_dangling(const Query& q, const Instance& d);

// Splits d by the value of `attrs`, which must be contained in every
// non-vacuum relation. Only keys realised in every non-vacuum relation get a
// group; vacuum relations are copied into each group.
std::map<Tuple, Instance> partition_by(const Query& q, const Instance& d,
                                       const AttrSet& attrs);

struct SelectionResult {
  Query query;        // selection-free residual
  Instance instance;  // filtered, selected attributes stripped
  // Residual tuple -> original tuple, for mapping removals back.
  std::map<TupleRef, Tuple> back;
};

// Applies every predicate (a predicate on attribute A filters every relation
// containing A, since the natural join forces the value everywhere), then
// deletes the selected attributes from schemas, head, and tuples.
SelectionResult apply_selection(const Query& q, const Instance& d);

Tuple project(const Tuple& t, const AttrSet& attrs);
Instance remove_tuples(const Instance& d, const RemovalSet& removals);

// How many results disappear when the given tuples are removed.
long long delta_count(const Query& q, const Instance& d, const RemovalSet& removals);
long long profit(const Query& q, const Instance& d, int relation, const Tuple& t);

}  // namespace adp
