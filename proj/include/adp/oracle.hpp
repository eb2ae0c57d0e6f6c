#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "adp/engine.hpp"
#include "adp/query.hpp"
#include "adp/solver.hpp"

namespace adp {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ground truth by exhaustion: subsets of input tuples in increasing size,
// lexicographic within a size; first subset destroying >= k results wins.
// Guards: at most max_tuples inputs and 2^24 candidate subsets.
AdpResult brute_force_adp(const Query& q, const Instance& d, long long k,
                          std::size_t max_tuples = 18);

// Second ground-truth route for full CQs and small k: fix the k results to
// destroy, bucket input tuples by which of them they hit, and cover with one
// representative per bucket.
AdpResult fixed_k_full_adp(const Query& q, const Instance& d, long long k,
                           long long max_k = 3);

// Straightforward combiner evaluation, used to cross-check the DP stages.
// Disconnected queries: enumerate per-component removal vectors directly.
// Otherwise the query must have a universal attribute: partition on the
// alphabetically first one and combine brute-force sub-answers.
AdpResult naive_combiners(const Query& q, const Instance& d, long long k);

struct ZipfSpec {
  std::size_t tuples_per_relation = 0;
  std::map<Attr, std::size_t> distinct;  // pool size per attribute
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

// Synthetic instance: every attribute draws value i of its pool with
// probability proportional to (i+1)^-alpha; duplicate tuples are redrawn.
// Attributes shared between relations share one pool, so joins are
// meaningful. Fails when a relation's pool capacity cannot hold the
// requested tuple count.
Instance generate_zipf(const ZipfSpec& spec, const Query& q);

// One zipf draw stream, exposed for distribution tests.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double alpha, std::uint64_t seed);
  std::size_t next();

 private:
  std::vector<double> cdf_;
  std::uint64_t state_;
};

}  // namespace adp
