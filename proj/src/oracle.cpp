#include "adp/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace adp {
namespace {

constexpr std::uint64_t kSubsetCeiling = std::uint64_t{1} << 24;

std::vector<TupleRef> all_tuples(const Query& q, const Instance& d) {
  std::vector<TupleRef> out;
  for (const auto& r : q.body) {
    auto it = d.relations.find(r.id);
    if (it == d.relations.end()) continue;
    for (const Tuple& t : it->second) out.emplace_back(r.id, t);
  }
  return out;
}

// Advances pick to the next k-combination of {0..n-1} in lexicographic
// order; false once exhausted.
bool next_combination(std::vector<std::size_t>& pick, std::size_t n) {
  const std::size_t k = pick.size();
  for (std::size_t i = k; i-- > 0;) {
    if (pick[i] != i + n - k) {
      ++pick[i];
      for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

AdpResult brute_force_adp(const Query& q, const Instance& d, long long k,
                          std::size_t max_tuples) {
  validate(q, true);
  if (!q.selections.empty())
    throw OracleError("brute force expects a selection-free query");
  std::vector<TupleRef> tuples = all_tuples(q, d);
  if (tuples.size() > max_tuples)
    throw OracleError("instance has " + std::to_string(tuples.size()) +
                      " tuples, above the brute-force cap of " +
                      std::to_string(max_tuples));
  long long total = static_cast<long long>(count_results(q, d));
  if (k < 1 || k > total)
    throw OracleError("k must be between 1 and " + std::to_string(total));

  const std::size_t n = tuples.size();
  std::uint64_t examined = 0;
  for (std::size_t size = 1; size <= n; ++size) {
    // Lexicographic combination enumeration over tuple indexes.
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      if (++examined > kSubsetCeiling)
        throw OracleError("subset ceiling (2^24) exceeded");
      RemovalSet removal;
      for (std::size_t i : pick) removal.insert(tuples[i]);
      long long delta = delta_count(q, d, removal);
      if (delta >= k) {
        AdpResult res;
        res.cost = static_cast<long long>(size);
        res.removals = std::move(removal);
        res.removed_outputs = delta;
        res.exact = true;
        res.path = {"brute-force"};
        return res;
      }
      if (!next_combination(pick, n)) break;
    }
  }
  throw OracleError("no subset reaches k; inconsistent instance");
}

AdpResult fixed_k_full_adp(const Query& q, const Instance& d, long long k,
                           long long max_k) {
  validate(q, true);
  if (!q.is_full()) throw OracleError("fixed-k oracle requires a full query");
  if (k > max_k)
    throw OracleError("k above the fixed-k cap of " + std::to_string(max_k));
  std::vector<Tuple> outputs;
  for (const Tuple& o : evaluate(q, d)) outputs.push_back(o);
  const std::size_t m = outputs.size();
  if (k < 1 || k > static_cast<long long>(m))
    throw OracleError("k must be between 1 and " + std::to_string(m));
  std::vector<TupleRef> tuples = all_tuples(q, d);

  AdpResult best;
  best.cost = -1;

  std::vector<std::size_t> pick(k);
  for (long long i = 0; i < k; ++i) pick[i] = static_cast<std::size_t>(i);
  while (true) {
    // Signature of a tuple: which of the k chosen outputs its deletion kills.
    // For a full CQ that is exactly the outputs it projects into.
    std::map<std::uint32_t, TupleRef> rep;
    for (const TupleRef& tr : tuples) {
      std::uint32_t sig = 0;
      for (long long b = 0; b < k; ++b) {
        const Tuple& o = outputs[pick[b]];
        bool hits = true;
        for (const auto& [a, v] : tr.second) {
          if (o.at(a) != v) {
            hits = false;
            break;
          }
        }
        if (hits) sig |= 1u << b;
      }
      if (sig) rep.emplace(sig, tr);  // keep the first (relation id, tuple) rep
    }

    std::vector<std::pair<std::uint32_t, TupleRef>> reps(rep.begin(), rep.end());
    const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
    for (std::uint32_t mask = 1; mask < (1u << reps.size()); ++mask) {
      std::uint32_t covered = 0;
      int cnt = 0;
      for (std::size_t i = 0; i < reps.size(); ++i)
        if (mask & (1u << i)) {
          covered |= reps[i].first;
          ++cnt;
        }
      if (covered != full) continue;
      if (best.cost < 0 || cnt < best.cost) {
        best.cost = cnt;
        RemovalSet removal;
        for (std::size_t i = 0; i < reps.size(); ++i)
          if (mask & (1u << i)) removal.insert(reps[i].second);
        best.removals = std::move(removal);
      }
    }

    if (!next_combination(pick, m)) break;
  }
  if (best.cost < 0) throw OracleError("no cover found; inconsistent instance");
  best.removed_outputs = delta_count(q, d, *best.removals);
  best.exact = true;
  best.path = {"fixed-k"};
  return best;
}

AdpResult naive_combiners(const Query& q, const Instance& d, long long k) {
  validate(q, true);
  std::vector<Query> comps = connected_components(q);
  long long total = static_cast<long long>(count_results(q, d));
  if (k < 1 || k > total)
    throw OracleError("k must be between 1 and " + std::to_string(total));

  if (comps.size() >= 2) {
    std::vector<Instance> insts;
    std::vector<long long> m;
    for (const Query& c : comps) {
      Instance di;
      for (const auto& r : c.body) {
        auto it = d.relations.find(r.id);
        di.relations[r.id] = it == d.relations.end() ? TupleSet{} : it->second;
      }
      m.push_back(static_cast<long long>(count_results(c, di)));
      insts.push_back(std::move(di));
    }
    std::map<std::pair<std::size_t, long long>, long long> comp_cost;
    auto cost_of = [&](std::size_t i, long long ki) {
      auto [it, fresh] = comp_cost.emplace(std::make_pair(i, ki), 0);
      if (fresh) it->second = brute_force_adp(comps[i], insts[i], ki).cost;
      return it->second;
    };

    AdpResult best;
    best.cost = -1;
    std::vector<long long> ks(comps.size(), 0);
    while (true) {
      long long survive = 1, product = 1, cost = 0;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        survive *= m[i] - ks[i];
        product *= m[i];
      }
      if (product - survive >= k) {
        for (std::size_t i = 0; i < comps.size(); ++i)
          if (ks[i] > 0) cost += cost_of(i, ks[i]);
        if (best.cost < 0 || cost < best.cost) best.cost = cost;
      }
      std::size_t i = 0;
      for (; i < comps.size(); ++i) {
        if (ks[i] < m[i]) {
          ++ks[i];
          break;
        }
        ks[i] = 0;
      }
      if (i == comps.size()) break;
    }
    if (best.cost < 0) throw OracleError("no removal vector reaches k");
    best.removed_outputs = k;
    best.exact = true;
    best.path = {"naive-decompose"};
    return best;
  }

  AttrSet universal = universal_attributes(q);
  if (universal.empty())
    throw OracleError("query is connected and has no universal attribute");
  const Attr pivot = *universal.begin();
  Query qr = remove_attributes(q, AttrSet{pivot}).query;

  std::vector<long long> sizes;
  std::vector<Instance> groups;
  for (auto& [key, inst] : partition_by(q, d, AttrSet{pivot})) {
    Instance stripped;
    for (auto& [id, ts] : inst.relations) {
      TupleSet out;
      for (const Tuple& t : ts) {
        Tuple nt = t;
        nt.erase(pivot);
        out.insert(std::move(nt));
      }
      stripped.relations[id] = std::move(out);
    }
    sizes.push_back(static_cast<long long>(count_results(qr, stripped)));
    groups.push_back(std::move(stripped));
  }

  std::vector<long long> dp(k + 1, -1);
  dp[0] = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::vector<long long> group_cost(std::min(sizes[i], k) + 1, -1);
    group_cost[0] = 0;
    std::vector<long long> next(k + 1, -1);
    for (long long s = 0; s <= k; ++s) {
      if (dp[s] < 0) continue;
      for (long long add = 0; add <= std::min(sizes[i], k - s); ++add) {
        if (group_cost[add] < 0)
          group_cost[add] = brute_force_adp(qr, groups[i], add).cost;
        long long c = dp[s] + group_cost[add];
        long long target = std::min<long long>(s + add, k);
        if (next[target] < 0 || c < next[target]) next[target] = c;
      }
    }
    dp = std::move(next);
  }
  if (dp[k] < 0) throw OracleError("no group split reaches k");
  AdpResult res;
  res.cost = dp[k];
  res.removed_outputs = k;
  res.exact = true;
  res.path = {"naive-universe"};
  return res;
}

ZipfSampler::ZipfSampler(std::size_t n, double alpha, std::uint64_t seed)
    : state_(seed ^ 0x9E3779B97F4A7C15ull) {
  if (n == 0) throw OracleError("zipf pool must not be empty");
  cdf_.resize(n);
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += std::pow(static_cast<double>(i + 1), -alpha);
    cdf_[i] = sum;
  }
  for (double& c : cdf_) c /= sum;
}

std::size_t ZipfSampler::next() {
  // splitmix64: stable across platforms, unlike <random> distributions.
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  double u = static_cast<double>(z >> 11) * 0x1.0p-53;
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

Instance generate_zipf(const ZipfSpec& spec, const Query& q) {
  validate(q, true);
  if (spec.tuples_per_relation == 0)
    throw OracleError("zipf spec requests zero tuples");
  for (const auto& r : q.body) {
    long double capacity = 1;
    for (const Attr& a : r.attrs) {
      auto it = spec.distinct.find(a);
      if (it == spec.distinct.end() || it->second == 0)
        throw OracleError("zipf spec lacks a pool size for attribute " + a);
      capacity *= static_cast<long double>(it->second);
    }
    if (capacity < static_cast<long double>(spec.tuples_per_relation))
      throw OracleError("relation " + r.name +
                        " cannot hold the requested tuple count");
  }

  Instance out;
  std::uint64_t salt = 0;
  for (const auto& r : q.body) {
    std::map<Attr, ZipfSampler> samplers;
    for (const Attr& a : r.attrs)
      samplers.emplace(a, ZipfSampler(spec.distinct.at(a), spec.alpha,
                                      spec.seed + 1000003 * ++salt));
    TupleSet ts;
    if (r.is_vacuum()) {
      ts.insert(Tuple{});
    } else {
      std::uint64_t attempts = 0;
      const std::uint64_t limit =
          std::max<std::uint64_t>(spec.tuples_per_relation, 1024) * 1000;
      while (ts.size() < spec.tuples_per_relation) {
        if (++attempts > limit)
          throw OracleError("gave up de-duplicating tuples for " + r.name);
        Tuple t;
        for (const Attr& a : r.attrs)
          t[a] = a + "_" + std::to_string(samplers.at(a).next());
        ts.insert(std::move(t));
      }
    }
    out.relations[r.id] = std::move(ts);
  }
  return out;
}

}  // namespace adp
