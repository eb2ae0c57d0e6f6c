#include "adp/solver.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "adp/text.hpp"

namespace adp {
namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

std::string instance_key(const Query& q, const Instance& d) {
  std::ostringstream os;
  os << render_query(q) << '\n';
  for (const auto& r : q.body) {
    os << '#' << r.id << '\n';
    auto it = d.relations.find(r.id);
    if (it == d.relations.end()) continue;
    for (const Tuple& t : it->second) {
      for (const auto& [a, v] : t) os << a << '=' << v.size() << ':' << v << '|';
      os << '\n';
    }
  }
  return os.str();
}

struct SubProblem {
  Query q;
  Instance d;
  std::string key;

  SubProblem(Query query, Instance inst)
      : q(std::move(query)), d(std::move(inst)), key(instance_key(q, d)) {}
};

void merge_path(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& tag : from)
    if (std::find(into.begin(), into.end(), tag) == into.end()) into.push_back(tag);
}

// Unit-capacity max-flow (Edmonds-Karp) whose edges carry tuple tags, so the
// minimum cut can be read back as a set of deletions.
struct FlowNetwork {
  struct Edge {
    int to;
    int cap;
    int tag;  // index into tags, -1 for reverse edges
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;
  std::vector<TupleRef> tags;

  int add_vertex() {
    adj.emplace_back();
    return static_cast<int>(adj.size()) - 1;
  }

  void add_edge(int u, int v, TupleRef tag) {
    tags.push_back(std::move(tag));
    adj[u].push_back(static_cast<int>(edges.size()));
    edges.push_back({v, 1, static_cast<int>(tags.size()) - 1});
    adj[v].push_back(static_cast<int>(edges.size()));
    edges.push_back({u, 0, -1});
  }

  long long max_flow(int s, int t) {
    long long flow = 0;
    while (true) {
      std::vector<int> pred_edge(adj.size(), -1);
      std::queue<int> bfs;
      bfs.push(s);
      std::vector<bool> seen(adj.size(), false);
      seen[s] = true;
      while (!bfs.empty() && !seen[t]) {
        int u = bfs.front();
        bfs.pop();
        for (int e : adj[u]) {
          if (edges[e].cap > 0 && !seen[edges[e].to]) {
            seen[edges[e].to] = true;
            pred_edge[edges[e].to] = e;
            bfs.push(edges[e].to);
          }
        }
      }
      if (!seen[t]) return flow;
      for (int v = t; v != s;) {
        int e = pred_edge[v];
        edges[e].cap -= 1;
        edges[e ^ 1].cap += 1;
        v = edges[e ^ 1].to;
      }
      ++flow;
    }
  }

  RemovalSet min_cut(int s) {
    std::vector<bool> seen(adj.size(), false);
    std::queue<int> bfs;
    bfs.push(s);
    seen[s] = true;
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (int e : adj[u]) {
        if (edges[e].cap > 0 && !seen[edges[e].to]) {
          seen[edges[e].to] = true;
          bfs.push(edges[e].to);
        }
      }
    }
    RemovalSet cut;
    for (std::size_t u = 0; u < adj.size(); ++u) {
      if (!seen[u]) continue;
      for (int e : adj[u]) {
        const Edge& ed = edges[e];
        if (ed.tag >= 0 && ed.cap == 0 && !seen[ed.to]) cut.insert(tags[ed.tag]);
      }
    }
    return cut;
  }
};

class Solver {
 public:
  explicit Solver(Heuristic h) : heur_(h) {}

  AdpResult solve(const SubProblem& sp, long long k, Mode mode) {
    auto memo_key = std::make_pair(sp.key, std::make_pair(k, mode == Mode::Report));
    auto hit = memo_.find(memo_key);
    if (hit != memo_.end()) return hit->second;

    long long n = count(sp);
    if (n == 0) throw SolverError("query returns no results");
    if (k < 1 || k > n)
      throw SolverError("k must be between 1 and " + std::to_string(n));

    AdpResult res;
    if (sp.q.is_boolean()) {
      if (find_triad_like(sp.q))
        res = heuristic_stage(sp, k, mode);
      else
        res = boolean_stage(sp, mode);
    } else if (singleton_pivot(sp.q)) {
      res = singleton_stage(sp, k, mode);
    } else if (!universal_attributes(sp.q).empty()) {
      res = universe_stage(sp, k, mode);
    } else if (connected_components(sp.q).size() > 1) {
      res = decompose_stage(sp, k, mode);
    } else {
      res = heuristic_stage(sp, k, mode);
    }
    if (mode == Mode::Count) res.removals.reset();
    memo_.emplace(std::move(memo_key), res);
    return res;
  }

  long long count(const SubProblem& sp) {
    auto it = counts_.find(sp.key);
    if (it != counts_.end()) return it->second;
    long long n = count_components(sp.q, sp.d);
    counts_.emplace(sp.key, n);
    return n;
  }

  AdpResult boolean_stage(const SubProblem& sp, Mode mode);
  AdpResult singleton_stage(const SubProblem& sp, long long k, Mode mode);
  AdpResult universe_stage(const SubProblem& sp, long long k, Mode mode);
  AdpResult decompose_stage(const SubProblem& sp, long long k, Mode mode);
  AdpResult heuristic_stage(const SubProblem& sp, long long k, Mode mode);
  AdpResult greedy_stage(const SubProblem& sp, long long k, Mode mode);
  AdpResult drastic_stage(const SubProblem& sp, long long k, Mode mode);

 private:
  // Counts through the component factorisation so that cross products never
  // materialise.
  static long long count_components(const Query& q, const Instance& d) {
    std::vector<Query> comps = connected_components(q);
    if (comps.size() < 2) return static_cast<long long>(count_results(q, d));
    long long total = 1;
    for (const Query& c : comps) {
      Instance di;
      for (const auto& r : c.body) {
        auto it = d.relations.find(r.id);
        di.relations[r.id] = it == d.relations.end() ? TupleSet{} : it->second;
      }
      long long m = static_cast<long long>(count_results(c, di));
      if (m == 0) return 0;
      if (total > kInf / m) return kInf;  // saturate; only compared with k
      total *= m;
    }
    return total;
  }

  Heuristic heur_;
  std::map<std::pair<std::string, std::pair<long long, bool>>, AdpResult> memo_;
  std::map<std::string, long long> counts_;
};

AdpResult Solver::boolean_stage(const SubProblem& sp, Mode mode) {
  const Query& q = sp.q;
  Instance reduced = reduce_dangling(q, sp.d);
  std::set<int> endo = endogenous_relations(q);

  std::vector<const RelationSchema*> rels;
  for (const auto& r : q.body)
    if (endo.count(r.id)) rels.push_back(&r);

  // Lexicographically first order (by ids) in which every attribute touches a
  // contiguous run of relations.
  std::vector<int> order(rels.size());
  for (std::size_t i = 0; i < rels.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end());
  bool found = false;
  do {
    AttrSet all;
    for (const auto* r : rels) all.insert(r->attrs.begin(), r->attrs.end());
    bool ok = true;
    for (const Attr& a : all) {
      int first = -1, last = -1, cnt = 0;
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (rels[order[i]]->contains(a)) {
          if (first < 0) first = static_cast<int>(i);
          last = static_cast<int>(i);
          ++cnt;
        }
      }
      if (last - first + 1 != cnt) {
        ok = false;
        break;
      }
    }
    if (ok) {
      found = true;
      break;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  if (!found)
    throw SolverError("boolean query admits no attribute-contiguous order");

  const std::size_t p = order.size();
  FlowNetwork net;
  int x = net.add_vertex();
  int y = net.add_vertex();
  // One vertex per realised value of the shared attributes of consecutive
  // relations; one unit edge per tuple.
  std::vector<AttrSet> shared(p >= 1 ? p - 1 : 0);
  for (std::size_t i = 0; i + 1 < p; ++i) {
    const AttrSet a = rels[order[i]]->attr_set();
    const AttrSet b = rels[order[i + 1]]->attr_set();
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(shared[i], shared[i].end()));
  }
  std::vector<std::map<Tuple, int>> layer(shared.size());
  auto vertex_for = [&](std::size_t i, const Tuple& key) {
    auto [it, fresh] = layer[i].emplace(key, -1);
    if (fresh) it->second = net.add_vertex();
    return it->second;
  };
  for (std::size_t i = 0; i < p; ++i) {
    const RelationSchema* r = rels[order[i]];
    for (const Tuple& t : reduced.relations.at(r->id)) {
      int u = i == 0 ? x : vertex_for(i - 1, project(t, shared[i - 1]));
      int v = i + 1 == p ? y : vertex_for(i, project(t, shared[i]));
      net.add_edge(u, v, TupleRef{r->id, t});
    }
  }

  AdpResult res;
  res.cost = net.max_flow(x, y);
  res.removals = net.min_cut(x);
  if (static_cast<long long>(res.removals->size()) != res.cost)
    throw SolverError("min cut size does not match the flow value");
  if (mode == Mode::Count) res.removals.reset();
  res.removed_outputs = 1;
  res.exact = true;
  res.path = {"boolean"};
  return res;
}

AdpResult Solver::singleton_stage(const SubProblem& sp, long long k, Mode mode) {
  const Query& q = sp.q;
  auto pivot = singleton_pivot(q);
  if (!pivot) throw SolverError("no singleton relation");
  const RelationSchema& ri = q.at(*pivot);
  const AttrSet si = ri.attr_set();
  TupleSet outputs = evaluate(q, sp.d);

  AdpResult res;
  res.exact = true;
  res.path = {"singleton"};
  RemovalSet removals;

  bool pivot_in_head = std::includes(q.head.begin(), q.head.end(),
                                     si.begin(), si.end());
  if (pivot_in_head) {
    std::map<Tuple, long long> gain;
    for (const Tuple& o : outputs) ++gain[project(o, si)];
    std::vector<std::pair<long long, Tuple>> ranked;
    for (const Tuple& t : sp.d.relations.at(ri.id)) {
      auto it = gain.find(t);
      ranked.emplace_back(it == gain.end() ? 0 : it->second, t);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                       return a.first != b.first ? a.first > b.first
                                                 : a.second < b.second;
                     });
    long long got = 0;
    for (const auto& [p, t] : ranked) {
      if (got >= k) break;
      got += p;
      ++res.cost;
      removals.insert({ri.id, t});
    }
    if (got < k) throw SolverError("singleton relation cannot reach k");
    res.removed_outputs = got;
  } else {
    // head is strictly inside attr(ri): charge each output the number of
    // non-dangling pivot tuples projecting onto it.
    Instance reduced = reduce_dangling(q, sp.d);
    std::map<Tuple, std::vector<Tuple>> per_output;
    for (const Tuple& t : reduced.relations.at(ri.id)) {
      Tuple o = project(t, q.head);
      if (!outputs.count(o))
        throw SolverError("reduced pivot tuple outside the result");
      per_output[o].push_back(t);
    }
    std::vector<std::pair<long long, Tuple>> ranked;
    for (const auto& [o, ts] : per_output)
      ranked.emplace_back(static_cast<long long>(ts.size()), o);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                       return a.first != b.first ? a.first < b.first
                                                 : a.second < b.second;
                     });
    if (static_cast<long long>(ranked.size()) < k)
      throw SolverError("fewer outputs than k");
    for (long long i = 0; i < k; ++i) {
      res.cost += ranked[i].first;
      for (const Tuple& t : per_output[ranked[i].second])
        removals.insert({ri.id, t});
    }
    res.removed_outputs = k;
  }
  if (mode == Mode::Report) res.removals = std::move(removals);
  return res;
}

AdpResult Solver::universe_stage(const SubProblem& sp, long long k, Mode mode) {
  const Query& q = sp.q;
  AttrSet universal = universal_attributes(q);
  if (universal.empty()) throw SolverError("no universal attribute");

  AttributeRemoval removal = remove_attributes(q, universal);
  if (!removal.collapsed.empty())
    throw SolverError("universal removal collapsed relations");
  const Query& qr = removal.query;

  std::vector<Tuple> keys;
  std::vector<SubProblem> groups;
  std::vector<long long> sizes;
  for (auto& [key, inst] : partition_by(q, sp.d, universal)) {
    Instance stripped;
    for (auto& [id, ts] : inst.relations) {
      TupleSet out;
      for (const Tuple& t : ts) {
        Tuple nt;
        for (const auto& [a, v] : t)
          if (!universal.count(a)) nt.emplace(a, v);
        out.insert(std::move(nt));
      }
      stripped.relations[id] = std::move(out);
    }
    keys.push_back(key);
    groups.emplace_back(qr, std::move(stripped));
    sizes.push_back(count(groups.back()));
  }

  const std::size_t g = groups.size();
  AdpResult res;
  res.exact = true;
  res.path = {"universe"};

  std::vector<long long> prev(k + 1, kInf);
  prev[0] = 0;
  std::vector<std::vector<int>> choice;  // report mode backtracking
  if (mode == Mode::Report) choice.assign(g, std::vector<int>(k + 1, 0));

  for (std::size_t i = 0; i < g; ++i) {
    std::vector<long long> next(k + 1, kInf);
    std::vector<long long> cost_m(std::min(k, sizes[i]) + 1, -1);
    cost_m[0] = 0;
    for (long long s = 0; s <= k; ++s) {
      long long lim = std::min(s, sizes[i]);
      for (long long m = 0; m <= lim; ++m) {
        if (prev[s - m] >= kInf) continue;
        if (cost_m[m] < 0) {
          AdpResult sub = solve(groups[i], m, Mode::Count);
          cost_m[m] = sub.cost;
          res.exact = res.exact && sub.exact;
          merge_path(res.path, sub.path);
        }
        long long cand = prev[s - m] + cost_m[m];
        if (cand < next[s]) {
          next[s] = cand;
          if (mode == Mode::Report) choice[i][s] = static_cast<int>(m);
        }
      }
    }
    prev = std::move(next);
  }
  if (prev[k] >= kInf) throw SolverError("universal DP found no solution");
  res.cost = prev[k];
  res.removed_outputs = k;

  if (mode == Mode::Report) {
    RemovalSet removals;
    long long removed = 0;
    long long s = k;
    for (std::size_t i = g; i-- > 0;) {
      long long m = choice[i][s];
      s -= m;
      if (m == 0) continue;
      AdpResult sub = solve(groups[i], m, Mode::Report);
      removed += sub.removed_outputs;
      for (const auto& [id, t] : *sub.removals) {
        Tuple full = t;
        for (const auto& [a, v] : keys[i])
          if (q.at(id).contains(a)) full.emplace(a, v);
        removals.insert({id, std::move(full)});
      }
    }
    res.removed_outputs = removed;
    res.removals = std::move(removals);
  }
  return res;
}

AdpResult Solver::decompose_stage(const SubProblem& sp, long long k, Mode mode) {
  const Query& q = sp.q;
  std::vector<Query> comps = connected_components(q);
  if (comps.size() < 2) throw SolverError("query is connected");

  std::vector<SubProblem> subs;
  std::vector<long long> m(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    Instance di;
    for (const auto& r : comps[i].body) {
      auto it = sp.d.relations.find(r.id);
      di.relations[r.id] = it == sp.d.relations.end() ? TupleSet{} : it->second;
    }
    subs.emplace_back(comps[i], std::move(di));
    m[i] = count(subs[i]);
  }

  AdpResult res;
  res.exact = true;
  res.path = {"decompose"};

  auto comp_cost = [&](std::size_t i, long long ki) -> long long {
    if (ki == 0) return 0;
    AdpResult sub = solve(subs[i], ki, Mode::Count);
    res.exact = res.exact && sub.exact;
    merge_path(res.path, sub.path);
    return sub.cost;
  };

  // prev[j]: cheapest way to erase >= j results of the cross product of the
  // first i components.
  std::vector<long long> prev(k + 1, kInf);
  for (long long j = 0; j <= k; ++j)
    prev[j] = j == 0 ? 0 : (j <= m[0] ? comp_cost(0, j) : kInf);

  std::vector<std::vector<std::pair<long long, long long>>> choice;
  if (mode == Mode::Report)
    choice.assign(comps.size(), std::vector<std::pair<long long, long long>>(
                                    k + 1, {0, 0}));

  long long prefix = std::min(m[0], kInf);
  for (std::size_t i = 1; i < comps.size(); ++i) {
    std::vector<long long> next(k + 1, kInf);
    next[0] = 0;
    std::vector<long long> ci(std::min(k, m[i]) + 1, -1);
    ci[0] = 0;
    for (long long j = 1; j <= k; ++j) {
      for (long long k2 = 0; k2 <= std::min(j, m[i]); ++k2) {
        // Removing k1 prefix results and k2 results of component i erases
        // k1*m[i] + k2*prefix - k1*k2 cross-product results.
        __int128 need = static_cast<__int128>(j) -
                        static_cast<__int128>(k2) * prefix;
        long long k1;
        if (need <= 0) {
          k1 = 0;
        } else if (m[i] == k2) {
          continue;  // prefix contribution capped at k2*prefix
        } else {
          k1 = static_cast<long long>((need + (m[i] - k2) - 1) / (m[i] - k2));
        }
        if (k1 > k || prev[k1] >= kInf) continue;
        if (ci[k2] < 0) ci[k2] = comp_cost(i, k2);
        long long cand = prev[k1] + ci[k2];
        if (cand < next[j]) {
          next[j] = cand;
          if (mode == Mode::Report) choice[i][j] = {k1, k2};
        }
      }
    }
    prev = std::move(next);
    prefix = prefix > kInf / std::max<long long>(m[i], 1) ? kInf : prefix * m[i];
  }
  if (prev[k] >= kInf) throw SolverError("component DP found no solution");
  res.cost = prev[k];
  res.removed_outputs = k;

  if (mode == Mode::Report) {
    std::vector<long long> per_comp(comps.size(), 0);
    long long j = k;
    for (std::size_t i = comps.size(); i-- > 1;) {
      auto [k1, k2] = choice[i][j];
      per_comp[i] = k2;
      j = k1;
    }
    per_comp[0] = j;

    RemovalSet removals;
    std::vector<long long> removed(comps.size(), 0);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (per_comp[i] == 0) continue;
      AdpResult sub = solve(subs[i], per_comp[i], Mode::Report);
      removed[i] = sub.removed_outputs;
      removals.insert(sub.removals->begin(), sub.removals->end());
    }
    __int128 before = 1, after = 1;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      before *= m[i];
      after *= m[i] - removed[i];
    }
    res.removed_outputs = static_cast<long long>(before - after);
    res.removals = std::move(removals);
  }
  return res;
}

AdpResult Solver::heuristic_stage(const SubProblem& sp, long long k, Mode mode) {
  bool want_drastic = heur_ != Heuristic::Greedy && sp.q.is_full();
  if (heur_ == Heuristic::Drastic && !sp.q.is_full()) {
    AdpResult res = greedy_stage(sp, k, mode);
    merge_path(res.path, {"drastic-fallback"});
    return res;
  }
  if (want_drastic) {
    try {
      return drastic_stage(sp, k, mode);
    } catch (const SolverError&) {
      AdpResult res = greedy_stage(sp, k, mode);
      merge_path(res.path, {"drastic-fallback"});
      return res;
    }
  }
  return greedy_stage(sp, k, mode);
}

AdpResult Solver::greedy_stage(const SubProblem& sp, long long k, Mode mode) {
  const Query& q = sp.q;
  std::set<int> endo = endogenous_relations(q);
  Instance cur = sp.d;
  long long cur_count = static_cast<long long>(count_results(q, cur));
  long long removed = 0;
  RemovalSet chosen;
  bool fell_back = false;

  while (removed < k) {
    long long best_profit = -1;
    TupleRef best;
    for (const auto& r : q.body) {
      if (!endo.count(r.id)) continue;
      for (const Tuple& t : cur.relations.at(r.id)) {
        Instance trial = cur;
        trial.relations[r.id].erase(t);
        long long p = cur_count - static_cast<long long>(count_results(q, trial));
        if (p > best_profit) {
          best_profit = p;
          best = {r.id, t};
        }
      }
    }
    if (best_profit <= 0) {
      // No single endogenous deletion pays off; take any tuple still feeding
      // a surviving result so the loop keeps shrinking the instance.
      JoinRows rows = full_join_rows(q, cur);
      if (rows.rows.empty())
        throw SolverError("greedy ran out of results before reaching k");
      int rid = *endo.begin();
      auto idx = rows.column_indexes(q.at(rid).attr_set());
      Tuple t;
      for (std::size_t j : idx) t[rows.attrs[j]] = rows.rows.front()[j];
      best = {rid, std::move(t)};
      best_profit = 0;
      fell_back = true;
    }
    cur.relations[best.first].erase(best.second);
    chosen.insert(best);
    cur_count -= best_profit;
    removed += best_profit;
  }

  AdpResult res;
  res.cost = static_cast<long long>(chosen.size());
  res.removed_outputs = removed;
  res.exact = false;
  res.path = {"greedy"};
  if (fell_back) res.path.push_back("greedy-zero-profit-step");
  if (mode == Mode::Report) res.removals = std::move(chosen);
  return res;
}

AdpResult Solver::drastic_stage(const SubProblem& sp, long long k, Mode mode) {
  const Query& q = sp.q;
  if (!q.is_full()) throw SolverError("drastic heuristic requires a full query");
  std::set<int> endo = endogenous_relations(q);
  JoinRows rows = full_join_rows(q, sp.d);

  long long best_len = kInf;
  std::vector<std::pair<long long, Tuple>> best_prefix;
  int best_rel = -1;
  for (const auto& r : q.body) {
    if (!endo.count(r.id)) continue;
    auto idx = rows.column_indexes(r.attr_set());
    std::map<Tuple, long long> hits;
    for (const auto& row : rows.rows) {
      Tuple t;
      for (std::size_t j : idx) t[rows.attrs[j]] = row[j];
      ++hits[t];
    }
    std::vector<std::pair<long long, Tuple>> ranked;
    for (const Tuple& t : sp.d.relations.at(r.id)) {
      auto it = hits.find(t);
      ranked.emplace_back(it == hits.end() ? 0 : it->second, t);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                       return a.first != b.first ? a.first > b.first
                                                 : a.second < b.second;
                     });
    long long got = 0, len = 0;
    for (const auto& [p, t] : ranked) {
      if (got >= k) break;
      got += p;
      ++len;
    }
    if (got < k) continue;
    if (len <= best_len) {  // later relations win ties
      best_len = len;
      best_rel = r.id;
      best_prefix.assign(ranked.begin(), ranked.begin() + len);
    }
  }
  if (best_rel < 0)
    throw SolverError("no single relation reaches k on its own");

  AdpResult res;
  res.cost = best_len;
  res.exact = false;
  res.path = {"drastic"};
  RemovalSet removals;
  for (const auto& [p, t] : best_prefix) {
    res.removed_outputs += p;
    removals.insert({best_rel, t});
  }
  if (mode == Mode::Report) res.removals = std::move(removals);
  return res;
}

AdpResult run(const Query& q, const Instance& d, long long k, Mode mode,
              Heuristic h,
              AdpResult (Solver::*stage)(const SubProblem&, long long, Mode)) {
  validate(q, true);
  Solver solver(h);
  SubProblem sp(q, d);
  long long n = solver.count(sp);
  if (n == 0) throw SolverError("query returns no results");
  if (k < 1 || k > n)
    throw SolverError("k must be between 1 and " + std::to_string(n));
  return (solver.*stage)(sp, k, mode);
}

}  // namespace

AdpResult compute_adp(const Query& q, const Instance& d, long long k, Mode mode,
                      Heuristic h) {
  validate(q, true);
  if (!q.selections.empty()) {
    SelectionResult sel = apply_selection(q, d);
    AdpResult res = compute_adp(sel.query, sel.instance, k, mode, h);
    std::vector<std::string> path = {"selection"};
    merge_path(path, res.path);
    res.path = std::move(path);
    if (res.removals) {
      RemovalSet mapped;
      for (const auto& ref : *res.removals) {
        auto it = sel.back.find(ref);
        mapped.insert(it == sel.back.end() ? ref
                                           : TupleRef{ref.first, it->second});
      }
      res.removals = std::move(mapped);
    }
    return res;
  }
  Solver solver(h);
  return solver.solve(SubProblem(q, d), k, mode);
}

AdpResult solve_boolean(const Query& q, const Instance& d, Mode mode) {
  validate(q, true);
  if (!q.is_boolean()) throw SolverError("query is not boolean");
  Solver solver(Heuristic::Auto);
  SubProblem sp(q, d);
  if (solver.count(sp) != 1) throw SolverError("boolean query is already false");
  return solver.boolean_stage(sp, mode);
}

AdpResult solve_singleton(const Query& q, const Instance& d, long long k,
                          Mode mode) {
  return run(q, d, k, mode, Heuristic::Auto, &Solver::singleton_stage);
}

AdpResult solve_universe(const Query& q, const Instance& d, long long k,
                         Mode mode) {
  return run(q, d, k, mode, Heuristic::Auto, &Solver::universe_stage);
}

AdpResult solve_decompose(const Query& q, const Instance& d, long long k,
                          Mode mode) {
  return run(q, d, k, mode, Heuristic::Auto, &Solver::decompose_stage);
}

AdpResult greedy_for_cq(const Query& q, const Instance& d, long long k,
                        Mode mode) {
  return run(q, d, k, mode, Heuristic::Greedy, &Solver::greedy_stage);
}

AdpResult drastic_greedy_full(const Query& q, const Instance& d, long long k,
                              Mode mode) {
  return run(q, d, k, mode, Heuristic::Drastic, &Solver::drastic_stage);
}

}  // namespace adp
