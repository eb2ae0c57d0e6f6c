#include "adp/query.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace adp {
namespace {

bool subset(const AttrSet& a, const AttrSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

AttrSet intersect(const AttrSet& a, const AttrSet& b) {
  AttrSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

AttrSet difference(const AttrSet& a, const AttrSet& b) {
  AttrSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

bool intersects(const AttrSet& a, const AttrSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else
      return true;
  }
  return false;
}

}  // namespace

bool RelationSchema::contains(const Attr& a) const {
  return std::find(attrs.begin(), attrs.end(), a) != attrs.end();
}

AttrSet Query::attrs() const {
  AttrSet out;
  for (const auto& r : body) out.insert(r.attrs.begin(), r.attrs.end());
  return out;
}

const RelationSchema* Query::find(int id) const {
  for (const auto& r : body)
    if (r.id == id) return &r;
  return nullptr;
}

const RelationSchema& Query::at(int id) const {
  const RelationSchema* r = find(id);
  if (!r) throw QueryError("no relation with id " + std::to_string(id));
  return *r;
}

void validate(const Query& q, bool allow_duplicate_attr_sets) {
  if (q.body.empty()) throw QueryError("query body is empty");

  std::set<int> ids;
  std::set<std::string> names;
  std::map<AttrSet, std::string> seen_attr_sets;
  for (const auto& r : q.body) {
    if (r.id < 0) throw QueryError("relation " + r.name + " has no id");
    if (!ids.insert(r.id).second)
      throw QueryError("duplicate relation id " + std::to_string(r.id));
    if (r.name.empty()) throw QueryError("relation with empty name");
    if (!names.insert(r.name).second)
      throw QueryError("duplicate relation name " + r.name +
                       " (self-joins are not supported)");
    AttrSet as = r.attr_set();
    if (as.size() != r.attrs.size())
      throw QueryError("relation " + r.name + " repeats an attribute");
    auto [it, fresh] = seen_attr_sets.emplace(as, r.name);
    if (!fresh && !allow_duplicate_attr_sets)
      throw QueryError("relations " + it->second + " and " + r.name +
                       " have identical attribute sets");
  }

  if (!subset(q.head, q.attrs()))
    throw QueryError("head attribute missing from every relation");

  for (const auto& s : q.selections) {
    const RelationSchema* r = q.find(s.relation);
    if (!r)
      throw QueryError("selection references unknown relation id " +
                       std::to_string(s.relation));
    if (!r->contains(s.attr))
      throw QueryError("selection on " + r->name + "." + s.attr +
                       " but the relation has no such attribute");
  }
}

AttrSet universal_attributes(const Query& q) {
  AttrSet out;
  for (const Attr& a : q.head) {
    bool everywhere = true;
    for (const auto& r : q.body) {
      if (!r.is_vacuum() && !r.contains(a)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) out.insert(a);
  }
  return out;
}

AttributeRemoval remove_attributes(const Query& q, const AttrSet& s) {
  AttributeRemoval out;
  out.query.head = difference(q.head, s);
  std::map<AttrSet, int> kept;  // residual attr set -> id keeping it
  for (const auto& r : q.body) {
    RelationSchema nr = r;
    nr.attrs.erase(std::remove_if(nr.attrs.begin(), nr.attrs.end(),
                                  [&](const Attr& a) { return s.count(a); }),
                   nr.attrs.end());
    auto [it, fresh] = kept.emplace(nr.attr_set(), nr.id);
    if (fresh)
      out.query.body.push_back(std::move(nr));
    else
      out.collapsed.emplace_back(nr.id, it->second);
  }
  for (const auto& sel : q.selections) {
    if (s.count(sel.attr)) continue;
    if (out.query.find(sel.relation)) out.query.selections.push_back(sel);
  }
  return out;
}

std::vector<Query> connected_components(const Query& q) {
  const int n = static_cast<int>(q.body.size());
  std::vector<int> comp(n, -1);
  std::vector<AttrSet> sets(n);
  for (int i = 0; i < n; ++i) sets[i] = q.body[i].attr_set();

  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = ncomp;
    if (!sets[i].empty()) {
      std::queue<int> bfs;
      bfs.push(i);
      while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int v = 0; v < n; ++v) {
          if (comp[v] < 0 && intersects(sets[u], sets[v])) {
            comp[v] = ncomp;
            bfs.push(v);
          }
        }
      }
    }
    ++ncomp;
  }

  std::vector<Query> out(ncomp);
  for (int i = 0; i < n; ++i) {
    Query& c = out[comp[i]];
    c.body.push_back(q.body[i]);
    for (const Attr& a : q.body[i].attrs)
      if (q.head.count(a)) c.head.insert(a);
    for (const auto& sel : q.selections)
      if (sel.relation == q.body[i].id) c.selections.push_back(sel);
  }
  return out;
}

std::set<int> vacuum_relations(const Query& q) {
  std::set<int> out;
  for (const auto& r : q.body)
    if (r.is_vacuum()) out.insert(r.id);
  return out;
}

std::set<int> endogenous_relations(const Query& q) {
  std::set<int> out;
  for (const auto& rj : q.body) {
    const AttrSet sj = rj.attr_set();
    bool exogenous = false;
    for (const auto& ri : q.body) {
      if (ri.id == rj.id) continue;
      const AttrSet si = ri.attr_set();
      if (si == sj ? ri.id < rj.id : subset(si, sj)) {
        exogenous = true;
        break;
      }
    }
    if (!exogenous) out.insert(rj.id);
  }
  return out;
}

std::optional<int> dominated_by(const Query& q, int rj) {
  const AttrSet sj = q.at(rj).attr_set();
  for (const auto& ri : q.body) {
    if (ri.id == rj) continue;
    const AttrSet si = ri.attr_set();
    if (si == sj) {
      if (ri.id < rj) return ri.id;
      continue;
    }
    if (!subset(si, sj)) continue;
    bool ok = true;
    for (const auto& rk : q.body) {
      const AttrSet sk = rk.attr_set();
      if (difference(si, sk).empty()) continue;
      if (!subset(intersect(sj, sk), intersect(si, q.head))) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (subset(si, q.head) || subset(q.head, si)) return ri.id;
  }
  return std::nullopt;
}

std::set<int> non_dominated_relations(const Query& q) {
  std::set<int> out;
  for (const auto& r : q.body)
    if (!dominated_by(q, r.id)) out.insert(r.id);
  return out;
}

Query head_join(const Query& q) {
  Query out;
  out.head = q.head;
  for (const auto& r : q.body) {
    RelationSchema nr = r;
    nr.attrs.erase(std::remove_if(nr.attrs.begin(), nr.attrs.end(),
                                  [&](const Attr& a) { return !q.head.count(a); }),
                   nr.attrs.end());
    out.body.push_back(std::move(nr));
  }
  return out;
}

bool is_hierarchical(const Query& q) {
  if (!q.is_full())
    throw QueryError("hierarchy test is defined for full queries only");
  std::map<Attr, std::set<int>> rels;
  for (const auto& r : q.body)
    for (const Attr& a : r.attrs) rels[a].insert(r.id);
  for (auto ia = rels.begin(); ia != rels.end(); ++ia) {
    for (auto ib = std::next(ia); ib != rels.end(); ++ib) {
      const auto& ra = ia->second;
      const auto& rb = ib->second;
      bool a_in_b = std::includes(rb.begin(), rb.end(), ra.begin(), ra.end());
      bool b_in_a = std::includes(ra.begin(), ra.end(), rb.begin(), rb.end());
      if (a_in_b || b_in_a) continue;
      std::set<int> both;
      std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(),
                            std::inserter(both, both.end()));
      if (!both.empty()) return false;
    }
  }
  return true;
}

std::optional<int> singleton_pivot(const Query& q) {
  std::optional<int> best;
  std::size_t best_size = 0;
  for (const auto& ri : q.body) {
    const AttrSet si = ri.attr_set();
    bool contained = true;
    for (const auto& rj : q.body) {
      if (rj.id != ri.id && !subset(si, rj.attr_set())) {
        contained = false;
        break;
      }
    }
    if (!contained) continue;
    if (!subset(si, q.head) && !subset(q.head, si)) continue;
    if (!best || si.size() < best_size) {
      best = ri.id;
      best_size = si.size();
    }
  }
  return best;
}

namespace {

// Path connectivity used by the triad-like test: intermediate relations take
// part only through attributes in `allowed`, and consecutive relations must
// share an allowed attribute.
bool connected_via(const Query& q, int from, int to, const AttrSet& allowed) {
  const int n = static_cast<int>(q.body.size());
  std::vector<AttrSet> retained(n);
  std::vector<int> ids(n);
  int src = -1, dst = -1;
  for (int i = 0; i < n; ++i) {
    ids[i] = q.body[i].id;
    retained[i] = intersect(q.body[i].attr_set(), allowed);
    if (ids[i] == from) src = i;
    if (ids[i] == to) dst = i;
  }
  std::vector<bool> seen(n, false);
  std::queue<int> bfs;
  seen[src] = true;
  bfs.push(src);
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    if (u == dst) return true;
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && intersects(retained[u], retained[v])) {
        seen[v] = true;
        bfs.push(v);
      }
    }
  }
  return false;
}

}  // namespace

std::optional<TriadLike> find_triad_like(const Query& q) {
  const std::set<int> endo_set = endogenous_relations(q);
  std::vector<int> endo(endo_set.begin(), endo_set.end());
  const AttrSet all = q.attrs();
  const std::size_t n = endo.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t l = j + 1; l < n; ++l) {
        int ids[3] = {endo[i], endo[j], endo[l]};
        bool ok = true;
        for (int t = 0; t < 3 && ok; ++t) {
          int a = ids[t], b = ids[(t + 1) % 3], c = ids[(t + 2) % 3];
          AttrSet allowed = difference(all, q.head);
          allowed = difference(allowed, q.at(c).attr_set());
          if (!connected_via(q, a, b, allowed)) ok = false;
        }
        if (ok) return TriadLike{ids[0], ids[1], ids[2]};
      }
    }
  }
  return std::nullopt;
}

std::optional<Strand> find_strand(const Query& q) {
  const std::set<int> nd_set = non_dominated_relations(q);
  std::vector<int> nd(nd_set.begin(), nd_set.end());
  for (std::size_t i = 0; i < nd.size(); ++i) {
    for (std::size_t j = i + 1; j < nd.size(); ++j) {
      const AttrSet si = q.at(nd[i]).attr_set();
      const AttrSet sj = q.at(nd[j]).attr_set();
      if (intersect(q.head, si) == intersect(q.head, sj)) continue;
      if (difference(intersect(si, sj), q.head).empty()) continue;
      return Strand{nd[i], nd[j]};
    }
  }
  return std::nullopt;
}

std::optional<HardStructure> hard_structure(const Query& q) {
  if (auto t = find_triad_like(q)) return HardStructure{*t};
  if (auto s = find_strand(q)) return HardStructure{*s};

  const std::set<int> nd = non_dominated_relations(q);
  Query restricted;
  restricted.head = q.head;
  for (const auto& r : q.body)
    if (nd.count(r.id)) restricted.body.push_back(r);
  Query hj = head_join(restricted);
  hj.head = hj.attrs();  // attributes outside every kept relation drop out

  std::map<Attr, std::set<int>> rels;
  for (const auto& r : hj.body)
    for (const Attr& a : r.attrs) rels[a].insert(r.id);
  for (auto ia = rels.begin(); ia != rels.end(); ++ia) {
    for (auto ib = std::next(ia); ib != rels.end(); ++ib) {
      const auto& ra = ia->second;
      const auto& rb = ib->second;
      if (std::includes(rb.begin(), rb.end(), ra.begin(), ra.end())) continue;
      if (std::includes(ra.begin(), ra.end(), rb.begin(), rb.end())) continue;
      std::set<int> both, only_a, only_b;
      std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(),
                            std::inserter(both, both.end()));
      if (both.empty()) continue;
      std::set_difference(ra.begin(), ra.end(), rb.begin(), rb.end(),
                          std::inserter(only_a, only_a.end()));
      std::set_difference(rb.begin(), rb.end(), ra.begin(), ra.end(),
                          std::inserter(only_b, only_b.end()));
      return HardStructure{NonHierarchicalHeadJoin{
          ia->first, ib->first, *only_a.begin(), *both.begin(), *only_b.begin()}};
    }
  }
  return std::nullopt;
}

}  // namespace adp
