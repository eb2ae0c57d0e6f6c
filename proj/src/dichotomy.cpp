#include "adp/dichotomy.hpp"

#include "adp/text.hpp"

namespace adp {
namespace {

TraceNode decide(const Query& q) {
  TraceNode node;
  AttrSet universal = universal_attributes(q);
  node.removed_universal.assign(universal.begin(), universal.end());
  Query r = universal.empty() ? q : remove_attributes(q, universal).query;

  if (r.is_boolean()) {
    BaseBoolean step;
    step.triad = find_triad_like(r);
    node.verdict = !step.triad;
    node.step = std::move(step);
    return node;
  }

  std::set<int> vacuum = vacuum_relations(r);
  if (!vacuum.empty()) {
    node.step = BaseVacuum{*vacuum.begin()};
    node.verdict = true;
    return node;
  }

  std::vector<Query> comps = connected_components(r);
  if (comps.size() > 1) {
    Decomposed step;
    bool all = true;
    for (const Query& c : comps) {
      step.components.push_back(decide(c));
      all = all && step.components.back().verdict;
    }
    node.step = std::move(step);
    node.verdict = all;
    return node;
  }

  node.step = BaseOthers{r};
  node.verdict = false;
  return node;
}

bool replay(const Query& q, const TraceNode& node) {
  AttrSet universal = universal_attributes(q);
  AttrSet recorded(node.removed_universal.begin(), node.removed_universal.end());
  if (recorded != universal)
    throw QueryError("trace removed the wrong universal attributes");
  Query r = universal.empty() ? q : remove_attributes(q, universal).query;

  bool verdict;
  if (const auto* b = std::get_if<BaseBoolean>(&node.step)) {
    if (!r.is_boolean()) throw QueryError("trace claims a boolean residual");
    auto triad = find_triad_like(r);
    if (triad.has_value() != b->triad.has_value())
      throw QueryError("trace triad witness does not match the residual");
    if (triad && !(triad->r1 == b->triad->r1 && triad->r2 == b->triad->r2 &&
                   triad->r3 == b->triad->r3))
      throw QueryError("trace triad witness does not match the residual");
    verdict = !triad;
  } else if (const auto* v = std::get_if<BaseVacuum>(&node.step)) {
    if (r.is_boolean()) throw QueryError("trace claims a non-boolean residual");
    if (!r.find(v->relation) || !r.at(v->relation).is_vacuum())
      throw QueryError("trace vacuum witness is not a vacuum relation");
    verdict = true;
  } else if (const auto* d = std::get_if<Decomposed>(&node.step)) {
    if (r.is_boolean() || !vacuum_relations(r).empty())
      throw QueryError("trace decomposes a residual it should not");
    std::vector<Query> comps = connected_components(r);
    if (comps.size() < 2 || comps.size() != d->components.size())
      throw QueryError("trace component count does not match the residual");
    verdict = true;
    for (std::size_t i = 0; i < comps.size(); ++i)
      verdict = replay(comps[i], d->components[i]) && verdict;
  } else {
    const auto& o = std::get<BaseOthers>(node.step);
    if (r.is_boolean() || !vacuum_relations(r).empty() ||
        connected_components(r).size() != 1)
      throw QueryError("trace reaches the fallthrough case incorrectly");
    if (render_query(o.subquery) != render_query(r))
      throw QueryError("trace residual does not match the query");
    verdict = false;
  }

  if (verdict != node.verdict) throw QueryError("trace verdict mismatch");
  return verdict;
}

}  // namespace

DecisionTrace is_ptime(const Query& q) { return decide(q); }

bool replay_trace(const Query& q, const DecisionTrace& trace) {
  return replay(q, trace);
}

Classification classify(const Query& q) {
  Classification out;
  out.trace = is_ptime(q);
  out.ptime = out.trace.verdict;
  out.structure = hard_structure(q);
  if (out.ptime == out.structure.has_value())
    throw InternalInconsistency(
        "decision procedure and structural test disagree on " + render_query(q));
  return out;
}

}  // namespace adp
