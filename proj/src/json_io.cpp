#include "adp/json_io.hpp"

namespace adp {

using nlohmann::json;

namespace {

std::string rel_name(const Query& q, int id) {
  const RelationSchema* r = q.find(id);
  return r ? r->name : "#" + std::to_string(id);
}

json trace_steps(const DecisionTrace& t) {
  json steps = json::array();
  if (!t.removed_universal.empty())
    steps.push_back({{"step", "removed_universal"},
                     {"attributes", t.removed_universal}});
  if (const auto* b = std::get_if<BaseBoolean>(&t.step)) {
    json s = {{"step", "base_boolean"}, {"triad", nullptr}};
    if (b->triad) s["triad"] = {b->triad->r1, b->triad->r2, b->triad->r3};
    steps.push_back(std::move(s));
  } else if (const auto* v = std::get_if<BaseVacuum>(&t.step)) {
    steps.push_back({{"step", "base_vacuum"}, {"relation", v->relation}});
  } else if (const auto* dd = std::get_if<Decomposed>(&t.step)) {
    json comps = json::array();
    for (const auto& c : dd->components) comps.push_back(trace_steps(c));
    steps.push_back({{"step", "decomposed"},
                     {"count", dd->components.size()},
                     {"components", std::move(comps)}});
  } else {
    steps.push_back({{"step", "base_others"}});
  }
  return steps;
}

json tuple_json(const Tuple& t) {
  json out = json::object();
  for (const auto& [a, v] : t) out[a] = v;
  return out;
}

}  // namespace

json to_json(const Query& q, const HardStructure& s) {
  if (const auto* t = std::get_if<TriadLike>(&s))
    return {{"kind", "triad_like"},
            {"relations",
             {rel_name(q, t->r1), rel_name(q, t->r2), rel_name(q, t->r3)}}};
  if (const auto* st = std::get_if<Strand>(&s))
    return {{"kind", "strand"},
            {"relations", {rel_name(q, st->ri), rel_name(q, st->rj)}}};
  const auto& nh = std::get<NonHierarchicalHeadJoin>(s);
  return {{"kind", "non_hierarchical_head_join"},
          {"attributes", {nh.a, nh.b}},
          {"relations",
           {rel_name(q, nh.r1), rel_name(q, nh.r2), rel_name(q, nh.r3)}}};
}

json to_json(const DecisionTrace& t) { return trace_steps(t); }

json to_json(const Query& q, const Classification& c) {
  json out = {{"is_ptime", c.ptime}, {"structure", nullptr},
              {"trace", to_json(c.trace)}};
  if (c.structure) out["structure"] = to_json(q, *c.structure);
  return out;
}

json to_json(const Query& q, const AdpResult& r) {
  json out = {{"cost", r.cost},
              {"removed_outputs", r.removed_outputs},
              {"exact", r.exact},
              {"path", r.path}};
  if (r.removals) {
    json rem = json::array();
    for (const auto& [id, t] : *r.removals)
      rem.push_back({{"relation", rel_name(q, id)}, {"tuple", tuple_json(t)}});
    out["removals"] = std::move(rem);
  }
  return out;
}

ZipfSpec zipf_spec_from_json(const json& j) {
  ZipfSpec spec;
  spec.tuples_per_relation = j.at("tuples_per_relation").get<std::size_t>();
  spec.alpha = j.value("alpha", 0.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  for (const auto& [attr, n] : j.at("distinct").items())
    spec.distinct[attr] = n.get<std::size_t>();
  if (spec.alpha < 0) throw OracleError("alpha must be >= 0");
  return spec;
}

}  // namespace adp
