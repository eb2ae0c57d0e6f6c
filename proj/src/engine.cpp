#include "adp/engine.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace adp {
namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    std::size_t extra;
    if (c < 0x80)
      extra = 0;
    else if ((c & 0xE0) == 0xC0 && c >= 0xC2)
      extra = 1;
    else if ((c & 0xF0) == 0xE0)
      extra = 2;
    else if ((c & 0xF8) == 0xF0 && c <= 0xF4)
      extra = 3;
    else
      return false;
    if (i + extra >= s.size()) return false;
    for (std::size_t j = 1; j <= extra; ++j)
      if ((static_cast<unsigned char>(s[i + j]) & 0xC0) != 0x80) return false;
    i += extra + 1;
  }
  return true;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view bytes) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t i = 0;
  const std::size_t n = bytes.size();

  auto end_field = [&] { record.push_back(std::move(field)); field.clear(); };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  while (i < n) {
    char c = bytes[i];
    if (c == '"') {
      if (!field.empty())
        throw EngineError("csv: quote inside an unquoted field at byte " +
                          std::to_string(i));
      ++i;
      bool closed = false;
      while (i < n) {
        if (bytes[i] == '"') {
          if (i + 1 < n && bytes[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          field.push_back(bytes[i++]);
        }
      }
      if (!closed) throw EngineError("csv: unterminated quoted field");
      if (i < n && bytes[i] != ',' && bytes[i] != '\r' && bytes[i] != '\n')
        throw EngineError("csv: garbage after closing quote at byte " +
                          std::to_string(i));
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < n && bytes[i + 1] == '\n') ++i;
      ++i;
    } else {
      field.push_back(c);
      ++i;
    }
  }
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

std::string csv_escape(const std::string& v) {
  if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Unambiguous flat encoding of a value sequence, used as a hash key.
std::string encode_key(const std::vector<std::string>& row,
                       const std::vector<std::size_t>& idx) {
  std::string key;
  for (std::size_t j : idx) {
    key += std::to_string(row[j].size());
    key.push_back(':');
    key += row[j];
  }
  return key;
}

const TupleSet& tuples_of(const Instance& d, int id) {
  static const TupleSet empty;
  auto it = d.relations.find(id);
  return it == d.relations.end() ? empty : it->second;
}

}  // namespace

std::size_t Instance::total_tuples() const {
  std::size_t n = 0;
  for (const auto& [id, ts] : relations) n += ts.size();
  return n;
}

std::vector<std::size_t> JoinRows::column_indexes(const AttrSet& of) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < attrs.size(); ++j)
    if (of.count(attrs[j])) out.push_back(j);
  if (out.size() != of.size())
    throw EngineError("projection attribute missing from join result");
  return out;
}

CsvLoad load_relation_csv(const RelationSchema& schema, std::string_view bytes) {
  if (!valid_utf8(bytes))
    throw EngineError(schema.name + ".csv: invalid UTF-8");

  CsvLoad out;
  if (schema.is_vacuum()) {
    // Zero-column relations fall outside CSV: "" encodes false, "()" true.
    std::string body(bytes);
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r'))
      body.pop_back();
    if (body == "()")
      out.tuples.insert(Tuple{});
    else if (!body.empty())
      throw EngineError(schema.name + ".csv: a relation without attributes "
                        "must contain \"\" or \"()\"");
    return out;
  }

  auto records = parse_csv(bytes);
  if (records.empty())
    throw EngineError(schema.name + ".csv: missing header row");

  const auto& header = records.front();
  std::vector<std::size_t> col_of_attr(schema.attrs.size());
  {
    std::set<std::string> seen;
    for (const auto& h : header)
      if (!seen.insert(h).second)
        throw EngineError(schema.name + ".csv: duplicate header column " + h);
    if (header.size() != schema.attrs.size())
      throw EngineError(schema.name + ".csv: header has " +
                        std::to_string(header.size()) + " columns, schema has " +
                        std::to_string(schema.attrs.size()));
    for (std::size_t a = 0; a < schema.attrs.size(); ++a) {
      auto it = std::find(header.begin(), header.end(), schema.attrs[a]);
      if (it == header.end())
        throw EngineError(schema.name + ".csv: header lacks attribute " +
                          schema.attrs[a]);
      col_of_attr[a] = static_cast<std::size_t>(it - header.begin());
    }
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size())
      throw EngineError(schema.name + ".csv: row " + std::to_string(r + 1) +
                        " has " + std::to_string(rec.size()) + " fields, expected " +
                        std::to_string(header.size()));
    Tuple t;
    for (std::size_t a = 0; a < schema.attrs.size(); ++a)
      t[schema.attrs[a]] = rec[col_of_attr[a]];
    if (!out.tuples.insert(std::move(t)).second) ++out.duplicates_dropped;
  }
  return out;
}

Instance load_instance_dir(const Query& q, const std::filesystem::path& dir) {
  Instance out;
  for (const auto& r : q.body) {
    std::filesystem::path file = dir / (r.name + ".csv");
    std::ifstream in(file, std::ios::binary);
    if (!in) throw EngineError("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    out.relations[r.id] = load_relation_csv(r, buf.str()).tuples;
  }
  return out;
}

void write_instance_dir(const Query& q, const Instance& d,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& r : q.body) {
    std::ofstream out(dir / (r.name + ".csv"), std::ios::binary);
    if (!out) throw EngineError("cannot write " + (dir / (r.name + ".csv")).string());
    const TupleSet& ts = tuples_of(d, r.id);
    if (r.is_vacuum()) {
      if (!ts.empty()) out << "()\n";
      continue;
    }
    for (std::size_t a = 0; a < r.attrs.size(); ++a)
      out << (a ? "," : "") << csv_escape(r.attrs[a]);
    out << "\n";
    for (const Tuple& t : ts) {
      for (std::size_t a = 0; a < r.attrs.size(); ++a)
        out << (a ? "," : "") << csv_escape(t.at(r.attrs[a]));
      out << "\n";
    }
  }
}

JoinRows full_join_rows(const Query& q, const Instance& d) {
  JoinRows out;
  for (const Attr& a : q.attrs()) out.attrs.push_back(a);

  std::vector<const RelationSchema*> rels;
  for (const auto& r : q.body) {
    if (r.is_vacuum()) {
      if (tuples_of(d, r.id).empty()) return out;  // false conjunct
    } else {
      rels.push_back(&r);
    }
  }
  std::sort(rels.begin(), rels.end(), [&](const auto* a, const auto* b) {
    auto ca = tuples_of(d, a->id).size(), cb = tuples_of(d, b->id).size();
    return ca != cb ? ca < cb : a->id < b->id;
  });

  std::vector<Attr> cur_attrs;
  std::vector<std::vector<std::string>> cur = {{}};
  for (const auto* r : rels) {
    std::vector<std::size_t> common_idx;         // positions in cur_attrs
    std::vector<Attr> added;
    for (std::size_t j = 0; j < cur_attrs.size(); ++j)
      if (r->contains(cur_attrs[j])) common_idx.push_back(j);
    AttrSet common;
    for (std::size_t j : common_idx) common.insert(cur_attrs[j]);
    for (const Attr& a : r->attrs)
      if (!common.count(a)) added.push_back(a);

    // Order of the key must match on both sides: cur_attrs order.
    std::vector<Attr> common_ordered;
    for (std::size_t j : common_idx) common_ordered.push_back(cur_attrs[j]);

    std::unordered_map<std::string, std::vector<std::vector<std::string>>> hash;
    for (const Tuple& t : tuples_of(d, r->id)) {
      std::string key;
      for (const Attr& a : common_ordered) {
        const std::string& v = t.at(a);
        key += std::to_string(v.size());
        key.push_back(':');
        key += v;
      }
      std::vector<std::string> extra;
      extra.reserve(added.size());
      for (const Attr& a : added) extra.push_back(t.at(a));
      hash[key].push_back(std::move(extra));
    }

    std::vector<std::vector<std::string>> next;
    for (const auto& row : cur) {
      auto it = hash.find(encode_key(row, common_idx));
      if (it == hash.end()) continue;
      for (const auto& extra : it->second) {
        std::vector<std::string> merged = row;
        merged.insert(merged.end(), extra.begin(), extra.end());
        next.push_back(std::move(merged));
      }
    }
    cur = std::move(next);
    cur_attrs.insert(cur_attrs.end(), added.begin(), added.end());
    if (cur.empty()) break;
  }

  // Reorder columns into the canonical attribute order.
  std::vector<std::size_t> perm;
  for (const Attr& a : out.attrs) {
    auto it = std::find(cur_attrs.begin(), cur_attrs.end(), a);
    perm.push_back(static_cast<std::size_t>(it - cur_attrs.begin()));
  }
  out.rows.reserve(cur.size());
  for (auto& row : cur) {
    std::vector<std::string> ordered;
    ordered.reserve(perm.size());
    for (std::size_t j : perm) ordered.push_back(std::move(row[j]));
    out.rows.push_back(std::move(ordered));
  }
  return out;
}

TupleSet full_join(const Query& q, const Instance& d) {
  JoinRows rows = full_join_rows(q, d);
  TupleSet out;
  for (const auto& row : rows.rows) {
    Tuple t;
    for (std::size_t j = 0; j < rows.attrs.size(); ++j) t[rows.attrs[j]] = row[j];
    out.insert(std::move(t));
  }
  return out;
}

TupleSet evaluate(const Query& q, const Instance& d) {
  JoinRows rows = full_join_rows(q, d);
  auto idx = rows.column_indexes(q.head);
  TupleSet out;
  for (const auto& row : rows.rows) {
    Tuple t;
    for (std::size_t j : idx) t[rows.attrs[j]] = row[j];
    out.insert(std::move(t));
  }
  return out;
}

std::size_t count_results(const Query& q, const Instance& d) {
  JoinRows rows = full_join_rows(q, d);
  if (q.is_full() || q.is_boolean())
    return q.is_boolean() ? (rows.rows.empty() ? 0 : 1) : rows.rows.size();
  auto idx = rows.column_indexes(q.head);
  std::unordered_set<std::string> seen;
  seen.reserve(rows.rows.size());
  for (const auto& row : rows.rows) seen.insert(encode_key(row, idx));
  return seen.size();
}

Instance reduce_dangling(const Query& q, const Instance& d) {
  JoinRows rows = full_join_rows(q, d);
  Instance out;
  for (const auto& r : q.body) {
    TupleSet kept;
    if (r.is_vacuum()) {
      if (!rows.rows.empty() && !tuples_of(d, r.id).empty()) kept.insert(Tuple{});
    } else {
      auto idx = rows.column_indexes(r.attr_set());
      std::unordered_set<std::string> seen;
      for (const auto& row : rows.rows) seen.insert(encode_key(row, idx));
      // Column order of idx follows rows.attrs (sorted), so build keys the
      // same way from each tuple.
      std::vector<Attr> ordered;
      for (std::size_t j : idx) ordered.push_back(rows.attrs[j]);
      for (const Tuple& t : tuples_of(d, r.id)) {
        std::string key;
        for (const Attr& a : ordered) {
          const std::string& v = t.at(a);
          key += std::to_string(v.size());
          key.push_back(':');
          key += v;
        }
        if (seen.count(key)) kept.insert(t);
      }
    }
    out.relations[r.id] = std::move(kept);
  }
  return out;
}

std::map<Tuple, Instance> partition_by(const Query& q, const Instance& d,
                                       const AttrSet& attrs) {
  for (const auto& r : q.body) {
    if (r.is_vacuum()) continue;
    for (const Attr& a : attrs)
      if (!r.contains(a))
        throw EngineError("partition attribute " + a + " missing from " + r.name);
  }

  std::map<Tuple, std::map<int, TupleSet>> groups;
  bool first_rel = true;
  std::set<Tuple> live_keys;
  for (const auto& r : q.body) {
    if (r.is_vacuum()) continue;
    std::set<Tuple> keys_here;
    for (const Tuple& t : tuples_of(d, r.id)) {
      Tuple key = project(t, attrs);
      keys_here.insert(key);
      groups[key][r.id].insert(t);
    }
    if (first_rel) {
      live_keys = std::move(keys_here);
      first_rel = false;
    } else {
      std::set<Tuple> merged;
      std::set_intersection(live_keys.begin(), live_keys.end(),
                            keys_here.begin(), keys_here.end(),
                            std::inserter(merged, merged.end()));
      live_keys = std::move(merged);
    }
  }

  std::map<Tuple, Instance> out;
  for (const Tuple& key : live_keys) {
    Instance inst;
    for (const auto& r : q.body) {
      if (r.is_vacuum())
        inst.relations[r.id] = tuples_of(d, r.id);
      else
        inst.relations[r.id] = std::move(groups[key][r.id]);
    }
    out.emplace(key, std::move(inst));
  }
  return out;
}

SelectionResult apply_selection(const Query& q, const Instance& d) {
  std::map<Attr, std::set<std::string>> required;
  for (const auto& s : q.selections) {
    if (!q.at(s.relation).contains(s.attr))
      throw EngineError("selection on missing attribute " + s.attr);
    required[s.attr].insert(s.value);
  }
  AttrSet selected;
  for (const auto& [a, vs] : required) selected.insert(a);

  SelectionResult out;
  out.query.head = q.head;
  for (const Attr& a : selected) out.query.head.erase(a);

  for (const auto& r : q.body) {
    RelationSchema nr = r;
    nr.attrs.erase(std::remove_if(nr.attrs.begin(), nr.attrs.end(),
                                  [&](const Attr& a) { return selected.count(a); }),
                   nr.attrs.end());
    bool changed = nr.attrs.size() != r.attrs.size();
    out.query.body.push_back(nr);

    TupleSet kept;
    for (const Tuple& t : tuples_of(d, r.id)) {
      bool pass = true;
      for (const auto& [a, vs] : required) {
        auto it = t.find(a);
        if (it == t.end()) continue;
        if (vs.size() != 1 || it->second != *vs.begin()) {
          pass = false;
          break;
        }
      }
      if (!pass) continue;
      if (changed) {
        Tuple stripped;
        for (const auto& [a, v] : t)
          if (!selected.count(a)) stripped.emplace(a, v);
        out.back[{r.id, stripped}] = t;
        kept.insert(std::move(stripped));
      } else {
        kept.insert(t);
      }
    }
    out.instance.relations[r.id] = std::move(kept);
  }
  return out;
}

Tuple project(const Tuple& t, const AttrSet& attrs) {
  Tuple out;
  for (const Attr& a : attrs) {
    auto it = t.find(a);
    if (it == t.end()) throw EngineError("projection attribute " + a + " missing");
    out.emplace(a, it->second);
  }
  return out;
}

Instance remove_tuples(const Instance& d, const RemovalSet& removals) {
  Instance out = d;
  for (const auto& [id, t] : removals) {
    auto it = out.relations.find(id);
    if (it != out.relations.end()) it->second.erase(t);
  }
  return out;
}

long long delta_count(const Query& q, const Instance& d, const RemovalSet& removals) {
  return static_cast<long long>(count_results(q, d)) -
         static_cast<long long>(count_results(q, remove_tuples(d, removals)));
}

long long profit(const Query& q, const Instance& d, int relation, const Tuple& t) {
  return delta_count(q, d, RemovalSet{{relation, t}});
}

}  // namespace adp
