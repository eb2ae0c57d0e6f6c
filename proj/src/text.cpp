#include "adp/text.hpp"

#include <cctype>
#include <sstream>

namespace adp {

ParseError::ParseError(std::vector<ParseDiagnostic> diags)
    : std::runtime_error(format_diagnostics(diags)), diagnostics(std::move(diags)) {}

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool accept(std::string_view s) {
    skip_space();
    if (text.substr(pos, s.size()) == s) {
      pos += s.size();
      return true;
    }
    return false;
  }
};

struct Parser {
  Lexer lx;
  std::vector<ParseDiagnostic> diags;

  void error(std::size_t at, std::string msg) {
    diags.push_back({at, std::move(msg), ParseDiagnostic::Severity::Error});
  }

  bool failed() const {
    for (const auto& d : diags)
      if (d.severity == ParseDiagnostic::Severity::Error) return true;
    return false;
  }

  std::optional<std::string> name() {
    lx.skip_space();
    std::size_t start = lx.pos;
    auto head_ok = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto tail_ok = [&](char c) {
      return head_ok(c) || std::isdigit(static_cast<unsigned char>(c));
    };
    if (start >= lx.text.size() || !head_ok(lx.text[start])) {
      error(start, "expected an identifier");
      return std::nullopt;
    }
    std::size_t end = start + 1;
    while (end < lx.text.size() && tail_ok(lx.text[end])) ++end;
    lx.pos = end;
    return std::string(lx.text.substr(start, end - start));
  }

  std::optional<std::vector<std::string>> attr_list() {
    if (!lx.accept('(')) {
      error(lx.pos, "expected '('");
      return std::nullopt;
    }
    std::vector<std::string> out;
    if (lx.accept(')')) return out;
    while (true) {
      auto a = name();
      if (!a) return std::nullopt;
      out.push_back(std::move(*a));
      if (lx.accept(')')) return out;
      if (!lx.accept(',')) {
        error(lx.pos, "expected ',' or ')' in attribute list");
        return std::nullopt;
      }
    }
  }

  std::optional<std::string> quoted_string() {
    if (!lx.accept('"')) {
      error(lx.pos, "expected a quoted value");
      return std::nullopt;
    }
    std::string out;
    while (lx.pos < lx.text.size()) {
      char c = lx.text[lx.pos++];
      if (c == '"') return out;
      if (c == '\\') {
        if (lx.pos >= lx.text.size()) break;
        char e = lx.text[lx.pos++];
        if (e == '"' || e == '\\') {
          out.push_back(e);
        } else {
          error(lx.pos - 1, std::string("unknown escape '\\") + e + "'");
          return std::nullopt;
        }
      } else {
        out.push_back(c);
      }
    }
    error(lx.pos, "unterminated quoted value");
    return std::nullopt;
  }

  std::optional<Query> run() {
    Query q;
    if (!name()) return std::nullopt;  // query name, not part of the structure
    auto head = attr_list();
    if (!head) return std::nullopt;
    q.head.insert(head->begin(), head->end());
    if (head->size() != q.head.size()) {
      error(lx.pos, "head repeats an attribute");
      return std::nullopt;
    }

    if (!lx.accept(":-")) {
      error(lx.pos, "expected ':-' after the head");
      return std::nullopt;
    }

    while (true) {
      std::size_t at = lx.pos;
      auto rel = name();
      if (!rel) return std::nullopt;
      auto attrs = attr_list();
      if (!attrs) return std::nullopt;
      RelationSchema r;
      r.id = static_cast<int>(q.body.size());
      r.name = std::move(*rel);
      r.attrs = std::move(*attrs);
      q.body.push_back(std::move(r));
      (void)at;
      if (!lx.accept(',')) break;
    }

    if (lx.accept('|')) {
      while (true) {
        std::size_t at = lx.pos;
        auto rel = name();
        if (!rel) return std::nullopt;
        if (!lx.accept('.')) {
          error(lx.pos, "expected '.' in selection");
          return std::nullopt;
        }
        auto attr = name();
        if (!attr) return std::nullopt;
        if (!lx.accept('=')) {
          error(lx.pos, "expected '=' in selection");
          return std::nullopt;
        }
        auto value = quoted_string();
        if (!value) return std::nullopt;

        Selection s;
        s.relation = -1;
        for (const auto& r : q.body)
          if (r.name == *rel) s.relation = r.id;
        if (s.relation < 0) {
          error(at, "selection on unknown relation " + *rel);
          return std::nullopt;
        }
        s.attr = std::move(*attr);
        s.value = std::move(*value);
        q.selections.push_back(std::move(s));
        if (!lx.accept(',')) break;
      }
    }

    lx.accept('.');
    if (!lx.eof()) {
      error(lx.pos, "trailing input after query");
      return std::nullopt;
    }

    try {
      validate(q);
    } catch (const QueryError& e) {
      error(0, e.what());
      return std::nullopt;
    }
    return q;
  }
};

void append_escaped(std::string& out, const std::string& v) {
  out.push_back('"');
  for (char c : v) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

ParseResult parse_query(std::string_view text) {
  Parser p;
  p.lx.text = text;
  ParseResult out;
  auto q = p.run();
  out.diagnostics = std::move(p.diags);
  if (q && !p.failed()) out.query = std::move(*q);
  return out;
}

Query parse_query_or_throw(std::string_view text) {
  ParseResult r = parse_query(text);
  if (!r.query) throw ParseError(std::move(r.diagnostics));
  return std::move(*r.query);
}

std::string render_query(const Query& q) {
  std::string out = "Q(";
  bool first = true;
  for (const Attr& a : q.head) {
    if (!first) out += ", ";
    out += a;
    first = false;
  }
  out += ") :- ";
  first = true;
  for (const auto& r : q.body) {
    if (!first) out += ", ";
    out += r.name;
    out.push_back('(');
    for (std::size_t i = 0; i < r.attrs.size(); ++i) {
      if (i) out += ", ";
      out += r.attrs[i];
    }
    out.push_back(')');
    first = false;
  }
  if (!q.selections.empty()) {
    out += " | ";
    first = true;
    for (const auto& s : q.selections) {
      if (!first) out += ", ";
      out += q.at(s.relation).name;
      out.push_back('.');
      out += s.attr;
      out += " = ";
      append_escaped(out, s.value);
      first = false;
    }
  }
  return out;
}

std::string format_diagnostics(const std::vector<ParseDiagnostic>& diags) {
  std::ostringstream os;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (i) os << '\n';
    const auto& d = diags[i];
    os << (d.severity == ParseDiagnostic::Severity::Error ? "error" : "warning")
       << " at byte " << d.offset << ": " << d.message;
  }
  return os.str();
}

}  // namespace adp
