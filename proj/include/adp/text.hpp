#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adp/query.hpp"

namespace adp {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  std::size_t offset = 0;  // byte offset into the input
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  std::optional<Query> query;  // present iff no error-severity diagnostics
  std::vector<ParseDiagnostic> diagnostics;
};

struct ParseError : std::runtime_error {
  explicit ParseError(std::vector<ParseDiagnostic> diags);
  std::vector<ParseDiagnostic> diagnostics;
};

// Grammar:
//   query   :=  name '(' attrs? ')' ':-' atom (',' atom)* ('|' pred (',' pred)*)? '.'?
//   atom    :=  name '(' attrs? ')'
//   pred    :=  name '.' name '=' string
//   name    :=  [A-Za-z_][A-Za-z0-9_]*
//   string  :=  '"' chars with \" and \\ escapes '"'
// Whitespace (including newlines) is free; '#' starts a line comment.
ParseResult parse_query(std::string_view text);

// Throwing convenience wrapper.
Query parse_query_or_throw(std::string_view text);

// Canonical one-line form; parse(render(q)) is structurally equal to q.
std::string render_query(const Query& q);

std::string format_diagnostics(const std::vector<ParseDiagnostic>& diags);

}  // namespace adp
