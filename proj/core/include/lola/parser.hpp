#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lola/ast.hpp"
#include "lola/diagnostic.hpp"

namespace lola {

struct ParseResult {
  std::optional<Specification> specification;  // set iff no P0xx errors
  std::vector<Diagnostic> diagnostics;
};

/// Parses specification text into a desugared Specification. Syntax errors
/// are reported per declaration; the parser resynchronizes at the next
/// `input`, `output` or `trigger` keyword.
ParseResult parse(std::string_view source);

/// Parses without desugaring; bracket accesses remain as Expr::Kind::Index.
ParseResult parse_raw(std::string_view source);

/// Rewrites every `s[-k, d]` into `s.offset(by: -k, or: d)`.
Specification desugar(Specification raw);

/// Renders a specification in canonical surface syntax. Every compound
/// sub-expression is parenthesized, so re-parsing yields the same tree.
std::string pretty_print(const Specification& spec);
std::string pretty_print(const Expr& expr);
std::string pretty_print(const ValueType& type);

bool is_reserved_word(std::string_view word);

}  // namespace lola
