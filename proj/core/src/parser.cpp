#include "lola/parser.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "lexer.hpp"

namespace lola {
namespace {

using detail::Tok;
using detail::Token;

constexpr std::array<std::string_view, 8> kReserved = {
    "input", "output", "trigger", "if", "then", "else", "true", "false"};

// Thrown after a diagnostic was recorded; caught at declaration level.
struct SyntaxError {};

class Parser {
 public:
  Parser(std::string_view source, std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : source_(source), tokens_(std::move(tokens)), diags_(diags) {}

  Specification run() {
    Specification spec;
    spec.source_text = std::string(source_);
    while (!at(Tok::End)) {
      std::size_t start = pos_;
      try {
        declaration(spec);
      } catch (const SyntaxError&) {
        synchronize(start);
      }
    }
    spec.node_count = next_node_id_;
    return spec;
  }

 private:
  // --- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  Span previous_span() const { return pos_ > 0 ? tokens_[pos_ - 1].span : peek().span; }

  [[noreturn]] void fail(const char* code, std::string message, Span span) {
    diags_.push_back({code, Severity::Error, std::move(message), span, {}});
    throw SyntaxError{};
  }

  [[noreturn]] void unexpected(std::string_view expected) {
    const Token& t = peek();
    // The lexer already reported invalid tokens.
    if (t.kind == Tok::Error) throw SyntaxError{};
    std::string found = t.kind == Tok::Ident ? "`" + t.text + "`" : detail::describe(t.kind);
    fail(codes::kUnexpectedToken,
         "expected " + std::string(expected) + ", found " + found, t.span);
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (!at(kind)) unexpected(what);
    return advance();
  }

  void expect_word(std::string_view word) {
    if (!at_word(word)) unexpected("`" + std::string(word) + "`");
    advance();
  }

  const Token& expect_name(std::string_view what) {
    if (!at(Tok::Ident)) unexpected(what);
    if (is_reserved_word(peek().text))
      fail(codes::kUnexpectedToken,
           "`" + peek().text + "` is a reserved word and cannot name a stream", peek().span);
    return advance();
  }

  bool at_declaration_start() const {
    return at_word("input") || at_word("output") || at_word("trigger");
  }

  // Skips to the next declaration keyword. A keyword that ended the failed
  // declaration starts the next one, unless nothing was consumed at all.
  void synchronize(std::size_t declaration_start) {
    if (pos_ == declaration_start && !at(Tok::End)) advance();
    while (!at(Tok::End) && !at_declaration_start()) advance();
  }

  Expr node(Expr::Kind kind, Span span) {
    Expr e;
    e.kind = kind;
    e.span = span;
    e.node_id = next_node_id_++;
    return e;
  }

  // --- declarations ---------------------------------------------------------

  void declaration(Specification& spec) {
    std::size_t start = peek().span.begin;
    if (at_word("input")) {
      advance();
      InputDecl decl;
      const Token& name = expect_name("stream name");
      decl.name = name.text;
      decl.name_span = name.span;
      expect(Tok::Colon, "`:`");
      decl.value_type = value_type();
      decl.span = {start, previous_span().end};
      spec.inputs.push_back(std::move(decl));
    } else if (at_word("output")) {
      advance();
      OutputDecl decl;
      const Token& name = expect_name("stream name");
      decl.name = name.text;
      decl.name_span = name.span;
      if (at(Tok::Colon)) {
        advance();
        decl.value_type_annotation = value_type();
      }
      if (at(Tok::At)) decl.pacing_annotation = pacing();
      expect(Tok::Assign, "`:=`");
      decl.expression = expression();
      decl.span = {start, previous_span().end};
      spec.outputs.push_back(std::move(decl));
    } else if (at_word("trigger")) {
      advance();
      TriggerDecl decl;
      decl.condition = expression();
      if (at(Tok::String)) decl.message = advance().text;
      decl.span = {start, previous_span().end};
      spec.triggers.push_back(std::move(decl));
    } else {
      unexpected("`input`, `output` or `trigger`");
    }
    if (!at(Tok::End) && !at_declaration_start()) unexpected("end of declaration");
  }

  ValueType value_type() {
    if (at(Tok::LParen)) {
      advance();
      std::vector<ValueType> elems;
      elems.push_back(value_type());
      while (at(Tok::Comma)) {
        advance();
        elems.push_back(value_type());
      }
      if (elems.size() < 2) unexpected("`,`");
      expect(Tok::RParen, "`)`");
      return ValueType::tuple(std::move(elems));
    }
    if (!at(Tok::Ident)) unexpected("value type");
    const Token& t = advance();
    if (t.text == "Int64" || t.text == "Int") return ValueType::int64();
    if (t.text == "UInt64" || t.text == "UInt") return ValueType::uint64();
    if (t.text == "Float64" || t.text == "Float") return ValueType::float64();
    if (t.text == "Bool") return ValueType::boolean();
    if (t.text == "String") return ValueType::string();
    fail(codes::kUnexpectedToken, "unknown value type `" + t.text + "`", t.span);
  }

  // Parses `NUMBER unit` and returns the number scaled by the unit factor.
  Rational quantity(std::initializer_list<std::pair<std::string_view, Rational>> units,
                    const char* what) {
    if (!at(Tok::Int) && !at(Tok::Float)) unexpected(what);
    const Token& num = advance();
    auto value = Rational::parse_decimal(num.text);
    if (!value) fail(codes::kUnexpectedToken, "number out of range", num.span);
    if (!at(Tok::Ident)) {
      fail(codes::kUnknownUnit, std::string("missing unit for ") + what, num.span);
    }
    const Token& unit = advance();
    for (const auto& [name, factor] : units) {
      if (unit.text == name) {
        Rational scaled = *value * factor;
        if (!scaled.is_positive())
          fail(codes::kUnexpectedToken, std::string(what) + " must be positive",
               Span::cover(num.span, unit.span));
        return scaled;
      }
    }
    fail(codes::kUnknownUnit, "unknown unit `" + unit.text + "` for " + what, unit.span);
  }

  PacingAnnotation pacing() {
    PacingAnnotation p;
    Span at_span = expect(Tok::At, "`@`").span;
    if (at(Tok::Int) || at(Tok::Float)) {
      Rational hz = quantity({{"mHz", Rational(1, 1000)}, {"Hz", Rational(1)}, {"kHz", Rational(1000)}},
                             "frequency");
      p.frequency = Frequency{hz};
    } else if (at(Tok::LParen) || at(Tok::Ident)) {
      p.event = activation_or();
    } else {
      unexpected("frequency or activation condition");
    }
    p.span = {at_span.begin, previous_span().end};
    return p;
  }

  ActivationExpr activation_or() {
    ActivationExpr lhs = activation_and();
    while (at(Tok::OrOr)) {
      advance();
      ActivationExpr rhs = activation_and();
      ActivationExpr e;
      e.kind = ActivationExpr::Kind::Or;
      e.span = Span::cover(lhs.span, rhs.span);
      e.operands = {std::move(lhs), std::move(rhs)};
      lhs = std::move(e);
    }
    return lhs;
  }

  ActivationExpr activation_and() {
    ActivationExpr lhs = activation_atom();
    while (at(Tok::AndAnd)) {
      advance();
      ActivationExpr rhs = activation_atom();
      ActivationExpr e;
      e.kind = ActivationExpr::Kind::And;
      e.span = Span::cover(lhs.span, rhs.span);
      e.operands = {std::move(lhs), std::move(rhs)};
      lhs = std::move(e);
    }
    return lhs;
  }

  ActivationExpr activation_atom() {
    if (at(Tok::LParen)) {
      advance();
      ActivationExpr inner = activation_or();
      expect(Tok::RParen, "`)`");
      return inner;
    }
    const Token& name = expect_name("input stream name");
    ActivationExpr e;
    e.kind = ActivationExpr::Kind::Name;
    e.name = name.text;
    e.span = name.span;
    return e;
  }

  // --- expressions ----------------------------------------------------------

  Expr expression() { return disjunction(); }

  Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
    Expr e = node(Expr::Kind::Binary, Span::cover(lhs.span, rhs.span));
    e.binary = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (at(Tok::OrOr)) {
      advance();
      lhs = binary(BinaryOp::Or, std::move(lhs), conjunction());
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = equality();
    while (at(Tok::AndAnd)) {
      advance();
      lhs = binary(BinaryOp::And, std::move(lhs), equality());
    }
    return lhs;
  }

  Expr equality() {
    Expr lhs = relational();
    if (at(Tok::EqEq) || at(Tok::NotEq)) {
      BinaryOp op = advance().kind == Tok::EqEq ? BinaryOp::Eq : BinaryOp::Ne;
      lhs = binary(op, std::move(lhs), relational());
      if (at(Tok::EqEq) || at(Tok::NotEq))
        fail(codes::kUnexpectedToken, "comparison operators are non-associative; add parentheses",
             peek().span);
    }
    return lhs;
  }

  std::optional<BinaryOp> relational_op() const {
    switch (peek().kind) {
      case Tok::Lt: return BinaryOp::Lt;
      case Tok::Le: return BinaryOp::Le;
      case Tok::Gt: return BinaryOp::Gt;
      case Tok::Ge: return BinaryOp::Ge;
      default: return std::nullopt;
    }
  }

  Expr relational() {
    Expr lhs = additive();
    if (auto op = relational_op()) {
      advance();
      lhs = binary(*op, std::move(lhs), additive());
      if (relational_op())
        fail(codes::kUnexpectedToken, "comparison operators are non-associative; add parentheses",
             peek().span);
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinaryOp op = advance().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = binary(op, std::move(lhs), multiplicative());
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      Tok k = advance().kind;
      BinaryOp op = k == Tok::Star ? BinaryOp::Mul : k == Tok::Slash ? BinaryOp::Div : BinaryOp::Mod;
      lhs = binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    if (at(Tok::Minus) || at(Tok::Bang)) {
      const Token& op = advance();
      UnaryOp kind = op.kind == Tok::Minus ? UnaryOp::Neg : UnaryOp::Not;
      Span op_span = op.span;
      Expr operand = unary();
      Expr e = node(Expr::Kind::Unary, Span::cover(op_span, operand.span));
      e.unary = kind;
      e.args.push_back(std::move(operand));
      return e;
    }
    return postfix();
  }

  Expr postfix() {
    Expr e = primary();
    while (at(Tok::Dot) && peek(1).kind == Tok::Int) {
      advance();
      const Token& index = advance();
      Expr proj = node(Expr::Kind::Project, Span::cover(e.span, index.span));
      proj.projection = std::stoull(index.text);
      proj.args.push_back(std::move(e));
      e = std::move(proj);
    }
    return e;
  }

  // `-digits` or `digits`; must be strictly negative.
  std::int64_t signed_offset() {
    std::size_t begin = peek().span.begin;
    bool negative = false;
    if (at(Tok::Minus)) {
      advance();
      negative = true;
    }
    const Token& num = expect(Tok::Int, "integer offset");
    Span span{begin, num.span.end};
    auto value = Rational::parse_decimal(num.text);
    if (!value || !value->is_integer())
      fail(codes::kUnexpectedToken, "offset out of range", span);
    std::int64_t v = negative ? -value->num() : value->num();
    if (v >= 0)
      fail(codes::kNonNegativeOffset,
           "offset must be a negative integer (found " + std::to_string(v) + ")", span);
    return v;
  }

  Expr named_default() {
    expect_word("or");
    expect(Tok::Colon, "`:`");
    return expression();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Float: {
        advance();
        Expr e = node(Expr::Kind::Literal, t.span);
        e.literal.kind = t.kind == Tok::Int ? LiteralKind::Integer : LiteralKind::Float;
        e.literal.text = t.text;
        return e;
      }
      case Tok::String: {
        advance();
        Expr e = node(Expr::Kind::Literal, t.span);
        e.literal.kind = LiteralKind::String;
        e.literal.text = t.text;
        return e;
      }
      case Tok::LParen: return parenthesized();
      case Tok::Ident: break;
      default: unexpected("expression");
    }

    if (t.text == "true" || t.text == "false") {
      advance();
      Expr e = node(Expr::Kind::Literal, t.span);
      e.literal.kind = LiteralKind::Bool;
      e.literal.boolean = t.text == "true";
      return e;
    }
    if (t.text == "if") return conditional();

    const Token& name = expect_name("expression");
    if (at(Tok::LParen)) return call(name);
    if (at(Tok::LBracket)) return bracket_access(name);
    if (at(Tok::Dot) && peek(1).kind == Tok::Ident) {
      const std::string& method = peek(1).text;
      if (method == "offset") return offset_access(name);
      if (method == "hold") return hold_access(name);
      if (method == "aggregate") return window_access(name);
      advance();
      unexpected("`offset`, `hold` or `aggregate`");
    }
    Expr e = node(Expr::Kind::StreamRef, name.span);
    e.name = name.text;
    e.name_span = name.span;
    return e;
  }

  Expr parenthesized() {
    Span open = advance().span;
    Expr first = expression();
    if (!at(Tok::Comma)) {
      expect(Tok::RParen, "`)`");
      return first;
    }
    std::vector<Expr> elems;
    elems.push_back(std::move(first));
    while (at(Tok::Comma)) {
      advance();
      elems.push_back(expression());
    }
    Span close = expect(Tok::RParen, "`)`").span;
    Expr e = node(Expr::Kind::Tuple, Span::cover(open, close));
    e.args = std::move(elems);
    return e;
  }

  Expr conditional() {
    Span start = advance().span;
    Expr cond = expression();
    expect_word("then");
    Expr then_branch = expression();
    expect_word("else");
    Expr else_branch = expression();
    Expr e = node(Expr::Kind::Ite, Span::cover(start, else_branch.span));
    e.args.push_back(std::move(cond));
    e.args.push_back(std::move(then_branch));
    e.args.push_back(std::move(else_branch));
    return e;
  }

  Expr call(const Token& name) {
    advance();  // (
    std::vector<Expr> args;
    if (!at(Tok::RParen)) {
      args.push_back(expression());
      while (at(Tok::Comma)) {
        advance();
        args.push_back(expression());
      }
    }
    Span close = expect(Tok::RParen, "`)`").span;
    Expr e = node(Expr::Kind::Call, Span::cover(name.span, close));
    e.name = name.text;
    e.name_span = name.span;
    e.args = std::move(args);
    return e;
  }

  Expr bracket_access(const Token& name) {
    advance();  // [
    std::int64_t offset = signed_offset();
    expect(Tok::Comma, "`,`");
    Expr fallback = expression();
    Span close = expect(Tok::RBracket, "`]`").span;
    Expr e = node(Expr::Kind::Index, Span::cover(name.span, close));
    e.name = name.text;
    e.name_span = name.span;
    e.offset = offset;
    e.args.push_back(std::move(fallback));
    return e;
  }

  Expr offset_access(const Token& name) {
    advance();  // .
    advance();  // offset
    expect(Tok::LParen, "`(`");
    expect_word("by");
    expect(Tok::Colon, "`:`");
    std::int64_t offset = signed_offset();
    expect(Tok::Comma, "`,`");
    Expr fallback = named_default();
    Span close = expect(Tok::RParen, "`)`").span;
    Expr e = node(Expr::Kind::Offset, Span::cover(name.span, close));
    e.name = name.text;
    e.name_span = name.span;
    e.offset = offset;
    e.args.push_back(std::move(fallback));
    return e;
  }

  Expr hold_access(const Token& name) {
    advance();  // .
    advance();  // hold
    expect(Tok::LParen, "`(`");
    Expr fallback = named_default();
    Span close = expect(Tok::RParen, "`)`").span;
    Expr e = node(Expr::Kind::Hold, Span::cover(name.span, close));
    e.name = name.text;
    e.name_span = name.span;
    e.args.push_back(std::move(fallback));
    return e;
  }

  Expr window_access(const Token& name) {
    advance();  // .
    advance();  // aggregate
    expect(Tok::LParen, "`(`");
    expect_word("over");
    expect(Tok::Colon, "`:`");
    Rational seconds = quantity({{"ms", Rational(1, 1000)},
                                 {"s", Rational(1)},
                                 {"min", Rational(60)},
                                 {"h", Rational(3600)}},
                                "duration");
    expect(Tok::Comma, "`,`");
    expect_word("using");
    expect(Tok::Colon, "`:`");
    if (!at(Tok::Ident)) unexpected("aggregation function");
    const Token& fn = advance();
    AggFunc agg;
    if (fn.text == "count") agg = AggFunc::Count;
    else if (fn.text == "sum") agg = AggFunc::Sum;
    else if (fn.text == "avg") agg = AggFunc::Avg;
    else if (fn.text == "min") agg = AggFunc::Min;
    else if (fn.text == "max") agg = AggFunc::Max;
    else fail(codes::kUnexpectedToken, "unknown aggregation function `" + fn.text + "`", fn.span);

    std::vector<Expr> args;
    if (at(Tok::Comma)) {
      advance();
      args.push_back(named_default());
    }
    Span close = expect(Tok::RParen, "`)`").span;
    Expr e = node(Expr::Kind::Window, Span::cover(name.span, close));
    e.name = name.text;
    e.name_span = name.span;
    e.duration = Duration{seconds};
    e.aggregation = agg;
    e.args = std::move(args);
    return e;
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  std::size_t next_node_id_ = 0;
};

void desugar_expr(Expr& e) {
  walk_mut(e, [](Expr& n) {
    if (n.kind == Expr::Kind::Index) n.kind = Expr::Kind::Offset;
  });
}

}  // namespace

bool is_reserved_word(std::string_view word) {
  for (auto w : kReserved)
    if (w == word) return true;
  return false;
}

ParseResult parse_raw(std::string_view source) {
  ParseResult result;
  auto tokens = detail::tokenize(source, result.diagnostics);
  Specification spec = Parser(source, std::move(tokens), result.diagnostics).run();
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.span.begin < b.span.begin; });
  if (!has_errors(result.diagnostics)) result.specification = std::move(spec);
  return result;
}

Specification desugar(Specification raw) {
  for (auto& o : raw.outputs) desugar_expr(o.expression);
  for (auto& t : raw.triggers) desugar_expr(t.condition);
  return raw;
}

ParseResult parse(std::string_view source) {
  ParseResult result = parse_raw(source);
  if (result.specification) result.specification = desugar(std::move(*result.specification));
  return result;
}

}  // namespace lola
