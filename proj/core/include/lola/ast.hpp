#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lola/diagnostic.hpp"
#include "lola/types.hpp"

namespace lola {

enum class StreamKind : std::uint8_t { Input, Output, Trigger };

/// Identifies a stream by kind and declaration ordinal within that kind.
struct StreamId {
  StreamKind kind = StreamKind::Input;
  std::size_t index = 0;

  friend auto operator<=>(const StreamId&, const StreamId&) = default;
};

enum class UnaryOp : std::uint8_t { Neg, Not };
enum class BinaryOp : std::uint8_t {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
};

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);

enum class LiteralKind : std::uint8_t {
  Integer,  // polymorphic numeric literal without `.` or exponent
  Float,
  Bool,
  String,
};

struct Literal {
  LiteralKind kind = LiteralKind::Integer;
  std::string text;  // integer/float digits as written; string contents unescaped
  bool boolean = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Expression node. The payload fields used depend on `kind`; children are
/// stored by value in `args`:
///   Offset/Hold/Index: args[0] is the default
///   Window:      args holds the optional default
///   Unary:       args[0]
///   Binary:      args[0], args[1]
///   Ite:         condition, then, else
///   Call/Tuple:  elements
///   Project:     args[0] is the tuple
struct Expr {
  enum class Kind : std::uint8_t {
    Literal, StreamRef, Offset, Hold, Window, Unary, Binary, Ite, Call, Tuple, Project,
    Index,  // `s[-1, d]` sugar; never present after desugaring
  };

  Kind kind = Kind::Literal;
  Span span;
  std::size_t node_id = 0;  // dense per specification, assigned by the parser

  Literal literal;
  std::string name;                 // stream or function name
  Span name_span;
  std::optional<StreamId> target;   // filled in by naming analysis
  std::int64_t offset = 0;          // strictly negative for Offset
  Duration duration;                // Window
  AggFunc aggregation = AggFunc::Count;
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
  std::size_t projection = 0;
  std::vector<Expr> args;
};

/// Compares expression structure, ignoring spans, node ids and resolution.
bool structurally_equal(const Expr& a, const Expr& b);

/// Event pacing annotation as written: a positive formula over names.
struct ActivationExpr {
  enum class Kind : std::uint8_t { Name, And, Or };
  Kind kind = Kind::Name;
  std::string name;
  Span span;
  std::vector<ActivationExpr> operands;
};

struct PacingAnnotation {
  std::optional<Frequency> frequency;   // periodic `@1Hz`
  std::optional<ActivationExpr> event;  // `@a` or `@(a ∧ b)`
  Span span;
};

struct InputDecl {
  std::string name;
  ValueType value_type;
  Span name_span;
  Span span;
};

struct OutputDecl {
  std::string name;
  std::optional<ValueType> value_type_annotation;
  std::optional<PacingAnnotation> pacing_annotation;
  Expr expression;
  Span name_span;
  Span span;
};

struct TriggerDecl {
  Expr condition;
  std::optional<std::string> message;
  Span span;
};

struct Specification {
  std::vector<InputDecl> inputs;
  std::vector<OutputDecl> outputs;
  std::vector<TriggerDecl> triggers;
  std::string source_text;
  std::size_t node_count = 0;  // number of Expr nodes (ids are 0..node_count)

  /// "altitude", or "Trigger 0" for triggers.
  std::string stream_name(StreamId id) const;
  Span stream_span(StreamId id) const;
  const Expr* stream_expression(StreamId id) const;  // null for inputs

  /// Message reported when a trigger fires: the declared message, or the
  /// condition's source text.
  std::string trigger_message(std::size_t index) const;

  /// Declared streams in vertex order: inputs, outputs, triggers.
  std::vector<StreamId> all_streams() const;
};

/// Structural equality ignoring spans and source text.
bool structurally_equal(const Specification& a, const Specification& b);

/// Visits every node of `root` in pre-order.
template <typename Fn>
void walk(const Expr& root, Fn&& fn) {
  fn(root);
  for (const auto& child : root.args) walk(child, fn);
}

template <typename Fn>
void walk_mut(Expr& root, Fn&& fn) {
  fn(root);
  for (auto& child : root.args) walk_mut(child, fn);
}

}  // namespace lola
