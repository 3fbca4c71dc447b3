#include "lola/ast.hpp"

#include <stdexcept>

namespace lola {

const char* to_string(UnaryOp op) {
  return op == UnaryOp::Neg ? "-" : "!";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Literal:
      if (!(a.literal == b.literal)) return false;
      break;
    case Expr::Kind::StreamRef:
    case Expr::Kind::Hold:
    case Expr::Kind::Call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Offset:
    case Expr::Kind::Index:
      if (a.name != b.name || a.offset != b.offset) return false;
      break;
    case Expr::Kind::Window:
      if (a.name != b.name || a.duration != b.duration || a.aggregation != b.aggregation)
        return false;
      break;
    case Expr::Kind::Unary:
      if (a.unary != b.unary) return false;
      break;
    case Expr::Kind::Binary:
      if (a.binary != b.binary) return false;
      break;
    case Expr::Kind::Project:
      if (a.projection != b.projection) return false;
      break;
    case Expr::Kind::Ite:
    case Expr::Kind::Tuple:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(a.args[i], b.args[i])) return false;
  return true;
}

namespace {

bool same_activation(const ActivationExpr& a, const ActivationExpr& b) {
  if (a.kind != b.kind || a.name != b.name || a.operands.size() != b.operands.size())
    return false;
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (!same_activation(a.operands[i], b.operands[i])) return false;
  return true;
}

bool same_pacing(const std::optional<PacingAnnotation>& a,
                 const std::optional<PacingAnnotation>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  if (a->frequency != b->frequency) return false;
  if (a->event.has_value() != b->event.has_value()) return false;
  return !a->event || same_activation(*a->event, *b->event);
}

}  // namespace

bool structurally_equal(const Specification& a, const Specification& b) {
  if (a.inputs.size() != b.inputs.size() || a.outputs.size() != b.outputs.size() ||
      a.triggers.size() != b.triggers.size())
    return false;
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    if (a.inputs[i].name != b.inputs[i].name ||
        !(a.inputs[i].value_type == b.inputs[i].value_type))
      return false;
  }
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    const auto& x = a.outputs[i];
    const auto& y = b.outputs[i];
    if (x.name != y.name || x.value_type_annotation != y.value_type_annotation ||
        !same_pacing(x.pacing_annotation, y.pacing_annotation) ||
        !structurally_equal(x.expression, y.expression))
      return false;
  }
  for (std::size_t i = 0; i < a.triggers.size(); ++i) {
    if (a.triggers[i].message != b.triggers[i].message ||
        !structurally_equal(a.triggers[i].condition, b.triggers[i].condition))
      return false;
  }
  return true;
}

std::string Specification::stream_name(StreamId id) const {
  switch (id.kind) {
    case StreamKind::Input: return inputs.at(id.index).name;
    case StreamKind::Output: return outputs.at(id.index).name;
    case StreamKind::Trigger: return "Trigger " + std::to_string(id.index);
  }
  return {};
}

Span Specification::stream_span(StreamId id) const {
  switch (id.kind) {
    case StreamKind::Input: return inputs.at(id.index).name_span;
    case StreamKind::Output: return outputs.at(id.index).name_span;
    case StreamKind::Trigger: return triggers.at(id.index).span;
  }
  return {};
}

const Expr* Specification::stream_expression(StreamId id) const {
  switch (id.kind) {
    case StreamKind::Input: return nullptr;
    case StreamKind::Output: return &outputs.at(id.index).expression;
    case StreamKind::Trigger: return &triggers.at(id.index).condition;
  }
  return nullptr;
}

std::string Specification::trigger_message(std::size_t index) const {
  const auto& t = triggers.at(index);
  if (t.message) return *t.message;
  const Span s = t.condition.span;
  if (s.end <= source_text.size()) return source_text.substr(s.begin, s.end - s.begin);
  return {};
}

std::vector<StreamId> Specification::all_streams() const {
  std::vector<StreamId> ids;
  ids.reserve(inputs.size() + outputs.size() + triggers.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) ids.push_back({StreamKind::Input, i});
  for (std::size_t i = 0; i < outputs.size(); ++i) ids.push_back({StreamKind::Output, i});
  for (std::size_t i = 0; i < triggers.size(); ++i) ids.push_back({StreamKind::Trigger, i});
  return ids;
}

}  // namespace lola
