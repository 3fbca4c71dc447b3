#include <string>

#include "lola/parser.hpp"

namespace lola {
namespace {

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out + "\"";
}

std::string print_activation(const ActivationExpr& a) {
  switch (a.kind) {
    case ActivationExpr::Kind::Name: return a.name;
    case ActivationExpr::Kind::And:
      return "(" + print_activation(a.operands[0]) + " ∧ " + print_activation(a.operands[1]) + ")";
    case ActivationExpr::Kind::Or:
      return "(" + print_activation(a.operands[0]) + " ∨ " + print_activation(a.operands[1]) + ")";
  }
  return {};
}

std::string print_pacing(const PacingAnnotation& p) {
  if (p.frequency) return "@" + to_string(*p.frequency);
  return "@" + print_activation(*p.event);
}

// Duration in the largest unit that represents it as an integer, else seconds.
std::string print_duration(const Duration& d) {
  if ((d.seconds / Rational(3600)).is_integer()) return compact_number(d.seconds / Rational(3600)) + "h";
  if ((d.seconds / Rational(60)).is_integer()) return compact_number(d.seconds / Rational(60)) + "min";
  if (d.seconds.is_integer()) return compact_number(d.seconds) + "s";
  return compact_number(d.seconds * Rational(1000)) + "ms";
}

}  // namespace

std::string pretty_print(const ValueType& type) { return type.to_string(); }

std::string pretty_print(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      switch (e.literal.kind) {
        case LiteralKind::Integer:
        case LiteralKind::Float: return e.literal.text;
        case LiteralKind::Bool: return e.literal.boolean ? "true" : "false";
        case LiteralKind::String: return quote(e.literal.text);
      }
      break;
    case Expr::Kind::StreamRef: return e.name;
    case Expr::Kind::Offset:
      return e.name + ".offset(by: " + std::to_string(e.offset) + ", or: " +
             pretty_print(e.args[0]) + ")";
    case Expr::Kind::Index:
      return e.name + "[" + std::to_string(e.offset) + ", " + pretty_print(e.args[0]) + "]";
    case Expr::Kind::Hold: return e.name + ".hold(or: " + pretty_print(e.args[0]) + ")";
    case Expr::Kind::Window: {
      std::string out = e.name + ".aggregate(over: " + print_duration(e.duration) +
                        ", using: " + to_string(e.aggregation);
      if (!e.args.empty()) out += ", or: " + pretty_print(e.args[0]);
      return out + ")";
    }
    case Expr::Kind::Unary:
      return std::string("(") + to_string(e.unary) + pretty_print(e.args[0]) + ")";
    case Expr::Kind::Binary:
      return "(" + pretty_print(e.args[0]) + " " + to_string(e.binary) + " " +
             pretty_print(e.args[1]) + ")";
    case Expr::Kind::Ite:
      return "(if " + pretty_print(e.args[0]) + " then " + pretty_print(e.args[1]) + " else " +
             pretty_print(e.args[2]) + ")";
    case Expr::Kind::Call:
    case Expr::Kind::Tuple: {
      std::string out = e.kind == Expr::Kind::Call ? e.name + "(" : "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i > 0) out += ", ";
        out += pretty_print(e.args[i]);
      }
      return out + ")";
    }
    case Expr::Kind::Project:
      return pretty_print(e.args[0]) + "." + std::to_string(e.projection);
  }
  return {};
}

std::string pretty_print(const Specification& spec) {
  std::string out;
  for (const auto& in : spec.inputs)
    out += "input " + in.name + " : " + in.value_type.to_string() + "\n";
  for (const auto& o : spec.outputs) {
    out += "output " + o.name;
    if (o.value_type_annotation) out += " : " + o.value_type_annotation->to_string();
    if (o.pacing_annotation) out += " " + print_pacing(*o.pacing_annotation);
    out += " := " + pretty_print(o.expression) + "\n";
  }
  for (const auto& t : spec.triggers) {
    out += "trigger " + pretty_print(t.condition);
    if (t.message) out += " " + quote(*t.message);
    out += "\n";
  }
  return out;
}

}  // namespace lola
