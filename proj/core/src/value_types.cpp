#include <charconv>
#include <functional>
#include <utility>

#include "lola/analysis.hpp"

namespace lola {
namespace {

using Term = std::size_t;

// Union-find over type terms. A representative is either a variable (with
// optional numeric / signed-numeric constraints) or a constructor.
class Unifier {
 public:
  Term fresh(bool numeric = false) {
    nodes_.push_back(Node{nodes_.size(), std::nullopt, {}, numeric, false});
    return nodes_.size() - 1;
  }

  Term concrete(const ValueType& t) {
    std::vector<Term> elems;
    for (const auto& e : t.elements) elems.push_back(concrete(e));
    nodes_.push_back(Node{nodes_.size(), t.kind, std::move(elems), false, false});
    return nodes_.size() - 1;
  }

  Term tuple(std::vector<Term> elems) {
    nodes_.push_back(Node{nodes_.size(), TypeKind::Tuple, std::move(elems), false, false});
    return nodes_.size() - 1;
  }

  Term find(Term t) {
    while (nodes_[t].parent != t) {
      nodes_[t].parent = nodes_[nodes_[t].parent].parent;
      t = nodes_[t].parent;
    }
    return t;
  }

  bool unify(Term a, Term b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    Node& na = nodes_[a];
    Node& nb = nodes_[b];
    if (!na.con && !nb.con) {
      na.parent = b;
      nb.numeric = nb.numeric || na.numeric;
      nb.signed_numeric = nb.signed_numeric || na.signed_numeric;
      return true;
    }
    if (!na.con) return bind(a, b);
    if (!nb.con) return bind(b, a);
    if (*na.con != *nb.con) return false;
    if (*na.con != TypeKind::Tuple) {
      na.parent = b;
      return true;
    }
    if (na.elems.size() != nb.elems.size()) return false;
    std::vector<Term> ea = na.elems;
    std::vector<Term> eb = nb.elems;
    nodes_[a].parent = b;
    for (std::size_t i = 0; i < ea.size(); ++i)
      if (!unify(ea[i], eb[i])) return false;
    return true;
  }

  // Constrains `t` to a numeric type (signed numeric when `need_signed`).
  bool require_numeric(Term t, bool need_signed) {
    t = find(t);
    Node& n = nodes_[t];
    if (!n.con) {
      n.numeric = true;
      n.signed_numeric = n.signed_numeric || need_signed;
      return true;
    }
    return kind_ok(*n.con, true, need_signed);
  }

  std::optional<TypeKind> kind_of(Term t) { return nodes_[find(t)].con; }

  std::vector<Term> elements(Term t) { return nodes_[find(t)].elems; }

  // Resolves to a concrete type, defaulting open variables to Int64.
  ValueType resolve(Term t) {
    t = find(t);
    const Node& n = nodes_[t];
    if (!n.con) return ValueType::int64();
    if (*n.con != TypeKind::Tuple) return ValueType{*n.con, {}};
    std::vector<ValueType> elems;
    for (Term e : std::vector<Term>(n.elems)) elems.push_back(resolve(e));
    return ValueType{TypeKind::Tuple, std::move(elems)};
  }

  std::string describe(Term t) {
    t = find(t);
    const Node& n = nodes_[t];
    if (!n.con) {
      if (n.signed_numeric) return "signed numeric type";
      if (n.numeric) return "numeric type";
      return "unknown type";
    }
    if (*n.con != TypeKind::Tuple) return ValueType{*n.con, {}}.to_string();
    std::string out = "(";
    std::vector<Term> elems = n.elems;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i > 0) out += ", ";
      out += describe(elems[i]);
    }
    return out + ")";
  }

 private:
  struct Node {
    Term parent;
    std::optional<TypeKind> con;
    std::vector<Term> elems;
    bool numeric;
    bool signed_numeric;
  };

  static bool kind_ok(TypeKind k, bool numeric, bool need_signed) {
    if (!numeric) return true;
    if (need_signed) return k == TypeKind::Int64 || k == TypeKind::Float64;
    return k == TypeKind::Int64 || k == TypeKind::UInt64 || k == TypeKind::Float64;
  }

  bool occurs(Term var, Term in) {
    in = find(in);
    if (in == var) return true;
    for (Term e : std::vector<Term>(nodes_[in].elems))
      if (occurs(var, e)) return true;
    return false;
  }

  bool bind(Term var, Term con) {
    const Node& v = nodes_[var];
    if (!kind_ok(*nodes_[con].con, v.numeric, v.signed_numeric)) return false;
    if (occurs(var, con)) return false;
    nodes_[var].parent = con;
    return true;
  }

  std::vector<Node> nodes_;
};

class ValueChecker {
 public:
  ValueChecker(const Specification& spec, std::vector<Diagnostic>& diags)
      : spec_(spec), diags_(diags), node_terms_(spec.node_count) {}

  Outcome<ValueTyping> run() {
    for (std::size_t i = 0; i < spec_.inputs.size(); ++i)
      stream_terms_[{StreamKind::Input, i}] = u_.concrete(spec_.inputs[i].value_type);
    for (std::size_t i = 0; i < spec_.outputs.size(); ++i) {
      const auto& o = spec_.outputs[i];
      stream_terms_[{StreamKind::Output, i}] =
          o.value_type_annotation ? u_.concrete(*o.value_type_annotation) : u_.fresh();
    }
    for (std::size_t i = 0; i < spec_.triggers.size(); ++i)
      stream_terms_[{StreamKind::Trigger, i}] = u_.concrete(ValueType::boolean());

    for (std::size_t i = 0; i < spec_.outputs.size(); ++i) {
      const auto& o = spec_.outputs[i];
      Term body = infer(o.expression);
      Term declared = stream_terms_[{StreamKind::Output, i}];
      std::string expected = u_.describe(declared);
      if (!u_.unify(declared, body)) {
        mismatch(o.expression.span, expected, u_.describe(body),
                 "the value of `" + o.name + "`");
      }
    }
    for (const auto& t : spec_.triggers) {
      Term cond = infer(t.condition);
      if (!u_.unify(cond, u_.concrete(ValueType::boolean()))) {
        diags_.push_back({codes::kNonBoolTrigger, Severity::Error,
                          "trigger condition must be Bool, found " + u_.describe(cond),
                          t.condition.span, {}});
      }
    }
    resolve_projections();

    Outcome<ValueTyping> out;
    if (has_errors(diags_)) return out;
    ValueTyping typing;
    for (const auto& [id, term] : stream_terms_) typing.streams[id] = u_.resolve(term);
    typing.expressions.resize(spec_.node_count);
    for (std::size_t n = 0; n < spec_.node_count; ++n)
      if (node_terms_[n]) typing.expressions[n] = u_.resolve(*node_terms_[n]);
    check_literal_ranges(typing);
    if (has_errors(diags_)) return out;
    out.value = std::move(typing);
    return out;
  }

 private:
  // Integer literals take the type inferred from context; reject digits that
  // do not fit it.
  void check_literal_ranges(const ValueTyping& typing) {
    auto check = [&](const Expr& e) {
      if (e.kind != Expr::Kind::Literal || e.literal.kind != LiteralKind::Integer) return;
      const ValueType& type = typing.expressions[e.node_id];
      const std::string& text = e.literal.text;
      const char* first = text.data();
      const char* last = first + text.size();
      bool fits = true;
      if (type.kind == TypeKind::Int64) {
        std::int64_t v;
        fits = std::from_chars(first, last, v).ec == std::errc();
      } else if (type.kind == TypeKind::UInt64) {
        std::uint64_t v;
        fits = std::from_chars(first, last, v).ec == std::errc();
      }
      if (!fits)
        mismatch(e.span, "a value in range of " + type.to_string(), "`" + text + "`",
                 "the integer literal");
    };
    for (const auto& o : spec_.outputs) walk(o.expression, check);
    for (const auto& t : spec_.triggers) walk(t.condition, check);
  }

  void mismatch(Span span, const std::string& expected, const std::string& found,
                const std::string& what) {
    diags_.push_back({codes::kTypeMismatch, Severity::Error,
                      "type mismatch in " + what + ": expected " + expected + ", found " + found,
                      span, {}});
  }

  // Unifies `actual` with `expected`, reporting at `span` on failure.
  void expect(Term expected, Term actual, Span span, const std::string& what) {
    std::string want = u_.describe(expected);
    std::string got = u_.describe(actual);
    if (!u_.unify(expected, actual)) mismatch(span, want, got, what);
  }

  void expect_numeric(Term t, bool need_signed, Span span, const std::string& what) {
    std::string got = u_.describe(t);
    if (!u_.require_numeric(t, need_signed))
      mismatch(span, need_signed ? "signed numeric type" : "numeric type", got, what);
  }

  Term boolean() { return u_.concrete(ValueType::boolean()); }

  Term infer(const Expr& e) {
    Term t = infer_node(e);
    node_terms_[e.node_id] = t;
    return t;
  }

  Term infer_node(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal:
        switch (e.literal.kind) {
          case LiteralKind::Integer: return u_.fresh(true);
          case LiteralKind::Float: return u_.concrete(ValueType::float64());
          case LiteralKind::Bool: return boolean();
          case LiteralKind::String: return u_.concrete(ValueType::string());
        }
        break;
      case Expr::Kind::StreamRef: return stream_terms_.at(*e.target);
      case Expr::Kind::Offset:
      case Expr::Kind::Index:
      case Expr::Kind::Hold: {
        Term target = stream_terms_.at(*e.target);
        Term fallback = infer(e.args[0]);
        expect(target, fallback, e.args[0].span, "the default of the access to `" + e.name + "`");
        return target;
      }
      case Expr::Kind::Window: return window(e);
      case Expr::Kind::Unary: {
        Term operand = infer(e.args[0]);
        if (e.unary == UnaryOp::Not) {
          expect(boolean(), operand, e.args[0].span, "the operand of `!`");
          return boolean();
        }
        expect_numeric(operand, true, e.args[0].span, "the operand of unary `-`");
        return operand;
      }
      case Expr::Kind::Binary: return binary(e);
      case Expr::Kind::Ite: {
        Term cond = infer(e.args[0]);
        expect(boolean(), cond, e.args[0].span, "the condition of `if`");
        Term then_t = infer(e.args[1]);
        Term else_t = infer(e.args[2]);
        expect(then_t, else_t, e.args[2].span, "the `else` branch");
        return then_t;
      }
      case Expr::Kind::Call: return call(e);
      case Expr::Kind::Tuple: {
        std::vector<Term> elems;
        for (const auto& a : e.args) elems.push_back(infer(a));
        return u_.tuple(std::move(elems));
      }
      case Expr::Kind::Project: {
        Term base = infer(e.args[0]);
        Term result = u_.fresh();
        projections_.push_back({&e, base, result});
        return result;
      }
    }
    return u_.fresh();
  }

  Term window(const Expr& e) {
    Term target = stream_terms_.at(*e.target);
    Term result;
    if (e.aggregation == AggFunc::Count) {
      result = u_.concrete(ValueType::uint64());
    } else {
      std::string got = u_.describe(target);
      if (!u_.require_numeric(target, false)) {
        diags_.push_back({codes::kNonNumericAggregation, Severity::Error,
                          std::string("`") + to_string(e.aggregation) +
                              "` needs a numeric target, but `" + e.name + "` has type " + got,
                          e.span, {}});
      }
      result = e.aggregation == AggFunc::Avg ? u_.concrete(ValueType::float64()) : target;
    }
    if (!e.args.empty()) {
      Term fallback = infer(e.args[0]);
      expect(result, fallback, e.args[0].span, "the default of the aggregation");
    } else if (e.aggregation == AggFunc::Avg || e.aggregation == AggFunc::Min ||
               e.aggregation == AggFunc::Max) {
      diags_.push_back({codes::kEmptyWindowDefault, Severity::Warning,
                        std::string("`") + to_string(e.aggregation) +
                            "` has no `or:` default; an empty window yields zero",
                        e.span, {}});
    }
    return result;
  }

  Term binary(const Expr& e) {
    Term lhs = infer(e.args[0]);
    Term rhs = infer(e.args[1]);
    std::string what = std::string("the operands of `") + to_string(e.binary) + "`";
    switch (e.binary) {
      case BinaryOp::And:
      case BinaryOp::Or:
        expect(boolean(), lhs, e.args[0].span, what);
        expect(boolean(), rhs, e.args[1].span, what);
        return boolean();
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        expect(lhs, rhs, e.args[1].span, what);
        return boolean();
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        expect(lhs, rhs, e.args[1].span, what);
        expect_numeric(lhs, false, e.span, what);
        return boolean();
      default:
        expect(lhs, rhs, e.args[1].span, what);
        expect_numeric(lhs, false, e.span, what);
        return lhs;
    }
  }

  Term call(const Expr& e) {
    std::vector<Term> args;
    for (const auto& a : e.args) args.push_back(infer(a));
    std::string what = "the argument of `" + e.name + "`";
    if (e.name == "sqrt") {
      expect(u_.concrete(ValueType::float64()), args[0], e.args[0].span, what);
      return args[0];
    }
    if (e.name == "abs") {
      expect_numeric(args[0], false, e.args[0].span, what);
      return args[0];
    }
    // min / max
    expect(args[0], args[1], e.args[1].span, what);
    expect_numeric(args[0], false, e.span, what);
    return args[0];
  }

  // Tuple projections need the base type to be known; iterate until no
  // projection makes progress.
  void resolve_projections() {
    bool progress = true;
    while (progress && !projections_.empty()) {
      progress = false;
      for (auto it = projections_.begin(); it != projections_.end();) {
        auto kind = u_.kind_of(it->base);
        if (!kind) {
          ++it;
          continue;
        }
        const Expr& e = *it->expr;
        if (*kind != TypeKind::Tuple) {
          mismatch(e.args[0].span, "tuple", u_.describe(it->base), "the projection");
        } else {
          auto elems = u_.elements(it->base);
          if (e.projection >= elems.size()) {
            mismatch(e.span, "tuple with more than " + std::to_string(e.projection) + " elements",
                     u_.describe(it->base), "the projection");
          } else {
            expect(elems[e.projection], it->result, e.span, "the projection");
          }
        }
        it = projections_.erase(it);
        progress = true;
      }
    }
    for (const auto& p : projections_)
      mismatch(p.expr->args[0].span, "tuple", "unknown type", "the projection");
  }

  struct Projection {
    const Expr* expr;
    Term base;
    Term result;
  };

  const Specification& spec_;
  std::vector<Diagnostic>& diags_;
  Unifier u_;
  std::map<StreamId, Term> stream_terms_;
  std::vector<std::optional<Term>> node_terms_;
  std::vector<Projection> projections_;
};

}  // namespace

Outcome<ValueTyping> value_type_analysis(const Specification& resolved) {
  std::vector<Diagnostic> diags;
  Outcome<ValueTyping> out = ValueChecker(resolved, diags).run();
  out.diagnostics = std::move(diags);
  return out;
}

}  // namespace lola
