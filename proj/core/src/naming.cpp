#include <map>

#include "lola/analysis.hpp"

namespace lola {
namespace {

struct Builtin {
  const char* name;
  std::size_t arity;
};

constexpr Builtin kBuiltins[] = {{"abs", 1}, {"sqrt", 1}, {"min", 2}, {"max", 2}};

const Builtin* find_builtin(const std::string& name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return &b;
  return nullptr;
}

class Resolver {
 public:
  explicit Resolver(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void declare(const std::string& name, StreamId id, Span span) {
    auto [it, inserted] = names_.try_emplace(name, Entry{id, span});
    if (!inserted) {
      diags_.push_back({codes::kDuplicateName, Severity::Error,
                        "stream `" + name + "` is defined multiple times", span,
                        {{it->second.span, "first defined here"}}});
    }
  }

  void resolve(Expr& root) {
    walk_mut(root, [&](Expr& e) {
      switch (e.kind) {
        case Expr::Kind::StreamRef:
        case Expr::Kind::Offset:
        case Expr::Kind::Hold:
        case Expr::Kind::Window:
        case Expr::Kind::Index: {
          auto it = names_.find(e.name);
          if (it == names_.end()) {
            diags_.push_back({codes::kUndefinedName, Severity::Error,
                              "undefined stream `" + e.name + "`", e.name_span, {}});
          } else {
            e.target = it->second.id;
          }
          break;
        }
        case Expr::Kind::Call: {
          const Builtin* b = find_builtin(e.name);
          if (b == nullptr) {
            diags_.push_back({codes::kUnknownFunction, Severity::Error,
                              "unknown function `" + e.name + "`", e.name_span, {}});
          } else if (e.args.size() != b->arity) {
            diags_.push_back({codes::kArity, Severity::Error,
                              "`" + e.name + "` takes " + std::to_string(b->arity) +
                                  " argument(s) but " + std::to_string(e.args.size()) +
                                  " were given",
                              e.span, {}});
          }
          break;
        }
        default:
          break;
      }
    });
  }

  void check_activation(const ActivationExpr& a) {
    if (a.kind != ActivationExpr::Kind::Name) {
      for (const auto& op : a.operands) check_activation(op);
      return;
    }
    auto it = names_.find(a.name);
    if (it == names_.end()) {
      diags_.push_back({codes::kUndefinedName, Severity::Error,
                        "undefined stream `" + a.name + "`", a.span, {}});
    } else if (it->second.id.kind != StreamKind::Input) {
      diags_.push_back({codes::kAnnotationNotInput, Severity::Error,
                        "activation conditions may only mention input streams, `" + a.name +
                            "` is an output",
                        a.span, {}});
    }
  }

 private:
  struct Entry {
    StreamId id;
    Span span;
  };
  std::map<std::string, Entry> names_;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

Outcome<Specification> naming_analysis(Specification spec) {
  Outcome<Specification> out;
  Resolver resolver(out.diagnostics);
  for (std::size_t i = 0; i < spec.inputs.size(); ++i)
    resolver.declare(spec.inputs[i].name, {StreamKind::Input, i}, spec.inputs[i].name_span);
  for (std::size_t i = 0; i < spec.outputs.size(); ++i)
    resolver.declare(spec.outputs[i].name, {StreamKind::Output, i}, spec.outputs[i].name_span);

  for (auto& o : spec.outputs) {
    if (o.pacing_annotation && o.pacing_annotation->event)
      resolver.check_activation(*o.pacing_annotation->event);
    resolver.resolve(o.expression);
  }
  for (auto& t : spec.triggers) resolver.resolve(t.condition);

  if (!has_errors(out.diagnostics)) out.value = std::move(spec);
  return out;
}

}  // namespace lola
