#include <map>
#include <optional>

#include "lola/analysis.hpp"

namespace lola {
namespace {

struct Access {
  StreamId target;
  Expr::Kind kind;
  Span span;
};

// Synchronous and offset accesses in `root`, including those nested in
// default expressions.
std::vector<Access> timing_accesses(const Expr& root) {
  std::vector<Access> out;
  walk(root, [&](const Expr& e) {
    if ((e.kind == Expr::Kind::StreamRef || e.kind == Expr::Kind::Offset ||
         e.kind == Expr::Kind::Index) &&
        e.target)
      out.push_back({*e.target, e.kind, e.span});
  });
  return out;
}

std::vector<const Expr*> windows_in(const Expr& root) {
  std::vector<const Expr*> out;
  walk(root, [&](const Expr& e) {
    if (e.kind == Expr::Kind::Window) out.push_back(&e);
  });
  return out;
}

// A pacing slot during inference; `error` marks a stream whose accesses mix
// event-based and periodic timing.
struct Slot {
  PacingType pacing = PacingType::constant();
  bool error = false;
  bool annotated = false;
};

enum class Combine { Ok, Mixed };

Combine conjoin(PacingType& acc, const PacingType& next) {
  if (next.is_constant()) return Combine::Ok;
  if (acc.is_constant()) {
    acc = next;
    return Combine::Ok;
  }
  if (acc.is_event() && next.is_event()) {
    acc = PacingType::event(acc.formula().conjoin(next.formula()));
    return Combine::Ok;
  }
  if (acc.is_periodic() && next.is_periodic()) {
    acc = PacingType::periodic(
        Frequency{rational_gcd(acc.frequency().hertz, next.frequency().hertz)});
    return Combine::Ok;
  }
  return Combine::Mixed;
}

class PacingChecker {
 public:
  PacingChecker(const Specification& spec, std::vector<Diagnostic>& diags)
      : spec_(spec), diags_(diags) {
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) input_index_[spec.inputs[i].name] = i;
  }

  Outcome<std::map<StreamId, PacingType>> run() {
    for (std::size_t i = 0; i < spec_.inputs.size(); ++i)
      slots_[{StreamKind::Input, i}].pacing = PacingType::event(ActivationFormula::input(i));
    for (std::size_t i = 0; i < spec_.outputs.size(); ++i) {
      const auto& ann = spec_.outputs[i].pacing_annotation;
      Slot& s = slots_[{StreamKind::Output, i}];
      if (ann) {
        s.annotated = true;
        s.pacing = ann->frequency ? PacingType::periodic(*ann->frequency)
                                  : PacingType::event(formula_of(*ann->event));
      }
    }
    for (std::size_t i = 0; i < spec_.triggers.size(); ++i) slots_[{StreamKind::Trigger, i}];

    infer_fixpoint();
    report_missing_pacing();
    check_accesses();

    Outcome<std::map<StreamId, PacingType>> out;
    if (has_errors(diags_)) return out;
    std::map<StreamId, PacingType> result;
    for (const auto& [id, slot] : slots_) {
      result[id] = slot.pacing;
      if (id.kind != StreamKind::Input && slot.pacing.is_constant()) {
        diags_.push_back({codes::kNeverEvaluated, Severity::Warning,
                          "`" + spec_.stream_name(id) +
                              "` only depends on streams without timing and is never evaluated",
                          spec_.stream_span(id), {}});
      }
    }
    out.value = std::move(result);
    return out;
  }

 private:
  ActivationFormula formula_of(const ActivationExpr& a) const {
    switch (a.kind) {
      case ActivationExpr::Kind::Name: return ActivationFormula::input(input_index_.at(a.name));
      case ActivationExpr::Kind::And:
        return formula_of(a.operands[0]).conjoin(formula_of(a.operands[1]));
      case ActivationExpr::Kind::Or:
        return formula_of(a.operands[0]).disjoin(formula_of(a.operands[1]));
    }
    return ActivationFormula::always();
  }

  std::vector<StreamId> computed_streams() const {
    std::vector<StreamId> ids;
    for (std::size_t i = 0; i < spec_.outputs.size(); ++i) ids.push_back({StreamKind::Output, i});
    for (std::size_t i = 0; i < spec_.triggers.size(); ++i) ids.push_back({StreamKind::Trigger, i});
    return ids;
  }

  // Unannotated streams start at the vacuous pacing and are strengthened by
  // conjunction with everything they access until nothing changes. The
  // iteration is monotone over a finite lattice, so it terminates.
  void infer_fixpoint() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (StreamId id : computed_streams()) {
        Slot& slot = slots_[id];
        if (slot.annotated || slot.error) continue;
        PacingType acc = PacingType::constant();
        bool mixed = false;
        for (const Access& a : timing_accesses(*spec_.stream_expression(id))) {
          const Slot& target = slots_[a.target];
          if (target.error) continue;
          if (conjoin(acc, target.pacing) == Combine::Mixed) {
            mixed = true;
            break;
          }
        }
        if (mixed) {
          slot.error = true;
          changed = true;
          report_mixed(id);
        } else if (!(acc == slot.pacing)) {
          slot.pacing = acc;
          changed = true;
        }
      }
    }
  }

  void report_mixed(StreamId id) {
    auto accesses = timing_accesses(*spec_.stream_expression(id));
    std::optional<Access> first;
    for (const Access& a : accesses) {
      const Slot& t = slots_[a.target];
      if (t.error || t.pacing.is_constant()) continue;
      if (!first) {
        first = a;
        continue;
      }
      if (t.pacing.is_event() != slots_[first->target].pacing.is_event()) {
        diags_.push_back(
            {codes::kMixedPacing, Severity::Error,
             "`" + spec_.stream_name(id) + "` synchronously accesses the " +
                 describe_class(slots_[first->target].pacing) + " stream `" +
                 spec_.stream_name(first->target) + "` and the " + describe_class(t.pacing) +
                 " stream `" + spec_.stream_name(a.target) +
                 "`; no common timing exists (use a hold access)",
             a.span,
             {{first->span, "first access here"}}});
        return;
      }
    }
  }

  static std::string describe_class(const PacingType& p) {
    return p.is_event() ? "event-based" : "periodic";
  }

  std::string show(const PacingType& p) const {
    return p.to_string([&](std::size_t i) { return spec_.inputs[i].name; });
  }

  void report_missing_pacing() {
    for (StreamId id : computed_streams()) {
      Slot& slot = slots_[id];
      if (slot.annotated || slot.error) continue;
      if (timing_accesses(*spec_.stream_expression(id)).empty()) {
        slot.error = true;
        std::string hint = id.kind == StreamKind::Output
                               ? "; annotate a pacing such as `@1Hz`"
                               : "; access a stream synchronously";
        diags_.push_back({codes::kNoPacing, Severity::Error,
                          "cannot infer when `" + spec_.stream_name(id) +
                              "` is evaluated: it has no synchronous access" + hint,
                          spec_.stream_span(id), {}});
      }
    }
  }

  void check_accesses() {
    for (StreamId id : computed_streams()) {
      const Slot& slot = slots_[id];
      if (slot.error) continue;
      const Expr& body = *spec_.stream_expression(id);

      for (const Access& a : timing_accesses(body)) {
        const Slot& target = slots_[a.target];
        if (target.error || target.pacing.is_constant() || slot.pacing.is_constant()) continue;
        const PacingType& mine = slot.pacing;
        const PacingType& theirs = target.pacing;
        std::string who = "`" + spec_.stream_name(id) + "` (" + show(mine) + ")";
        std::string whom = "`" + spec_.stream_name(a.target) + "` (" + show(theirs) + ")";
        if (mine.is_event() != theirs.is_event()) {
          diags_.push_back({codes::kMixedPacing, Severity::Error,
                            who + " cannot synchronously access " + whom +
                                "; use a hold access",
                            a.span, {}});
        } else if (mine.is_periodic()) {
          if (!frequency_divides(mine.frequency(), theirs.frequency()))
            diags_.push_back({codes::kFrequencyDivision, Severity::Error,
                              "the frequency of " + who + " does not divide the frequency of " +
                                  whom,
                              a.span, {}});
        } else if (!mine.formula().implies(theirs.formula())) {
          diags_.push_back({codes::kImplicationFails, Severity::Error,
                            "the activation condition of " + who + " does not imply that of " +
                                whom,
                            a.span, {}});
        }
      }

      for (const Expr* w : windows_in(body)) {
        if (!slot.annotated || !slot.pacing.is_periodic()) {
          diags_.push_back({codes::kWindowNotPeriodic, Severity::Error,
                            "sliding windows need a stream annotated with a periodic pacing "
                            "such as `@1Hz`",
                            w->span, {}});
        }
      }
    }
  }

  const Specification& spec_;
  std::vector<Diagnostic>& diags_;
  std::map<std::string, std::size_t> input_index_;
  std::map<StreamId, Slot> slots_;
};

}  // namespace

Outcome<std::map<StreamId, PacingType>> pacing_type_analysis(const Specification& resolved) {
  std::vector<Diagnostic> diags;
  auto out = PacingChecker(resolved, diags).run();
  out.diagnostics = std::move(diags);
  return out;
}

}  // namespace lola
