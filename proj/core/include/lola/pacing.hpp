#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lola/types.hpp"

namespace lola {

/// Positive boolean formula over input streams, stored as its unique minimal
/// disjunctive normal form: a set of conjunctive clauses where no clause is a
/// superset of another. Negation is unrepresentable.
///
/// The formula with a single empty clause is `true`; the formula with no
/// clauses is `false`.
class ActivationFormula {
 public:
  using Clause = std::set<std::size_t>;  // input indices

  static ActivationFormula input(std::size_t index);
  static ActivationFormula always();
  /// Builds a formula from arbitrary clauses; absorbed clauses are dropped.
  static ActivationFormula from_clauses(std::set<Clause> clauses);

  ActivationFormula conjoin(const ActivationFormula& other) const;
  ActivationFormula disjoin(const ActivationFormula& other) const;

  /// Evaluates the formula for a set of present inputs.
  bool satisfied_by(const std::vector<bool>& present) const;

  /// Decides `*this => other` by enumerating every truth assignment over the
  /// inputs mentioned in either formula.
  bool implies(const ActivationFormula& other) const;

  std::set<std::size_t> variables() const;
  const std::set<Clause>& clauses() const { return clauses_; }
  bool is_true() const { return clauses_.size() == 1 && clauses_.begin()->empty(); }

  /// Renders with `∧`/`∨`, e.g. `lat`, `(lat ∧ lon)`, `(a ∨ (b ∧ c))`.
  /// Variables sort by input index, clauses lexicographically.
  std::string to_string(
      const std::function<std::string(std::size_t)>& input_name) const;

  friend bool operator==(const ActivationFormula&,
                         const ActivationFormula&) = default;

 private:
  explicit ActivationFormula(std::set<Clause> clauses);
  static std::set<Clause> minimize(std::set<Clause> clauses);

  std::set<Clause> clauses_;
};

struct EventPacing {
  ActivationFormula formula;
  friend bool operator==(const EventPacing&, const EventPacing&) = default;
};

struct PeriodicPacing {
  Frequency frequency;
  friend bool operator==(const PeriodicPacing&, const PeriodicPacing&) = default;
};

/// Vacuous pacing of an expression without any synchronous access.
struct ConstantPacing {
  friend bool operator==(const ConstantPacing&, const ConstantPacing&) = default;
};

struct PacingType {
  std::variant<ConstantPacing, EventPacing, PeriodicPacing> kind;

  static PacingType event(ActivationFormula f) { return {EventPacing{std::move(f)}}; }
  static PacingType periodic(Frequency f) { return {PeriodicPacing{f}}; }
  static PacingType constant() { return {ConstantPacing{}}; }

  bool is_event() const { return std::holds_alternative<EventPacing>(kind); }
  bool is_periodic() const { return std::holds_alternative<PeriodicPacing>(kind); }
  bool is_constant() const { return std::holds_alternative<ConstantPacing>(kind); }
  const ActivationFormula& formula() const { return std::get<EventPacing>(kind).formula; }
  const Frequency& frequency() const { return std::get<PeriodicPacing>(kind).frequency; }

  /// `@lat`, `@(lat ∧ lon)`, `@1Hz`, `@const`.
  std::string to_string(
      const std::function<std::string(std::size_t)>& input_name) const;

  friend bool operator==(const PacingType&, const PacingType&) = default;
};

/// f_accessor divides f_accessed iff f_accessed / f_accessor is a positive
/// integer.
bool frequency_divides(const Frequency& accessor, const Frequency& accessed);

}  // namespace lola
