#include "lola/pacing.hpp"

#include <algorithm>
#include <stdexcept>

namespace lola {

ActivationFormula::ActivationFormula(std::set<Clause> clauses)
    : clauses_(minimize(std::move(clauses))) {}

std::set<ActivationFormula::Clause> ActivationFormula::minimize(
    std::set<Clause> clauses) {
  std::set<Clause> out;
  for (const auto& c : clauses) {
    bool absorbed = false;
    for (const auto& other : clauses) {
      if (&other == &c) continue;
      bool subset = other.size() < c.size() &&
                    std::includes(c.begin(), c.end(), other.begin(), other.end());
      if (subset) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) out.insert(c);
  }
  return out;
}

ActivationFormula ActivationFormula::input(std::size_t index) {
  return ActivationFormula({Clause{index}});
}

ActivationFormula ActivationFormula::always() {
  return ActivationFormula({Clause{}});
}

ActivationFormula ActivationFormula::from_clauses(std::set<Clause> clauses) {
  return ActivationFormula(std::move(clauses));
}

ActivationFormula ActivationFormula::conjoin(const ActivationFormula& other) const {
  std::set<Clause> out;
  for (const auto& a : clauses_) {
    for (const auto& b : other.clauses_) {
      Clause merged = a;
      merged.insert(b.begin(), b.end());
      out.insert(std::move(merged));
    }
  }
  return ActivationFormula(std::move(out));
}

ActivationFormula ActivationFormula::disjoin(const ActivationFormula& other) const {
  std::set<Clause> out = clauses_;
  out.insert(other.clauses_.begin(), other.clauses_.end());
  return ActivationFormula(std::move(out));
}

bool ActivationFormula::satisfied_by(const std::vector<bool>& present) const {
  return std::any_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) {
    return std::all_of(c.begin(), c.end(), [&](std::size_t i) {
      return i < present.size() && present[i];
    });
  });
}

std::set<std::size_t> ActivationFormula::variables() const {
  std::set<std::size_t> vars;
  for (const auto& c : clauses_) vars.insert(c.begin(), c.end());
  return vars;
}

bool ActivationFormula::implies(const ActivationFormula& other) const {
  std::set<std::size_t> all = variables();
  auto theirs = other.variables();
  all.insert(theirs.begin(), theirs.end());
  std::vector<std::size_t> vars(all.begin(), all.end());
  if (vars.size() > 24) throw std::length_error("too many inputs for truth table");
  std::size_t max_index = vars.empty() ? 0 : vars.back() + 1;
  std::vector<bool> present(max_index, false);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    for (std::size_t k = 0; k < vars.size(); ++k) present[vars[k]] = (mask >> k) & 1;
    if (satisfied_by(present) && !other.satisfied_by(present)) return false;
  }
  return true;
}

std::string ActivationFormula::to_string(
    const std::function<std::string(std::size_t)>& input_name) const {
  if (clauses_.empty()) return "false";
  if (is_true()) return "true";
  auto clause_text = [&](const Clause& c) {
    std::string out;
    for (std::size_t i : c) {
      if (!out.empty()) out += " ∧ ";
      out += input_name(i);
    }
    return out;
  };
  if (clauses_.size() == 1) {
    const auto& only = *clauses_.begin();
    if (only.size() == 1) return input_name(*only.begin());
    return "(" + clause_text(only) + ")";
  }
  std::string out;
  for (const auto& c : clauses_) {
    if (!out.empty()) out += " ∨ ";
    out += c.size() > 1 ? "(" + clause_text(c) + ")" : clause_text(c);
  }
  return "(" + out + ")";
}

std::string PacingType::to_string(
    const std::function<std::string(std::size_t)>& input_name) const {
  if (is_event()) return "@" + formula().to_string(input_name);
  if (is_periodic()) return "@" + lola::to_string(frequency());
  return "@const";
}

bool frequency_divides(const Frequency& accessor, const Frequency& accessed) {
  Rational ratio = accessed.hertz / accessor.hertz;
  return ratio.is_integer() && ratio.is_positive();
}

}  // namespace lola
