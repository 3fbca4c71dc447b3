#include "lola/diagnostic.hpp"

#include <algorithm>
#include <stdexcept>

namespace lola {
namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

Position position_of(std::string_view source, std::size_t offset) {
  if (offset > source.size()) throw std::out_of_range("span past end of source");
  if (offset < source.size() && is_continuation(static_cast<unsigned char>(source[offset])))
    throw std::out_of_range("span splits a UTF-8 sequence");
  Position pos;
  for (std::size_t i = 0; i < offset; ++i) {
    unsigned char c = static_cast<unsigned char>(source[i]);
    if (c == '\n') {
      ++pos.line;
      pos.column = 1;
    } else if (!is_continuation(c)) {
      ++pos.column;
    }
  }
  return pos;
}

}  // namespace

ResolvedSpan resolve_span(std::string_view source, Span span) {
  if (span.begin > span.end) throw std::out_of_range("inverted span");
  return {position_of(source, span.begin), position_of(source, span.end)};
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Hint: return "hint";
  }
  return "?";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

const std::vector<CodeInfo>& diagnostic_registry() {
  static const std::vector<CodeInfo> registry = {
      {codes::kUnexpectedToken, "unexpected token"},
      {codes::kUnterminatedString, "unterminated string literal"},
      {codes::kNonNegativeOffset, "offset must be a negative integer"},
      {codes::kUnknownUnit, "unknown frequency or duration unit"},
      {codes::kDuplicateName, "duplicate stream name"},
      {codes::kUndefinedName, "undefined stream name"},
      {codes::kUnknownFunction, "unknown function"},
      {codes::kArity, "wrong number of arguments"},
      {codes::kTypeMismatch, "type mismatch"},
      {codes::kNonBoolTrigger, "trigger condition is not Bool"},
      {codes::kNonNumericAggregation, "aggregation needs a numeric target"},
      {codes::kMixedPacing, "synchronous access mixes event-based and periodic streams"},
      {codes::kFrequencyDivision, "frequency does not divide the accessed frequency"},
      {codes::kImplicationFails, "activation condition does not imply the accessed one"},
      {codes::kWindowNotPeriodic, "window in a stream without periodic pacing"},
      {codes::kNoPacing, "no pacing inferable"},
      {codes::kAnnotationNotInput, "pacing annotation names a non-input stream"},
      {codes::kZeroWeightCycle, "zero-weight dependency cycle"},
      {codes::kWindowPanes, "window duration is not a multiple of the period"},
      {codes::kEmptyWindowDefault, "aggregation without default on an empty window"},
      {codes::kNeverEvaluated, "stream is never evaluated"},
      {codes::kUnknownColumn, "trace column names no input"},
      {codes::kMissingColumn, "trace has no column for an input"},
      {codes::kBadCell, "trace cell does not parse as the input type"},
      {codes::kTraceNotMonotonic, "trace timestamps decrease"},
      {codes::kEmptyRow, "trace row has no input value"},
      {codes::kTimeNotMonotonic, "event earlier than the current time"},
      {codes::kArithmeticFault, "integer division or modulo by zero"},
      {codes::kOverflowFault, "integer overflow"},
  };
  return registry;
}

}  // namespace lola
