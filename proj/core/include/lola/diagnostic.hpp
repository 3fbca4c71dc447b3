#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lola {

/// Half-open byte range into the specification text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  static Span cover(const Span& a, const Span& b) {
    return {a.begin < b.begin ? a.begin : b.begin, a.end > b.end ? a.end : b.end};
  }
  friend bool operator==(const Span&, const Span&) = default;
};

/// 1-based line and column; columns count Unicode code points.
struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
  friend bool operator==(const Position&, const Position&) = default;
};

struct ResolvedSpan {
  Position start;
  Position end;
};

/// Maps byte offsets to line/column. Throws std::out_of_range for ranges past
/// the end of the text or splitting a UTF-8 sequence.
ResolvedSpan resolve_span(std::string_view source, Span span);

enum class Severity : std::uint8_t { Error, Warning, Hint };

const char* to_string(Severity s);

struct RelatedNote {
  Span span;
  std::string note;
};

struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string message;
  Span span;
  std::vector<RelatedNote> related;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Registry of every diagnostic code the toolchain emits.
namespace codes {
// Parser.
inline constexpr const char* kUnexpectedToken = "P001";
inline constexpr const char* kUnterminatedString = "P002";
inline constexpr const char* kNonNegativeOffset = "P003";
inline constexpr const char* kUnknownUnit = "P004";
// Naming.
inline constexpr const char* kDuplicateName = "E001";
inline constexpr const char* kUndefinedName = "E002";
inline constexpr const char* kUnknownFunction = "E003";
inline constexpr const char* kArity = "E004";
// Types.
inline constexpr const char* kTypeMismatch = "E010";
inline constexpr const char* kNonBoolTrigger = "E011";
inline constexpr const char* kNonNumericAggregation = "E012";
inline constexpr const char* kMixedPacing = "E013";
inline constexpr const char* kFrequencyDivision = "E014";
inline constexpr const char* kImplicationFails = "E015";
inline constexpr const char* kWindowNotPeriodic = "E016";
inline constexpr const char* kNoPacing = "E017";
inline constexpr const char* kAnnotationNotInput = "E018";
// Dependencies and memory.
inline constexpr const char* kZeroWeightCycle = "E020";
inline constexpr const char* kWindowPanes = "E021";
// Warnings.
inline constexpr const char* kEmptyWindowDefault = "W001";
inline constexpr const char* kNeverEvaluated = "W002";
// Traces.
inline constexpr const char* kUnknownColumn = "T001";
inline constexpr const char* kMissingColumn = "T002";
inline constexpr const char* kBadCell = "T003";
inline constexpr const char* kTraceNotMonotonic = "T004";
inline constexpr const char* kEmptyRow = "T005";
// Runtime faults.
inline constexpr const char* kTimeNotMonotonic = "R001";
inline constexpr const char* kArithmeticFault = "R002";
inline constexpr const char* kOverflowFault = "R003";
}  // namespace codes

struct CodeInfo {
  const char* code;
  const char* summary;
};

/// All registered codes with a one-line summary, in code order.
const std::vector<CodeInfo>& diagnostic_registry();

}  // namespace lola
