#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lola/analysis.hpp"
#include "lola/ast.hpp"
#include "lola/pacing.hpp"
#include "lola/types.hpp"

namespace lola {

enum class Builtin : std::uint8_t { Abs, Sqrt, Min, Max };

const char* to_string(Builtin fn);

/// Expression with every stream reference replaced by a position in
/// MirSpec::streams. Children follow the same layout as Expr::args.
struct MirExpr {
  enum class Op : std::uint8_t {
    Const, Sync, Offset, Hold, Window, Unary, Binary, Ite, Call, Tuple, Project,
  };

  Op op = Op::Const;
  Value constant;          // Const
  std::size_t stream = 0;  // Sync/Offset/Hold: accessed stream position
  std::size_t slot = 0;    // Offset: ring-buffer slot, 0 = newest stored value
  std::size_t window = 0;  // Window: index into MirSpec::windows
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
  Builtin builtin = Builtin::Abs;
  std::size_t projection = 0;
  std::vector<MirExpr> args;

  friend bool operator==(const MirExpr&, const MirExpr&) = default;
};

struct MirStream {
  StreamId id;
  std::string name;
  ValueType type;
  PacingType pacing;
  std::size_t buffer_size = 1;
  std::optional<MirExpr> expression;      // absent for inputs
  std::optional<std::size_t> value_slot;  // column in verdicts; absent for triggers

  friend bool operator==(const MirStream&, const MirStream&) = default;
};

struct MirTrigger {
  std::size_t stream = 0;
  std::size_t index = 0;
  std::string message;

  friend bool operator==(const MirTrigger&, const MirTrigger&) = default;
};

struct MirDeadlineGroup {
  Frequency frequency;
  std::vector<std::size_t> members;  // stream positions in evaluation order

  friend bool operator==(const MirDeadlineGroup&, const MirDeadlineGroup&) = default;
};

struct MirWindow {
  std::size_t target = 0;
  std::size_t accessor = 0;
  Duration duration;
  AggFunc aggregation = AggFunc::Count;
  std::size_t panes = 1;
  ValueType target_type;
  ValueType result_type;

  friend bool operator==(const MirWindow&, const MirWindow&) = default;
};

/// Execution-oriented form of an analyzed specification. `streams` is in
/// evaluation order: a topological order of the synchronous accesses with
/// ties broken by declaration order (inputs, outputs, triggers).
struct MirSpec {
  static constexpr int kVersion = 1;

  std::vector<MirStream> streams;
  std::vector<std::size_t> event_layout;  // stream position of each input, by input index
  std::vector<MirDeadlineGroup> deadlines;
  std::vector<MirWindow> windows;
  std::vector<MirTrigger> triggers;
  std::optional<Rational> hyper_period;  // seconds; absent without periodic streams
  std::vector<std::string> value_columns;  // names of inputs then outputs

  std::size_t input_count() const { return event_layout.size(); }

  friend bool operator==(const MirSpec&, const MirSpec&) = default;
};

/// Lowers an error-free report. Throws std::logic_error if the report has
/// errors or incomplete analysis results.
MirSpec lower(const AnalysisReport& report);

nlohmann::json serialize_mir(const MirSpec& mir);
/// Inverse of serialize_mir; throws nlohmann::json::exception or
/// std::invalid_argument on malformed documents.
MirSpec deserialize_mir(const nlohmann::json& doc);

nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);

}  // namespace lola
