#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lola/ast.hpp"
#include "lola/diagnostic.hpp"
#include "lola/pacing.hpp"
#include "lola/types.hpp"

namespace lola {

/// Result of one analysis phase: a value when the phase succeeded, plus
/// every diagnostic it produced (warnings may accompany a value).
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
};

/// Resolves stream names to StreamIds and checks function names. Forward
/// references are allowed.
Outcome<Specification> naming_analysis(Specification spec);

struct ValueTyping {
  std::map<StreamId, ValueType> streams;
  std::vector<ValueType> expressions;  // indexed by Expr::node_id
};

Outcome<ValueTyping> value_type_analysis(const Specification& resolved);

Outcome<std::map<StreamId, PacingType>> pacing_type_analysis(const Specification& resolved);

struct TypedSpecification {
  Specification specification;
  std::map<StreamId, ValueType> value_types;
  std::map<StreamId, PacingType> pacing_types;
  std::vector<ValueType> expression_types;

  std::string pacing_string(StreamId id) const;
};

/// Runs value and pacing typing; fails if either reports an error.
Outcome<TypedSpecification> type_analysis(Specification resolved);

enum class EdgeKind : std::uint8_t { Sync, Offset, Hold, Window };

const char* to_string(EdgeKind kind);

/// Access from `from` (the accessor) to `to` (the accessed stream).
/// Identical accesses within one expression collapse into a single edge that
/// remembers every occurrence.
struct Edge {
  StreamId from;
  StreamId to;
  EdgeKind kind = EdgeKind::Sync;
  std::uint64_t weight = 0;           // Sync: 0, Offset: |offset|
  std::optional<Duration> duration;   // Window only
  std::size_t window_node = 0;        // Window only: node id of the aggregate
  std::vector<Span> occurrences;
};

struct DependencyGraph {
  std::vector<StreamId> vertices;
  std::vector<Edge> edges;
};

/// Builds the access graph and rejects cycles of accumulated weight zero over
/// Sync/Offset edges (E020). Hold and Window edges are not part of the check.
Outcome<DependencyGraph> dependency_analysis(const TypedSpecification& typed);

struct MemoryBounds {
  std::map<StreamId, std::size_t> per_stream;  // ring-buffer slots
  std::map<std::size_t, std::size_t> per_window;  // window node id -> panes
};

Outcome<MemoryBounds> memory_analysis(const TypedSpecification& typed,
                                      const DependencyGraph& graph);

/// Inferred types of one declaration, shown inline in an editor.
struct TypeHint {
  StreamId stream;
  std::string name;
  std::string value_type;
  std::string pacing;
  Span span;

  std::string text() const { return name + ": " + value_type + " " + pacing; }
};

struct AnalysisReport {
  std::optional<TypedSpecification> typed;
  std::optional<DependencyGraph> graph;
  std::optional<MemoryBounds> memory;
  std::vector<TypeHint> hints;
  std::vector<Diagnostic> diagnostics;
  std::string source_text;

  /// All phases ran and none reported an error.
  bool ok() const { return memory.has_value() && !has_errors(diagnostics); }
};

/// Runs parse, naming, typing, dependency and memory analysis in order. A
/// phase that reports errors stops the pipeline.
AnalysisReport run_all(std::string_view source);

}  // namespace lola
