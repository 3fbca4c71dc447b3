#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lola/analysis.hpp"
#include "lola/diagnostic.hpp"

namespace lola {

/// `{"begin","end","startLine","startColumn","endLine","endColumn"}`; lines
/// and columns are 1-based, columns count code points.
nlohmann::json span_to_json(std::string_view source, Span span);

nlohmann::json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics,
                                   std::string_view source);

nlohmann::json hints_to_json(const std::vector<TypeHint>& hints, std::string_view source);

/// `{"ok":..,"diagnostics":[..],"hints":[..]}`, the result of `analyze`.
nlohmann::json analysis_to_json(const AnalysisReport& report);

enum class GraphView : std::uint8_t { Pacing, Memory };

/// `p:<freq>`, `e:<formula>` or `c`; equal keys mean equal pacing types.
std::string pacing_class(const TypedSpecification& typed, StreamId id);

/// Node id used by graph exports: `in:k`, `out:k`, `trig:k`.
std::string node_id(StreamId id);

/// Graph document (version 1). Requires a report with a dependency graph and
/// memory bounds.
nlohmann::json graph_to_json(const AnalysisReport& report);

/// Graphviz rendering. Nodes carry `rtlola_pacing` and `rtlola_memory`,
/// edges carry `penwidth` equal to the thickness key. `view` selects the
/// node coloring.
std::string graph_to_dot(const AnalysisReport& report, GraphView view);

/// Human-readable diagnostics in the style of compiler error output, with
/// the offending source lines underlined.
std::string render_diagnostics(const std::vector<Diagnostic>& diagnostics, std::string_view source,
                               std::string_view file_name);

}  // namespace lola
