#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lola/analysis.hpp"
#include "lola/interpreter.hpp"
#include "lola/mir.hpp"

namespace lola {

/// Parses a CSV trace: a `time` column (decimal seconds) plus one column per
/// input. An empty cell marks the input as absent in that event. Diagnostic
/// spans are byte ranges into `csv`.
///
/// Cells parse by the input's type: decimal numbers, `true`/`false`, raw or
/// double-quoted text, and JSON arrays for tuples.
Outcome<std::vector<Event>> parse_trace(std::string_view csv, const MirSpec& mir);

/// Writes events in the format parse_trace accepts. Timestamps that are not
/// finite decimals are rounded to 18 significant digits.
std::string write_trace(const std::vector<Event>& events, const MirSpec& mir);

enum class OutputFormat : std::uint8_t { Csv, JsonLines };

/// CSV columns: `time,kind`, the value columns (omitted in TriggersOnly
/// mode), then one `Trigger k` column per trigger holding its message when it
/// fired. In TriggersOnly mode only cycles with a fired trigger are written.
/// Verdicts are first restricted to `mode` with project_verdict.
std::string write_verdicts(const std::vector<Verdict>& verdicts, const MirSpec& mir,
                           OutputFormat format, VerdictMode mode);

/// `{"series":[{"stream":..,"points":[[t,v],..]}],"triggers":[{"index":..,
/// "message":..,"times":[..]}]}` over the fresh values of every scalar
/// numeric or Bool value column. Bool plots as 0/1.
nlohmann::json plot_data(const std::vector<Verdict>& verdicts, const MirSpec& mir);

/// Quotes a CSV field if it contains a separator, quote or line break.
std::string csv_field(std::string_view text);

}  // namespace lola
