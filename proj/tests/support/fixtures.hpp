#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lola/analysis.hpp"
#include "lola/interpreter.hpp"
#include "lola/mir.hpp"

namespace lola::fixtures {

std::filesystem::path corpus_dir();
std::filesystem::path golden_dir();

std::string read_file(const std::filesystem::path& path);

/// Names of corpus specifications (file stem) that have a trace next to
/// them, sorted.
std::vector<std::string> corpus_runs();

/// Every corpus specification stem, sorted.
std::vector<std::string> corpus_specs();

/// Analysis report plus lowered MIR; `mir` is empty when analysis failed.
struct Compiled {
  AnalysisReport report;
  std::optional<MirSpec> mir;
};

Compiled compile(const std::string& source);

/// Parses `csv` against `mir` and fails loudly on trace diagnostics.
std::vector<Event> load_trace(const std::string& csv, const MirSpec& mir);

/// Diagnostic codes in report order.
std::vector<std::string> codes_of(const std::vector<Diagnostic>& diagnostics);

bool has_code(const std::vector<Diagnostic>& diagnostics, const std::string& code);

/// The hint text for a stream name, e.g. "altitude: Float64 @altitude".
std::optional<std::string> hint_for(const AnalysisReport& report, const std::string& name);

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the command-line tool with `args` (already shell-quoted) and
/// optional stdin text. Only available when the tool is built.
bool cli_available();
CommandResult run_cli(const std::string& args, const std::string& stdin_text = "");

std::string shell_quote(const std::string& text);

}  // namespace lola::fixtures
