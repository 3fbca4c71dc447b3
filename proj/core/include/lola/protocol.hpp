#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lola/analysis.hpp"
#include "lola/interpreter.hpp"
#include "lola/mir.hpp"
#include "lola/trace_io.hpp"

namespace lola {

struct RunOptions {
  VerdictMode mode = VerdictMode::Changed;
  OutputFormat format = OutputFormat::Csv;
  std::optional<Rational> start_time;  // default: first trace timestamp
  std::optional<Rational> end_time;    // default: last processed timestamp
};

struct RunOutput {
  RunResult result;  // verdicts in FullState form
  std::string text;  // verdicts written in the requested mode and format
};

/// Runs a parsed trace and renders the verdicts. Shared by the CLI and the
/// protocol so both produce byte-identical output.
RunOutput execute_run(const MirSpec& mir, const std::vector<Event>& events, const RunOptions& options);

/// Newline-delimited JSON request/response handler. Requests have the form
/// `{"id":n,"cmd":"...","args":{...}}`; responses are `{"id":n,"ok":true,
/// "result":...}` or `{"id":n,"ok":false,"error":{"code","message",...}}`.
///
/// Commands: analyze, graph, run, session.start, session.step,
/// session.state, session.reset. At most one session is live at a time;
/// session.start replaces it.
class ProtocolHandler {
 public:
  /// Handles one request line and returns the response without a trailing
  /// newline. Never throws.
  std::string handle_line(std::string_view line);

  nlohmann::json handle(const nlohmann::json& request);

  bool has_session() const { return session_.has_value(); }

 private:
  nlohmann::json analyze(const nlohmann::json& args);
  nlohmann::json graph(const nlohmann::json& args);
  nlohmann::json run(const nlohmann::json& args);
  nlohmann::json session_start(const nlohmann::json& args);
  nlohmann::json session_step(const nlohmann::json& args);
  nlohmann::json session_state();
  nlohmann::json session_reset();

  std::optional<Session> session_;
};

}  // namespace lola
