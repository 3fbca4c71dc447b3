#include "lola/protocol.hpp"

#include "lola/export.hpp"

namespace lola {

using nlohmann::json;

RunOutput execute_run(const MirSpec& mir, const std::vector<Event>& events, const RunOptions& options) {
  RunOutput out;
  out.result = run_batch(mir, events, VerdictMode::FullState, options.start_time, options.end_time);
  out.text = write_verdicts(out.result.verdicts, mir, options.format, options.mode);
  return out;
}

namespace {

struct RequestError {
  std::string code;
  std::string message;
  json details = json::object();
};

const json& object_args(const json& args) {
  if (!args.is_object()) throw RequestError{"invalid-arguments", "`args` must be an object"};
  return args;
}

std::string required_string(const json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || !it->is_string())
    throw RequestError{"invalid-arguments", std::string("missing string argument `") + key + "`"};
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    throw RequestError{"invalid-arguments", std::string("argument `") + key + "` must be a string"};
  return it->get<std::string>();
}

std::optional<Rational> optional_time(const json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return std::nullopt;
  std::string text = it->is_string() ? it->get<std::string>() : it->is_number() ? it->dump() : "";
  auto r = Rational::parse_decimal(text);
  if (!r || r->is_negative())
    throw RequestError{"invalid-arguments",
                       std::string("argument `") + key + "` must be a non-negative decimal"};
  return r;
}

VerdictMode mode_arg(const json& args) {
  auto text = optional_string(args, "verdicts");
  if (!text) return VerdictMode::Changed;
  auto mode = parse_verdict_mode(*text);
  if (!mode)
    throw RequestError{"invalid-arguments", "`verdicts` must be one of triggers, changed, full"};
  return *mode;
}

// Analyzes and lowers `spec`, or fails with the analysis diagnostics.
std::pair<AnalysisReport, MirSpec> analyzed(const std::string& spec) {
  AnalysisReport report = run_all(spec);
  if (!report.ok()) {
    throw RequestError{"analysis-failed", "the specification has errors",
                       {{"diagnostics", diagnostics_to_json(report.diagnostics, report.source_text)}}};
  }
  MirSpec mir = lower(report);
  return {std::move(report), std::move(mir)};
}

std::vector<Event> parsed_trace(const std::string& trace, const MirSpec& mir) {
  auto parsed = parse_trace(trace, mir);
  if (!parsed.ok()) {
    throw RequestError{"trace-invalid", "the trace has errors",
                       {{"diagnostics", diagnostics_to_json(parsed.diagnostics, trace)}}};
  }
  return std::move(*parsed.value);
}

json pending_json(const std::optional<Session::Pending>& p) {
  if (!p) return nullptr;
  json j = {{"kind", to_string(p->kind)}, {"time", p->time.to_decimal()}};
  if (p->event_index) j["event"] = *p->event_index;
  return j;
}

}  // namespace

std::string ProtocolHandler::handle_line(std::string_view line) {
  json request = json::parse(line, nullptr, false);
  if (request.is_discarded()) {
    json response = {{"id", nullptr},
                     {"ok", false},
                     {"error", {{"code", "malformed-request"}, {"message", "request is not valid JSON"}}}};
    return response.dump();
  }
  return handle(request).dump();
}

json ProtocolHandler::handle(const json& request) {
  json id = nullptr;
  try {
    if (!request.is_object())
      throw RequestError{"malformed-request", "request must be a JSON object"};
    if (auto it = request.find("id"); it != request.end()) id = *it;
    auto cmd_it = request.find("cmd");
    if (cmd_it == request.end() || !cmd_it->is_string())
      throw RequestError{"malformed-request", "request has no `cmd`"};
    std::string cmd = cmd_it->get<std::string>();
    json args = request.value("args", json::object());

    json result;
    if (cmd == "analyze") {
      result = analyze(object_args(args));
    } else if (cmd == "graph") {
      result = graph(object_args(args));
    } else if (cmd == "run") {
      result = run(object_args(args));
    } else if (cmd == "session.start") {
      result = session_start(object_args(args));
    } else if (cmd == "session.step") {
      result = session_step(object_args(args));
    } else if (cmd == "session.state") {
      result = session_state();
    } else if (cmd == "session.reset") {
      result = session_reset();
    } else {
      throw RequestError{"unknown-command", "unknown command `" + cmd + "`"};
    }
    return {{"id", id}, {"ok", true}, {"result", std::move(result)}};
  } catch (const RequestError& e) {
    json error = {{"code", e.code}, {"message", e.message}};
    error.update(e.details);
    return {{"id", id}, {"ok", false}, {"error", std::move(error)}};
  } catch (const std::exception& e) {
    return {{"id", id},
            {"ok", false},
            {"error", {{"code", "internal-error"}, {"message", e.what()}}}};
  }
}

json ProtocolHandler::analyze(const json& args) {
  AnalysisReport report = run_all(required_string(args, "spec"));
  return analysis_to_json(report);
}

json ProtocolHandler::graph(const json& args) {
  auto [report, mir] = analyzed(required_string(args, "spec"));
  std::string format = optional_string(args, "format").value_or("json");
  std::string view = optional_string(args, "view").value_or("pacing");
  if (view != "pacing" && view != "memory")
    throw RequestError{"invalid-arguments", "`view` must be pacing or memory"};
  if (format == "json") return graph_to_json(report);
  if (format == "dot")
    return {{"dot", graph_to_dot(report, view == "memory" ? GraphView::Memory : GraphView::Pacing)}};
  throw RequestError{"invalid-arguments", "`format` must be json or dot"};
}

json ProtocolHandler::run(const json& args) {
  auto [report, mir] = analyzed(required_string(args, "spec"));
  std::vector<Event> events = parsed_trace(required_string(args, "trace"), mir);
  RunOptions options;
  options.mode = mode_arg(args);
  std::string output = optional_string(args, "output").value_or("csv");
  if (output != "csv" && output != "jsonl")
    throw RequestError{"invalid-arguments", "`output` must be csv or jsonl"};
  options.format = output == "csv" ? OutputFormat::Csv : OutputFormat::JsonLines;
  options.start_time = optional_time(args, "startTime");
  options.end_time = optional_time(args, "endTime");

  RunOutput run = execute_run(mir, events, options);
  json verdicts = json::array();
  for (const auto& v : run.result.verdicts) {
    if (options.mode == VerdictMode::TriggersOnly && v.triggers.empty()) continue;
    verdicts.push_back(verdict_to_json(project_verdict(v, options.mode), mir));
  }
  return {{"output", run.text},
          {"verdicts", std::move(verdicts)},
          {"plot", plot_data(run.result.verdicts, mir)},
          {"fault", run.result.fault ? fault_to_json(*run.result.fault) : json(nullptr)}};
}

json ProtocolHandler::session_start(const json& args) {
  auto [report, mir] = analyzed(required_string(args, "spec"));
  std::vector<Event> events = parsed_trace(required_string(args, "trace"), mir);
  std::size_t count = events.size();
  json columns = mir.value_columns;
  session_.emplace(std::move(mir), std::move(events), mode_arg(args), optional_time(args, "startTime"),
                   optional_time(args, "endTime"));
  return {{"events", count},
          {"columns", std::move(columns)},
          {"pending", pending_json(session_->peek())},
          {"state", session_->state_snapshot()}};
}

json ProtocolHandler::session_step(const json& args) {
  if (!session_) throw RequestError{"no-session", "no session is active; send session.start first"};
  std::size_t count = 1;
  if (auto it = args.find("count"); it != args.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() == 0)
      throw RequestError{"invalid-arguments", "`count` must be a positive integer"};
    count = it->get<std::size_t>();
  }
  json verdicts = json::array();
  bool exhausted = false;
  json fault = nullptr;
  const MirSpec& mir = session_->monitor().mir();
  for (std::size_t i = 0; i < count; ++i) {
    Session::StepResult step = session_->step();
    if (step.fault) fault = fault_to_json(*step.fault);
    if (step.verdict) verdicts.push_back(verdict_to_json(*step.verdict, mir));
    if (step.exhausted || step.fault) {
      exhausted = step.exhausted;
      break;
    }
  }
  return {{"verdicts", std::move(verdicts)},
          {"exhausted", exhausted},
          {"fault", std::move(fault)},
          {"pending", pending_json(session_->peek())},
          {"state", session_->state_snapshot()}};
}

json ProtocolHandler::session_state() {
  if (!session_) throw RequestError{"no-session", "no session is active; send session.start first"};
  return {{"pending", pending_json(session_->peek())}, {"state", session_->state_snapshot()}};
}

json ProtocolHandler::session_reset() {
  if (!session_) throw RequestError{"no-session", "no session is active; send session.start first"};
  session_->reset();
  return {{"pending", pending_json(session_->peek())}, {"state", session_->state_snapshot()}};
}

}  // namespace lola
