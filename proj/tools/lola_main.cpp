// Command-line front end: analyze, graph, run, step and serve.
//
// Exit codes: 0 success, 1 the specification, trace or run reported an
// error, 2 the input could not be read or the command line is invalid.

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lola/analysis.hpp"
#include "lola/export.hpp"
#include "lola/interpreter.hpp"
#include "lola/mir.hpp"
#include "lola/protocol.hpp"
#include "lola/trace_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kIoFailure = 2;

struct IoError {
  std::string message;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError{"cannot read `" + path + "`"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError{"cannot write `" + path + "`"};
}

std::optional<lola::Rational> parse_time_flag(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  auto r = lola::Rational::parse_decimal(text);
  if (!r || r->is_negative())
    throw CLI::ValidationError(flag, "expected a non-negative decimal number of seconds");
  return r;
}

std::string display_name(const std::string& path) { return path == "-" ? "<stdin>" : path; }

// Analyzes a specification file, printing diagnostics to stderr. Returns
// the report only if it is error-free.
std::optional<lola::AnalysisReport> analyze_or_report(const std::string& path) {
  std::string source = read_input(path);
  lola::AnalysisReport report = lola::run_all(source);
  std::cerr << lola::render_diagnostics(report.diagnostics, report.source_text, display_name(path));
  if (!report.ok()) return std::nullopt;
  return report;
}

// --- analyze -----------------------------------------------------------------

int cmd_analyze(const std::string& path, bool json) {
  std::string source = read_input(path);
  lola::AnalysisReport report = lola::run_all(source);
  if (json) {
    std::cout << lola::analysis_to_json(report).dump(2) << '\n';
  } else {
    std::cerr << lola::render_diagnostics(report.diagnostics, report.source_text, display_name(path));
    for (const auto& h : report.hints) std::cout << h.text() << '\n';
  }
  return report.ok() ? kOk : kDiagnostics;
}

// --- graph -------------------------------------------------------------------

int cmd_graph(const std::string& path, const std::string& format, const std::string& view,
              const std::string& out) {
  auto report = analyze_or_report(path);
  if (!report) return kDiagnostics;
  if (format == "json") {
    write_output(out, lola::graph_to_json(*report).dump(2) + "\n");
  } else {
    write_output(out, lola::graph_to_dot(*report, view == "memory" ? lola::GraphView::Memory
                                                                   : lola::GraphView::Pacing));
  }
  return kOk;
}

// --- run -----------------------------------------------------------------------

struct Loaded {
  lola::AnalysisReport report;
  lola::MirSpec mir;
  std::vector<lola::Event> events;
};

std::optional<Loaded> load(const std::string& spec_path, const std::string& trace_path) {
  auto report = analyze_or_report(spec_path);
  if (!report) return std::nullopt;
  lola::MirSpec mir = lola::lower(*report);
  std::string trace = read_input(trace_path);
  auto parsed = lola::parse_trace(trace, mir);
  if (!parsed.ok()) {
    std::cerr << lola::render_diagnostics(parsed.diagnostics, trace, display_name(trace_path));
    return std::nullopt;
  }
  return Loaded{std::move(*report), std::move(mir), std::move(*parsed.value)};
}

void report_fault(const lola::RunFault& f) {
  std::cerr << "error[" << f.code << "]: " << f.message;
  if (!f.stream.empty()) std::cerr << " while evaluating `" << f.stream << "`";
  std::cerr << " (cycle " << f.cycle << ", t=" << f.time.to_decimal() << ")\n";
}

int cmd_run(const std::string& spec_path, const std::string& trace_path, const std::string& verdicts,
            const std::string& output, const std::string& plot_path, const std::string& start,
            const std::string& end) {
  lola::RunOptions options;
  options.mode = *lola::parse_verdict_mode(verdicts);
  options.format = output == "jsonl" ? lola::OutputFormat::JsonLines : lola::OutputFormat::Csv;
  options.start_time = parse_time_flag(start, "--start-time");
  options.end_time = parse_time_flag(end, "--end-time");

  auto loaded = load(spec_path, trace_path);
  if (!loaded) return kDiagnostics;
  lola::RunOutput run = lola::execute_run(loaded->mir, loaded->events, options);
  std::cout << run.text;
  if (!plot_path.empty())
    write_output(plot_path, lola::plot_data(run.result.verdicts, loaded->mir).dump() + "\n");
  if (run.result.fault) {
    report_fault(*run.result.fault);
    return kDiagnostics;
  }
  return kOk;
}

// --- step ----------------------------------------------------------------------

std::string verdict_line(const lola::Verdict& v, const lola::MirSpec& mir) {
  std::string out = "cycle " + std::to_string(v.cycle) + "  " + lola::to_string(v.kind) +
                    "  t=" + v.time.to_decimal();
  for (std::size_t c = 0; c < v.values.size(); ++c) {
    if (v.fresh[c] && v.values[c]) out += "  " + mir.value_columns[c] + "=" + v.values[c]->to_string();
  }
  for (const auto& t : v.triggers)
    out += "\n  ! Trigger " + std::to_string(t.index) + ": " + t.message;
  return out;
}

void print_state(const nlohmann::json& s) {
  std::cout << "time " << s["time"].get<std::string>() << ", next cycle " << s["cycle"] << '\n';
  std::cout << "streams:\n";
  for (const auto& st : s["streams"]) {
    std::cout << "  " << st["name"].get<std::string>() << " [";
    bool first = true;
    for (const auto& slot : st["buffer"]) {
      if (!first) std::cout << ", ";
      first = false;
      std::cout << "#" << slot["seq"] << " " << slot["value"].dump();
    }
    std::cout << "] capacity " << st["capacity"] << '\n';
  }
  std::cout << "deadlines:\n";
  if (s["deadlines"].empty()) std::cout << "  (none)\n";
  for (const auto& d : s["deadlines"]) {
    std::cout << "  " << d["due"].get<std::string>() << " " << d["frequency"].get<std::string>();
    for (const auto& m : d["streams"]) std::cout << " " << m.get<std::string>();
    std::cout << '\n';
  }
  if (!s["windows"].empty()) {
    std::cout << "windows:\n";
    for (const auto& w : s["windows"]) {
      std::uint64_t values = 0;
      for (const auto& p : w["panes"]) values += p["count"].get<std::uint64_t>();
      std::cout << "  " << w["accessor"].get<std::string>() << " <- " << w["target"].get<std::string>()
                << " (" << w["aggregation"].get<std::string>() << " over "
                << w["duration"].get<std::string>() << "): " << w["panes"].size() << " closed pane(s) with "
                << values << " value(s), open pane since " << w["open"]["begin"].get<std::string>()
                << " with " << w["open"]["count"] << " value(s)\n";
    }
  }
}

int cmd_step(const std::string& spec_path, const std::string& trace_path, const std::string& verdicts,
             const std::string& start, const std::string& end) {
  auto start_time = parse_time_flag(start, "--start-time");
  auto end_time = parse_time_flag(end, "--end-time");
  auto loaded = load(spec_path, trace_path);
  if (!loaded) return kDiagnostics;
  lola::Session session(loaded->mir, loaded->events, *lola::parse_verdict_mode(verdicts), start_time,
                        end_time);
  bool interactive = isatty(STDIN_FILENO) != 0;
  std::string line;
  while (true) {
    if (interactive) std::cout << "(lola) " << std::flush;
    if (!std::getline(std::cin, line)) break;
    std::istringstream words(line);
    std::string cmd;
    words >> cmd;
    if (cmd.empty()) continue;
    if (cmd == "quit" || cmd == "exit") break;
    if (cmd == "help") {
      std::cout << "commands: step [n], peek, state, reset, quit\n";
    } else if (cmd == "step") {
      long n = 1;
      if (!(words >> n)) n = 1;
      if (n < 1) {
        std::cout << "step count must be positive\n";
        continue;
      }
      for (long i = 0; i < n; ++i) {
        auto r = session.step();
        if (r.verdict) std::cout << verdict_line(*r.verdict, loaded->mir) << '\n';
        if (r.fault) {
          std::cout << "fault " << r.fault->code << ": " << r.fault->message << '\n';
          break;
        }
        if (r.exhausted) {
          std::cout << "trace exhausted\n";
          break;
        }
      }
    } else if (cmd == "peek") {
      auto p = session.peek();
      if (!p) {
        std::cout << "nothing pending\n";
      } else if (p->kind == lola::VerdictKind::Periodic) {
        std::cout << "next: deadline at " << p->time.to_decimal() << '\n';
      } else {
        std::cout << "next: event at " << p->time.to_decimal() << " (trace row " << *p->event_index + 1
                  << ")\n";
      }
    } else if (cmd == "state") {
      print_state(session.state_snapshot());
    } else if (cmd == "reset") {
      session.reset();
      std::cout << "session reset\n";
    } else {
      std::cout << "unknown command `" << cmd << "`; try help\n";
    }
    std::cout << std::flush;
  }
  return kOk;
}

// --- serve ---------------------------------------------------------------------

int cmd_serve() {
  lola::ProtocolHandler handler;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::cout << handler.handle_line(line) << '\n' << std::flush;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lola: analyze, visualize and run stream specifications"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string trace_path;
  bool json = false;
  std::string format = "json";
  std::string view = "pacing";
  std::string out;
  std::string verdicts = "changed";
  std::string output = "csv";
  std::string plot_path;
  std::string start;
  std::string end;

  auto* analyze = app.add_subcommand("analyze", "Check a specification and print inferred types");
  analyze->add_option("spec", spec_path, "Specification file, or - for stdin")->required();
  analyze->add_flag("--json", json, "Emit diagnostics and hints as JSON");

  auto* graph = app.add_subcommand("graph", "Export the dependency graph");
  graph->add_option("spec", spec_path, "Specification file")->required();
  graph->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  graph->add_option("--view", view, "Node coloring for dot")->check(CLI::IsMember({"pacing", "memory"}));
  graph->add_option("-o,--output", out, "Output file (default stdout)");

  auto* run = app.add_subcommand("run", "Run a specification over a CSV trace");
  run->add_option("spec", spec_path, "Specification file")->required();
  run->add_option("trace", trace_path, "CSV trace file")->required();
  run->add_option("--verdicts", verdicts, "triggers, changed or full")
      ->check(CLI::IsMember({"triggers", "changed", "full"}));
  run->add_option("--output", output, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--plot-data", plot_path, "Write plot JSON to this file");
  run->add_option("--start-time", start, "Monitor start time in seconds (default: first record)");
  run->add_option("--end-time", end, "Process deadlines up to this time after the last record");

  auto* step = app.add_subcommand("step", "Step through a trace interactively");
  step->add_option("spec", spec_path, "Specification file")->required();
  step->add_option("trace", trace_path, "CSV trace file")->required();
  step->add_option("--verdicts", verdicts, "triggers, changed or full")
      ->check(CLI::IsMember({"triggers", "changed", "full"}));
  step->add_option("--start-time", start, "Monitor start time in seconds (default: first record)");
  step->add_option("--end-time", end, "Process deadlines up to this time after the last record");

  auto* serve = app.add_subcommand("serve", "Answer JSON requests on stdin, one per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIoFailure;
  }

  try {
    if (*analyze) return cmd_analyze(spec_path, json);
    if (*graph) return cmd_graph(spec_path, format, view, out);
    if (*run) return cmd_run(spec_path, trace_path, verdicts, output, plot_path, start, end);
    if (*step) return cmd_step(spec_path, trace_path, verdicts, start, end);
    if (*serve) return cmd_serve();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kIoFailure;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kOk;
}
