#include "support/fixtures.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lola/trace_io.hpp"

namespace lola::fixtures {

namespace fs = std::filesystem;

fs::path corpus_dir() { return LOLA_CORPUS_DIR; }
fs::path golden_dir() { return LOLA_GOLDEN_DIR; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> corpus_specs() {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(corpus_dir()))
    if (entry.path().extension() == ".lola") out.push_back(entry.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> corpus_runs() {
  std::vector<std::string> out;
  for (const auto& stem : corpus_specs())
    if (fs::exists(corpus_dir() / (stem + ".csv"))) out.push_back(stem);
  return out;
}

Compiled compile(const std::string& source) {
  Compiled c;
  c.report = run_all(source);
  if (c.report.ok()) c.mir = lower(c.report);
  return c;
}

std::vector<Event> load_trace(const std::string& csv, const MirSpec& mir) {
  auto parsed = parse_trace(csv, mir);
  if (!parsed.ok()) {
    std::string msg = "trace rejected:";
    for (const auto& d : parsed.diagnostics) msg += " " + d.code + " " + d.message + ";";
    throw std::runtime_error(msg);
  }
  return std::move(*parsed.value);
}

std::vector<std::string> codes_of(const std::vector<Diagnostic>& diagnostics) {
  std::vector<std::string> out;
  for (const auto& d : diagnostics) out.push_back(d.code);
  return out;
}

bool has_code(const std::vector<Diagnostic>& diagnostics, const std::string& code) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

std::optional<std::string> hint_for(const AnalysisReport& report, const std::string& name) {
  for (const auto& h : report.hints)
    if (h.name == name) return h.text();
  return std::nullopt;
}

bool cli_available() {
#ifdef LOLA_CLI_PATH
  return true;
#else
  return false;
#endif
}

std::string shell_quote(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_file(const char* tag) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("lola-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + tag);
}

}  // namespace

CommandResult run_cli(const std::string& args, const std::string& stdin_text) {
#ifdef LOLA_CLI_PATH
  fs::path in = scratch_file(".in");
  fs::path out = scratch_file(".out");
  fs::path err = scratch_file(".err");
  {
    std::ofstream f(in, std::ios::binary);
    f << stdin_text;
  }
  std::string cmd = shell_quote(LOLA_CLI_PATH) + " " + args + " <" + shell_quote(in.string()) +
                    " >" + shell_quote(out.string()) + " 2>" + shell_quote(err.string());
  int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(in);
  fs::remove(out);
  fs::remove(err);
  return r;
#else
  (void)args;
  (void)stdin_text;
  throw std::logic_error("the command-line tool is not part of this build");
#endif
}

}  // namespace lola::fixtures
