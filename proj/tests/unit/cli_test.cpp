#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "lola/export.hpp"
#include "lola/protocol.hpp"
#include "support/fixtures.hpp"

namespace lola {
namespace {

namespace fx = lola::fixtures;

std::string corpus(const std::string& file) { return fx::shell_quote((fx::corpus_dir() / file).string()); }

// Diagnostics name the file as given on the command line.
std::string normalized(std::string text) {
  std::string prefix = fx::corpus_dir().string() + "/";
  for (std::size_t at; (at = text.find(prefix)) != std::string::npos;) text.replace(at, prefix.size(), "corpus/");
  return text;
}

std::string golden(const std::string& name) { return fx::read_file(fx::golden_dir() / name); }

TEST(Cli, AnalyzeAltitude) {
  auto r = fx::run_cli("analyze " + corpus("altitude.lola"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, golden("analyze_altitude.out"));
  EXPECT_EQ(normalized(r.err), golden("analyze_altitude.err"));
}

TEST(Cli, AnalyzeJson) {
  auto r = fx::run_cli("analyze --json " + corpus("latlon_copy_paste.lola"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out), nlohmann::json::parse(golden("analyze_latlon_copy_paste.json")));
}

TEST(Cli, AnalyzeExitCodes) {
  auto bad = fx::run_cli("analyze " + corpus("cycle_rejected.lola"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.err.find("error[E020]"), std::string::npos);
  auto missing = fx::run_cli("analyze " + corpus("does_not_exist.lola"));
  EXPECT_EQ(missing.exit_code, 2);
  EXPECT_NE(missing.err.find("cannot read"), std::string::npos);
  EXPECT_EQ(fx::run_cli("").exit_code, 2);
  EXPECT_EQ(fx::run_cli("frobnicate").exit_code, 2);
}

TEST(Cli, DuplicateNameShowsBothLocations) {
  std::string dir = ::testing::TempDir();
  std::string path = dir + "/dup.lola";
  {
    std::ofstream(path) << "input a : Int64\ninput a : Int64\n";
  }
  auto r = fx::run_cli("analyze " + fx::shell_quote(path));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("error[E001]"), std::string::npos);
  EXPECT_NE(r.err.find("dup.lola:2:7"), std::string::npos);
  EXPECT_NE(r.err.find("dup.lola:1:7"), std::string::npos);
}

TEST(Cli, GraphDot) {
  auto r = fx::run_cli("graph --format dot " + corpus("altitude.lola"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, golden("graph_altitude.dot"));
  std::regex node(R"(^  "[a-z]+:\d+" \[)", std::regex::multiline), edge(R"(" -> ")");
  EXPECT_EQ(std::distance(std::sregex_iterator(r.out.begin(), r.out.end(), node), std::sregex_iterator()), 4);
  EXPECT_EQ(std::distance(std::sregex_iterator(r.out.begin(), r.out.end(), edge), std::sregex_iterator()), 4);
}

TEST(Cli, GraphJsonAndOutputFile) {
  std::string path = ::testing::TempDir() + "/graph.json";
  auto r = fx::run_cli("graph --format json -o " + fx::shell_quote(path) + " " + corpus("offset_typo.lola"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  auto g = nlohmann::json::parse(fx::read_file(path));
  EXPECT_EQ(g, graph_to_json(run_all(fx::read_file(fx::corpus_dir() / "offset_typo.lola"))));
}

TEST(Cli, GraphOfABrokenSpecPrintsNothing) {
  auto r = fx::run_cli("graph " + corpus("cycle_rejected.lola"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, RunFullState) {
  auto r = fx::run_cli("run --verdicts full " + corpus("altitude.lola") + " " + corpus("altitude.csv"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, golden("run_altitude_full.csv"));
}

TEST(Cli, RunTriggersOnly) {
  auto r = fx::run_cli("run --verdicts triggers " + corpus("altitude.lola") + " " + corpus("altitude.csv"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "time,kind,Trigger 0\n1.2,event,Altitude changed too quickly\n");
}

TEST(Cli, RunJsonLines) {
  auto r = fx::run_cli("run --output jsonl " + corpus("engine_health.lola") + " " + corpus("engine_health.csv"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, golden("run_engine_health.jsonl"));
}

TEST(Cli, RunOutputEqualsTheSharedRunner) {
  for (const auto& stem : fx::corpus_runs()) {
    auto c = fx::compile(fx::read_file(fx::corpus_dir() / (stem + ".lola")));
    auto events = fx::load_trace(fx::read_file(fx::corpus_dir() / (stem + ".csv")), *c.mir);
    RunOptions options;
    options.end_time = Rational(15);
    RunOutput expected = execute_run(*c.mir, events, options);
    auto r = fx::run_cli("run --end-time 15 " + corpus(stem + ".lola") + " " + corpus(stem + ".csv"));
    EXPECT_EQ(r.out, expected.text) << stem;
    EXPECT_EQ(r.exit_code, expected.result.fault ? 1 : 0) << stem;
  }
}

TEST(Cli, RunPlotData) {
  std::string path = ::testing::TempDir() + "/plot.json";
  auto r = fx::run_cli("run --plot-data " + fx::shell_quote(path) + " " + corpus("altitude.lola") + " " +
                       corpus("altitude.csv"));
  EXPECT_EQ(r.exit_code, 0);
  auto plot = nlohmann::json::parse(fx::read_file(path));
  EXPECT_EQ(plot["series"].size(), 3u);
  EXPECT_EQ(plot["triggers"][0]["times"], nlohmann::json::parse("[1.2]"));
}

TEST(Cli, RunFaultAndTraceErrors) {
  auto fault = fx::run_cli("run " + corpus("divide_by_zero.lola") + " " + corpus("divide_by_zero.csv"));
  EXPECT_EQ(fault.exit_code, 1);
  EXPECT_EQ(normalized(fault.err), golden("run_divide_by_zero.err"));
  EXPECT_EQ(std::count(fault.out.begin(), fault.out.end(), '\n'), 3);

  std::string path = ::testing::TempDir() + "/backwards.csv";
  {
    std::ofstream(path) << "time,altitude\n2,1\n1,1\n";
  }
  auto backwards = fx::run_cli("run " + corpus("altitude.lola") + " " + fx::shell_quote(path));
  EXPECT_EQ(backwards.exit_code, 1);
  EXPECT_NE(backwards.err.find("error[T004]"), std::string::npos);
  EXPECT_TRUE(backwards.out.empty());

  auto bad_time = fx::run_cli("run --start-time soon " + corpus("altitude.lola") + " " + corpus("altitude.csv"));
  EXPECT_EQ(bad_time.exit_code, 2);
}

TEST(Cli, StepTranscript) {
  auto r = fx::run_cli("step " + corpus("altitude.lola") + " " + corpus("altitude.csv"), golden("step_altitude.in"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, golden("step_altitude.out"));
}

TEST(Cli, ServeAnswersEachLine) {
  std::string spec = fx::read_file(fx::corpus_dir() / "altitude.lola");
  std::string trace = fx::read_file(fx::corpus_dir() / "altitude.csv");
  std::string input = nlohmann::json{{"id", 1}, {"cmd", "analyze"}, {"args", {{"spec", spec}}}}.dump() + "\n" +
                      "garbage\n" +
                      nlohmann::json{{"id", 2}, {"cmd", "session.start"}, {"args", {{"spec", spec}, {"trace", trace}}}}.dump() +
                      "\n" + nlohmann::json{{"id", 3}, {"cmd", "session.step"}, {"args", {{"count", 9}}}}.dump() + "\n" +
                      nlohmann::json{{"id", 4}, {"cmd", "nope"}}.dump() + "\n";
  auto r = fx::run_cli("serve", input);
  EXPECT_EQ(r.exit_code, 0);
  std::vector<nlohmann::json> responses;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) responses.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(responses.size(), 5u);
  EXPECT_EQ(responses[0]["id"], 1);
  EXPECT_TRUE(responses[0]["result"]["ok"]);
  EXPECT_TRUE(responses[1]["id"].is_null());
  EXPECT_EQ(responses[1]["error"]["code"], "malformed-request");
  EXPECT_EQ(responses[2]["result"]["events"], 4);
  EXPECT_EQ(responses[3]["result"]["verdicts"].size(), 5u);
  EXPECT_TRUE(responses[3]["result"]["exhausted"]);
  EXPECT_EQ(responses[4]["error"]["code"], "unknown-command");
}

}  // namespace
}  // namespace lola
