#include <gtest/gtest.h>

#include <sstream>

#include "lola/trace_io.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace lola {
namespace {

namespace fx = lola::fixtures;

MirSpec mir_of(const std::string& src) {
  auto c = fx::compile(src);
  EXPECT_TRUE(c.mir) << src;
  return *c.mir;
}

const char* kTwoInputs = "input a : Int64\ninput b : Float64\noutput s := a + 1\n";

std::vector<std::string> trace_codes(const std::string& csv, const MirSpec& mir) {
  return fx::codes_of(parse_trace(csv, mir).diagnostics);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(TraceParse, PartialRowsLeaveInputsAbsent) {
  MirSpec mir = mir_of(kTwoInputs);
  auto r = parse_trace("time,a,b\n3.0,7,\n3.5,,1.5\n", mir);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.value->size(), 2u);
  const Event& first = (*r.value)[0];
  EXPECT_EQ(first.time, Rational(3));
  EXPECT_EQ(first.inputs[0], Value::of_int(7));
  EXPECT_FALSE(first.inputs[1]);
  EXPECT_EQ((*r.value)[1].inputs[1], Value::of_float(1.5));
}

TEST(TraceParse, ColumnsMayAppearInAnyOrder) {
  MirSpec mir = mir_of(kTwoInputs);
  auto r = parse_trace("b,time,a\n2.5,1,4\n", mir);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ((*r.value)[0].inputs[0], Value::of_int(4));
  EXPECT_EQ((*r.value)[0].inputs[1], Value::of_float(2.5));
}

TEST(TraceParse, ErrorCodes) {
  MirSpec mir = mir_of(kTwoInputs);
  EXPECT_EQ(trace_codes("time,a,b,zz\n0,1,1.0,3\n", mir), std::vector<std::string>{"T001"});
  EXPECT_EQ(trace_codes("a,b\n1,1.0\n", mir), std::vector<std::string>{"T002"});
  EXPECT_EQ(trace_codes("time,a\n0,1\n", mir), std::vector<std::string>{"T002"});
  EXPECT_EQ(trace_codes("time,a,b\n0,x,1.0\n", mir), std::vector<std::string>{"T003"});
  EXPECT_EQ(trace_codes("time,a,b\nsoon,1,1.0\n", mir), std::vector<std::string>{"T003"});
  EXPECT_EQ(trace_codes("time,a,b\n0,1.5,1.0\n", mir), std::vector<std::string>{"T003"});
  EXPECT_EQ(trace_codes("time,a,b\n2,1,1.0\n1,1,1.0\n", mir), std::vector<std::string>{"T004"});
  EXPECT_EQ(trace_codes("time,a,b\n0,,\n", mir), std::vector<std::string>{"T005"});
}

TEST(TraceParse, SpansPointIntoTheCsv) {
  MirSpec mir = mir_of(kTwoInputs);
  std::string csv = "time,a,b\n0,1,1.0\n1,bad,2.0\n";
  auto r = parse_trace(csv, mir);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  const Span& s = r.diagnostics[0].span;
  EXPECT_EQ(csv.substr(s.begin, s.end - s.begin), "bad");
  EXPECT_EQ(resolve_span(csv, s).start.line, 3u);
}

TEST(TraceParse, TypedCells) {
  MirSpec mir = mir_of("input f : Bool\ninput s : String\ninput u : UInt64\ninput t : (Int64, String)\n"
                       "output o := u + 1\n");
  auto r = parse_trace("time,f,s,u,t\n0,true,\"x, y\",5,\"[1,\"\"k\"\"]\"\n", mir);
  ASSERT_TRUE(r.ok()) << fx::codes_of(r.diagnostics).size();
  const Event& e = (*r.value)[0];
  EXPECT_EQ(e.inputs[0], Value::of_bool(true));
  EXPECT_EQ(e.inputs[1], Value::of_string("x, y"));
  EXPECT_EQ(e.inputs[2], Value::of_uint(5));
  EXPECT_EQ(e.inputs[3], Value::of_tuple({Value::of_int(1), Value::of_string("k")}));
  EXPECT_EQ(trace_codes("time,f,s,u,t\n0,,,-1,\n", mir), std::vector<std::string>{"T003"});
}

// write_trace is checked against parse_trace on random events.
TEST(TraceWrite, RoundTripsRandomEvents) {
  MirSpec mir = mir_of("input i : Int64\ninput u : UInt64\ninput f : Float64\ninput b : Bool\ninput s : String\n"
                       "output o := i + 1\n");
  std::vector<ValueType> types = {ValueType::int64(), ValueType::uint64(), ValueType::float64(), ValueType::boolean(),
                                  ValueType::string()};
  gen::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto events = gen::random_events(rng, types, 20, Rational(trial, 4));
    std::string csv = write_trace(events, mir);
    auto back = parse_trace(csv, mir);
    ASSERT_TRUE(back.ok()) << csv << (back.diagnostics.empty() ? "" : back.diagnostics[0].message);
    EXPECT_EQ(*back.value, events) << csv;
  }
}

TEST(TraceWrite, RepeatingDecimalTimesStayReadable) {
  MirSpec mir = mir_of("input i : Int64\noutput o := i + 1\n");
  std::vector<Event> events;
  for (int k = 0; k < 40; ++k) events.push_back(Event{Rational(1, 3) + Rational(k * 7, 3), {Value::of_int(k)}});
  auto back = parse_trace(write_trace(events, mir), mir);
  ASSERT_TRUE(back.ok());
  ASSERT_EQ(back.value->size(), events.size());
  for (std::size_t k = 0; k < events.size(); ++k)
    EXPECT_LT(std::abs(((*back.value)[k].time - events[k].time).to_double()), 1e-15);
}

TEST(CsvField, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

class VerdictOutput : public ::testing::Test {
 protected:
  void SetUp() override {
    mir_ = mir_of(fx::read_file(fx::corpus_dir() / "altitude.lola"));
    auto events = fx::load_trace(fx::read_file(fx::corpus_dir() / "altitude.csv"), mir_);
    verdicts_ = run_batch(mir_, events, VerdictMode::FullState).verdicts;
  }
  MirSpec mir_;
  std::vector<Verdict> verdicts_;
};

TEST_F(VerdictOutput, TriggersOnlyCsvHasOneLinePerFiring) {
  auto out = lines(write_verdicts(verdicts_, mir_, OutputFormat::Csv, VerdictMode::TriggersOnly));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], "time,kind,Trigger 0");
  EXPECT_EQ(out[1], "1.2,event,Altitude changed too quickly");
}

TEST_F(VerdictOutput, FullStateCsvHasEveryColumn) {
  auto out = lines(write_verdicts(verdicts_, mir_, OutputFormat::Csv, VerdictMode::FullState));
  EXPECT_EQ(out[0], "time,kind,altitude,avg_altitude,altitude_diff,Trigger 0");
  EXPECT_EQ(out.size(), 1 + verdicts_.size());
  EXPECT_EQ(out[1], "0.0,event,100.0,,0.0,");
}

TEST_F(VerdictOutput, JsonLinesOnePerVerdict) {
  auto out = lines(write_verdicts(verdicts_, mir_, OutputFormat::JsonLines, VerdictMode::Changed));
  ASSERT_EQ(out.size(), verdicts_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto j = nlohmann::json::parse(out[i]);
    EXPECT_EQ(j, verdict_to_json(project_verdict(verdicts_[i], VerdictMode::Changed), mir_));
  }
}

TEST_F(VerdictOutput, EmptyVerdictList) {
  EXPECT_EQ(lines(write_verdicts({}, mir_, OutputFormat::Csv, VerdictMode::TriggersOnly)),
            std::vector<std::string>{"time,kind,Trigger 0"});
  EXPECT_EQ(write_verdicts({}, mir_, OutputFormat::JsonLines, VerdictMode::FullState), "");
}

TEST_F(VerdictOutput, PlotDataSeriesAndTriggers) {
  auto plot = plot_data(verdicts_, mir_);
  ASSERT_EQ(plot["series"].size(), 3u);
  EXPECT_EQ(plot["series"][1]["stream"], "avg_altitude");
  // avg_altitude is fresh only at the 1 s deadline.
  EXPECT_EQ(plot["series"][1]["points"], nlohmann::json::parse("[[1.0, 100.0]]"));
  ASSERT_EQ(plot["triggers"].size(), 1u);
  EXPECT_EQ(plot["triggers"][0]["times"], nlohmann::json::parse("[1.2]"));
}

TEST(PlotData, SkipsNonNumericStreamsAndPlotsBoolAsNumber) {
  MirSpec mir = mir_of("input s : String\ninput a : Int64\noutput b := a > 2\n");
  auto events = fx::load_trace("time,s,a\n0,x,1\n1,y,3\n", mir);
  auto plot = plot_data(run_batch(mir, events, VerdictMode::FullState).verdicts, mir);
  std::vector<std::string> names;
  for (const auto& s : plot["series"]) names.push_back(s["stream"]);
  EXPECT_EQ(names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(plot["series"][1]["points"], nlohmann::json::parse("[[0.0, 0], [1.0, 1]]"));
}

}  // namespace
}  // namespace lola
