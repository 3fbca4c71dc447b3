#include <gtest/gtest.h>

#include "lola/interpreter.hpp"
#include "lola/trace_io.hpp"
#include "support/fixtures.hpp"

namespace lola {
namespace {

namespace fx = lola::fixtures;

MirSpec mir_of(const std::string& src) {
  auto c = fx::compile(src);
  EXPECT_TRUE(c.mir) << src;
  return c.mir ? *c.mir : MirSpec{};
}

MirSpec corpus_mir(const std::string& stem) { return mir_of(fx::read_file(fx::corpus_dir() / (stem + ".lola"))); }

std::vector<Event> corpus_events(const std::string& stem, const MirSpec& mir) {
  return fx::load_trace(fx::read_file(fx::corpus_dir() / (stem + ".csv")), mir);
}

Event ev(Rational t, std::vector<std::optional<Value>> inputs) { return Event{t, std::move(inputs)}; }

std::optional<Value> column(const Verdict& v, const MirSpec& mir, const std::string& name) {
  for (std::size_t i = 0; i < mir.value_columns.size(); ++i)
    if (mir.value_columns[i] == name) return v.values[i];
  ADD_FAILURE() << "no column " << name;
  return std::nullopt;
}

bool fresh(const Verdict& v, const MirSpec& mir, const std::string& name) {
  for (std::size_t i = 0; i < mir.value_columns.size(); ++i)
    if (mir.value_columns[i] == name) return v.fresh[i];
  return false;
}

TEST(Monitor, DeadlinesFollowEachFrequency) {
  MirSpec mir = mir_of("output fast @2Hz := 1\noutput slow @1Hz := 2\n");
  Monitor m(mir, VerdictMode::FullState, Rational(0));
  ASSERT_EQ(m.next_deadline(), Rational(1, 2));
  Verdict first = m.run_deadline_cycle();
  EXPECT_EQ(first.kind, VerdictKind::Periodic);
  EXPECT_EQ(first.time, Rational(1, 2));
  EXPECT_TRUE(fresh(first, mir, "fast"));
  EXPECT_FALSE(fresh(first, mir, "slow"));
  ASSERT_EQ(m.next_deadline(), Rational(1));
  // Both groups are due at 1.0 and share one verdict.
  Verdict second = m.run_deadline_cycle();
  EXPECT_TRUE(fresh(second, mir, "fast"));
  EXPECT_TRUE(fresh(second, mir, "slow"));
  EXPECT_EQ(m.next_deadline(), Rational(3, 2));
}

TEST(Monitor, EventOnlySpecificationsHaveNoDeadlines) {
  Monitor m(mir_of("input a : Int64\noutput b := a + 1\n"), VerdictMode::FullState, Rational(0));
  EXPECT_FALSE(m.next_deadline());
  EXPECT_TRUE(m.finish(Rational(100)).empty());
}

TEST(Monitor, FinishProcessesDeadlinesUpToTheEndTime) {
  MirSpec mir = mir_of("input a : Float64\noutput p @1Hz := a.hold(or: 0.0)\n");
  std::vector<Event> events;
  for (int i = 0; i <= 11; ++i) events.push_back(ev(Rational(i, 2), {Value::of_float(i)}));
  RunResult plain = run_batch(mir, events, VerdictMode::FullState, Rational(0));
  ASSERT_FALSE(plain.fault);
  EXPECT_EQ(plain.verdicts.back().time, Rational(11, 2));
  EXPECT_EQ(plain.verdicts.size(), 12u + 5u);

  RunResult extended = run_batch(mir, events, VerdictMode::FullState, Rational(0), Rational(7));
  ASSERT_EQ(extended.verdicts.size(), plain.verdicts.size() + 2);
  const Verdict& at6 = extended.verdicts[extended.verdicts.size() - 2];
  const Verdict& at7 = extended.verdicts.back();
  EXPECT_EQ(at6.time, Rational(6));
  EXPECT_EQ(at7.time, Rational(7));
  EXPECT_EQ(at7.kind, VerdictKind::Periodic);
  EXPECT_EQ(column(at7, mir, "p"), Value::of_float(11));
}

TEST(Monitor, DeadlineRunsBeforeEventAtTheSameInstant) {
  MirSpec mir = mir_of("input a : Int64\noutput p @1Hz := a.hold(or: -1)\n");
  Monitor m(mir, VerdictMode::FullState, Rational(0));
  auto verdicts = m.accept_event(ev(Rational(1), {Value::of_int(5)}));
  ASSERT_EQ(verdicts.size(), 2u);
  EXPECT_EQ(verdicts[0].kind, VerdictKind::Periodic);
  EXPECT_EQ(column(verdicts[0], mir, "p"), Value::of_int(-1));
  EXPECT_EQ(verdicts[1].kind, VerdictKind::Event);
}

TEST(Monitor, PartialEventSkipsConjunctiveStreams) {
  MirSpec mir = corpus_mir("latlon_copy_paste");
  Monitor m(mir, VerdictMode::FullState, Rational(0));
  m.accept_event(ev(Rational(0), {Value::of_float(49.25), Value::of_float(7.04)}));
  auto only_lon = m.accept_event(ev(Rational(1), {std::nullopt, Value::of_float(7.9)}));
  ASSERT_EQ(only_lon.size(), 1u);
  EXPECT_FALSE(fresh(only_lon[0], mir, "check_lat"));
  EXPECT_FALSE(fresh(only_lon[0], mir, "check_lon"));
  EXPECT_TRUE(fresh(only_lon[0], mir, "lon"));
}

TEST(Monitor, OffsetDefaultAppliesUntilHistoryExists) {
  MirSpec mir = mir_of("input a : Int64\noutput d := a - a.offset(by: -2, or: 100)\n");
  std::vector<Event> events;
  for (int i = 1; i <= 4; ++i) events.push_back(ev(Rational(i), {Value::of_int(i * i)}));
  RunResult r = run_batch(mir, events, VerdictMode::FullState);
  ASSERT_EQ(r.verdicts.size(), 4u);
  std::vector<std::int64_t> got;
  for (const auto& v : r.verdicts) got.push_back(column(v, mir, "d")->as_int());
  EXPECT_EQ(got, (std::vector<std::int64_t>{1 - 100, 4 - 100, 9 - 1, 16 - 4}));
}

TEST(Monitor, WindowCoversTheHalfOpenIntervalBeforeTheDeadline) {
  MirSpec mir = mir_of("input a : Int64\noutput c @1Hz := a.aggregate(over: 2s, using: count)\n"
                       "output s @1Hz := a.aggregate(over: 2s, using: sum)\n");
  std::vector<Event> events;
  for (int i = 1; i <= 5; ++i) events.push_back(ev(Rational(i, 2), {Value::of_int(i)}));
  RunResult r = run_batch(mir, events, VerdictMode::FullState, Rational(0), Rational(3));
  std::vector<std::pair<std::uint64_t, std::int64_t>> periodic;
  for (const auto& v : r.verdicts)
    if (v.kind == VerdictKind::Periodic)
      periodic.emplace_back(column(v, mir, "c")->as_uint(), column(v, mir, "s")->as_int());
  // t=1: {0.5}; t=2: {0.5, 1.0, 1.5}; t=3: {1.0, 1.5, 2.0, 2.5}
  EXPECT_EQ(periodic, (std::vector<std::pair<std::uint64_t, std::int64_t>>{{1, 1}, {3, 6}, {4, 14}}));
}

TEST(Monitor, ShortCircuitGuardsDivision) {
  MirSpec mir = mir_of("input a : Int64\noutput g := a == 0 || 10 / a > 1\n"
                       "output h := if a == 0 then 0 else 10 / a\n");
  RunResult r = run_batch(mir, {ev(Rational(0), {Value::of_int(0)})}, VerdictMode::FullState);
  EXPECT_FALSE(r.fault);
  EXPECT_EQ(column(r.verdicts[0], mir, "h"), Value::of_int(0));
}

TEST(Monitor, SnapshotShowsBuffersAndDeadlines) {
  MirSpec mir = corpus_mir("altitude");
  Session s(mir, corpus_events("altitude", mir), VerdictMode::FullState);
  auto step = s.step();
  ASSERT_TRUE(step.verdict);
  const auto& streams = step.snapshot["streams"];
  EXPECT_EQ(streams[0]["name"], "altitude");
  ASSERT_EQ(streams[0]["buffer"].size(), 1u);
  EXPECT_EQ(streams[0]["buffer"][0]["value"], 100.0);
  EXPECT_EQ(step.snapshot["deadlines"][0]["due"], "1.0");
}

TEST(Faults, DivisionByZeroNamesStreamAndCycle) {
  MirSpec mir = corpus_mir("divide_by_zero");
  RunResult r = run_batch(mir, corpus_events("divide_by_zero", mir), VerdictMode::FullState);
  ASSERT_TRUE(r.fault);
  EXPECT_EQ(r.fault->code, "R002");
  EXPECT_EQ(r.fault->stream, "ratio");
  EXPECT_EQ(r.fault->cycle, 2u);
  EXPECT_EQ(r.fault->time, Rational(2));
  EXPECT_EQ(r.verdicts.size(), 2u);
}

TEST(Faults, TimeMustNotDecrease) {
  Monitor m(mir_of("input a : Int64\noutput b := a\n"), VerdictMode::FullState, Rational(0));
  m.accept_event(ev(Rational(2), {Value::of_int(1)}));
  try {
    m.accept_event(ev(Rational(1), {Value::of_int(1)}));
    FAIL() << "expected a fault";
  } catch (const RuntimeFault& f) {
    EXPECT_EQ(f.fault().code, "R001");
    EXPECT_TRUE(f.fault().stream.empty());
  }
}

TEST(Faults, OverflowIsReportedAndSticky) {
  Monitor m(mir_of("input a : Int64\noutput b := a * a\n"), VerdictMode::FullState, Rational(0));
  m.accept_event(ev(Rational(0), {Value::of_int(3037000499)}));
  RunFault first;
  try {
    m.accept_event(ev(Rational(1), {Value::of_int(3037000500)}));
    FAIL() << "expected overflow";
  } catch (const RuntimeFault& f) {
    first = f.fault();
  }
  EXPECT_EQ(first.code, "R003");
  EXPECT_EQ(first.stream, "b");
  try {
    m.accept_event(ev(Rational(2), {Value::of_int(1)}));
    FAIL() << "faulted monitor accepted an event";
  } catch (const RuntimeFault& f) {
    EXPECT_EQ(f.fault(), first);
  }
  EXPECT_THROW(m.finish(Rational(5)), RuntimeFault);
}

TEST(Faults, UnsignedUnderflow) {
  MirSpec mir = mir_of("input a : UInt64\noutput b := a - 1\n");
  RunResult r = run_batch(mir, {ev(Rational(0), {Value::of_uint(0)})}, VerdictMode::FullState);
  ASSERT_TRUE(r.fault);
  EXPECT_EQ(r.fault->code, "R003");
}

// Every mode's output is the corresponding projection of the full state.
TEST(Modes, ProjectionOfFullStateMatchesEachMode) {
  for (const auto& stem : fx::corpus_runs()) {
    MirSpec mir = corpus_mir(stem);
    auto events = corpus_events(stem, mir);
    RunResult full = run_batch(mir, events, VerdictMode::FullState);
    for (VerdictMode mode : {VerdictMode::Changed, VerdictMode::TriggersOnly}) {
      RunResult direct = run_batch(mir, events, mode);
      ASSERT_EQ(direct.verdicts.size(), full.verdicts.size()) << stem;
      for (std::size_t i = 0; i < full.verdicts.size(); ++i)
        EXPECT_EQ(project_verdict(full.verdicts[i], mode), direct.verdicts[i]) << stem << " #" << i;
      EXPECT_EQ(direct.fault, full.fault) << stem;
    }
  }
}

TEST(Modes, ChangedCarriesOnlyFreshValues) {
  MirSpec mir = corpus_mir("latlon_copy_paste");
  RunResult r = run_batch(mir, corpus_events("latlon_copy_paste", mir), VerdictMode::Changed);
  for (const auto& v : r.verdicts)
    for (std::size_t i = 0; i < v.values.size(); ++i) EXPECT_EQ(v.values[i].has_value(), v.fresh[i]);
  RunResult t = run_batch(mir, corpus_events("latlon_copy_paste", mir), VerdictMode::TriggersOnly);
  for (const auto& v : t.verdicts) EXPECT_TRUE(v.values.empty());
}

TEST(Modes, ParseNames) {
  EXPECT_EQ(parse_verdict_mode("triggers"), VerdictMode::TriggersOnly);
  EXPECT_EQ(parse_verdict_mode("changed"), VerdictMode::Changed);
  EXPECT_EQ(parse_verdict_mode("full"), VerdictMode::FullState);
  EXPECT_FALSE(parse_verdict_mode("all"));
}

TEST(Session, StepsReproduceTheBatchRun) {
  for (const auto& stem : fx::corpus_runs()) {
    MirSpec mir = corpus_mir(stem);
    auto events = corpus_events(stem, mir);
    RunResult batch = run_batch(mir, events, VerdictMode::Changed, std::nullopt, Rational(20));
    Session s(mir, events, VerdictMode::Changed, std::nullopt, Rational(20));
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<Verdict> stepped;
      std::optional<RunFault> fault;
      for (;;) {
        auto peeked = s.peek();
        auto r = s.step();
        if (r.exhausted) {
          EXPECT_FALSE(peeked);
          break;
        }
        if (r.fault) fault = r.fault;
        if (r.verdict) {
          ASSERT_TRUE(peeked);
          EXPECT_EQ(peeked->time, r.verdict->time);
          EXPECT_EQ(peeked->kind, r.verdict->kind);
          stepped.push_back(*r.verdict);
        }
      }
      EXPECT_EQ(stepped, batch.verdicts) << stem;
      EXPECT_EQ(fault, batch.fault) << stem;
      s.reset();
      EXPECT_EQ(s.events_consumed(), 0u);
    }
  }
}

TEST(VerdictJson, AltitudeTriggerVerdict) {
  MirSpec mir = corpus_mir("altitude");
  RunResult r = run_batch(mir, corpus_events("altitude", mir), VerdictMode::TriggersOnly);
  auto it = std::find_if(r.verdicts.begin(), r.verdicts.end(), [](const Verdict& v) { return !v.triggers.empty(); });
  ASSERT_NE(it, r.verdicts.end());
  auto j = verdict_to_json(*it, mir);
  EXPECT_EQ(j["triggers"][0]["message"], "Altitude changed too quickly");
  EXPECT_EQ(j["kind"], "event");
}

TEST(VerdictJson, NonFiniteFloatsBecomeStrings) {
  EXPECT_EQ(value_to_plain_json(Value::of_float(std::numeric_limits<double>::infinity())), "inf");
  EXPECT_EQ(value_to_plain_json(Value::of_float(-std::numeric_limits<double>::infinity())), "-inf");
  EXPECT_EQ(value_to_plain_json(Value::of_float(std::nan(""))), "nan");
  EXPECT_EQ(value_to_plain_json(Value::of_tuple({Value::of_int(1), Value::of_bool(false)})), nlohmann::json::parse("[1,false]"));
}

}  // namespace
}  // namespace lola
