#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/reference.hpp"

namespace lola {
namespace {

namespace fx = lola::fixtures;

struct Case {
  fx::Compiled compiled;
  std::vector<Event> events;
};

Case corpus_case(const std::string& stem) {
  Case c{fx::compile(fx::read_file(fx::corpus_dir() / (stem + ".lola"))), {}};
  c.events = fx::load_trace(fx::read_file(fx::corpus_dir() / (stem + ".csv")), *c.compiled.mir);
  return c;
}

nlohmann::json monitor_json(const MirSpec& mir, const std::vector<Event>& events, std::optional<Rational> end = {}) {
  RunResult r = run_batch(mir, events, VerdictMode::FullState, std::nullopt, end);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : r.verdicts) out.push_back(verdict_to_json(v, mir));
  return {{"verdicts", out}, {"fault", oracle::fault_summary(r.fault)}};
}

nlohmann::json reference_json(const Case& c, std::optional<Rational> end = {}) {
  const auto& typed = *c.compiled.report.typed;
  auto r = oracle::reference_run(typed, c.events, std::nullopt, end);
  return {{"verdicts", oracle::verdicts_json(r.verdicts, oracle::reference_columns(typed.specification))},
          {"fault", oracle::fault_summary(r.fault)}};
}

// Exact except for floats, which may differ in summation order.
bool close(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number_float() || b.is_number_float()) {
    if (!a.is_number() || !b.is_number()) return false;
    double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
  }
  if (a.type() != b.type() || a.size() != b.size()) return false;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()) || !close(it.value(), b[it.key()])) return false;
    return true;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!close(a[i], b[i])) return false;
    return true;
  }
  return a == b;
}

TEST(Reference, AltitudeByHand) {
  Case c = corpus_case("altitude");
  auto r = oracle::reference_run(*c.compiled.report.typed, c.events);
  ASSERT_EQ(r.verdicts.size(), 5u);
  EXPECT_EQ(r.verdicts[3].kind, VerdictKind::Periodic);
  EXPECT_EQ(r.verdicts[3].time, Rational(1));
  EXPECT_EQ(r.verdicts[3].values[1], Value::of_float(100.0));
  ASSERT_EQ(r.verdicts[4].triggers.size(), 1u);
  EXPECT_EQ(r.verdicts[4].values[2], Value::of_float(20.0));
}

TEST(Reference, AgreesWithTheMonitorOnTheCorpus) {
  for (const auto& stem : fx::corpus_runs()) {
    Case c = corpus_case(stem);
    EXPECT_EQ(monitor_json(*c.compiled.mir, c.events, Rational(12)), reference_json(c, Rational(12))) << stem;
  }
}

TEST(Reference, ReportsTheSameFault) {
  Case c = corpus_case("divide_by_zero");
  auto r = oracle::reference_run(*c.compiled.report.typed, c.events);
  ASSERT_TRUE(r.fault);
  EXPECT_EQ(oracle::fault_summary(r.fault),
            nlohmann::json({{"code", "R002"}, {"stream", "ratio"}, {"cycle", 2}, {"time", "2"}}));
}

// The comparison must notice a monitor that reads the wrong history slot.
TEST(Reference, DetectsAWrongOffsetSlot) {
  Case c = corpus_case("offset_one");
  MirSpec broken = *c.compiled.mir;
  bool mutated = false;
  std::function<void(MirExpr&)> visit = [&](MirExpr& e) {
    if (e.op == MirExpr::Op::Offset && !mutated) {
      broken.streams[e.stream].buffer_size += 1;
      e.slot += 1;
      mutated = true;
    }
    for (auto& a : e.args) visit(a);
  };
  for (auto& s : broken.streams)
    if (s.expression) visit(*s.expression);
  ASSERT_TRUE(mutated);
  EXPECT_EQ(monitor_json(*c.compiled.mir, c.events), reference_json(c));
  EXPECT_NE(monitor_json(broken, c.events), reference_json(c));
}

// ...and one that aggregates over the wrong number of panes.
TEST(Reference, DetectsAWrongWindowLength) {
  auto compiled = fx::compile("input a : Int64\noutput s @1Hz := a.aggregate(over: 3s, using: sum)\n");
  std::vector<Event> events;
  for (int i = 0; i < 12; ++i) events.push_back(Event{Rational(i, 2), {Value::of_int(i)}});
  Case c{compiled, events};
  MirSpec broken = *compiled.mir;
  broken.windows[0].panes -= 1;
  EXPECT_EQ(monitor_json(*compiled.mir, events), reference_json(c));
  EXPECT_NE(monitor_json(broken, events), reference_json(c));
}

TEST(Reference, AgreesOnRandomWindowSpecs) {
  gen::Rng rng(31);
  int checked = 0;
  while (checked < 50) {
    auto compiled = fx::compile(gen::random_window_spec(rng));
    if (!compiled.mir) continue;
    ++checked;
    std::vector<ValueType> types;
    for (const auto& in : compiled.report.typed->specification.inputs) types.push_back(in.value_type);
    Case c{compiled, gen::random_events(rng, types, 40)};
    EXPECT_TRUE(close(monitor_json(*compiled.mir, c.events, Rational(30)), reference_json(c, Rational(30))))
        << compiled.report.source_text;
  }
}

}  // namespace
}  // namespace lola
