#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "lola/analysis.hpp"
#include "lola/export.hpp"
#include "support/fixtures.hpp"

namespace lola {
namespace {

namespace fx = lola::fixtures;

struct Access {
  std::size_t from;
  std::size_t to;
  int lookback;  // 0 = synchronous
};

// Oracle: enumerate every simple cycle (as a node sequence starting at its
// smallest node) and report whether one can be closed using lookback-0
// accesses only.
bool has_zero_weight_cycle(std::size_t n, const std::vector<Access>& accesses) {
  std::vector<std::vector<bool>> sync(n, std::vector<bool>(n, false));
  for (const auto& a : accesses)
    if (a.lookback == 0) sync[a.from][a.to] = true;
  std::vector<std::size_t> path;
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t node) -> bool {
    if (sync[node][path.front()]) return true;
    for (std::size_t next = path.front() + 1; next < n; ++next) {
      if (used[next] || !sync[node][next]) continue;
      used[next] = true;
      path.push_back(next);
      if (extend(next)) return true;
      path.pop_back();
      used[next] = false;
    }
    return false;
  };
  for (std::size_t start = 0; start < n; ++start) {
    path = {start};
    std::fill(used.begin(), used.end(), false);
    used[start] = true;
    if (extend(start)) return true;
  }
  return false;
}

TEST(DependencyGraph, ZeroWeightCyclesMatchBruteForce) {
  std::mt19937 rng(2024);
  int rejected = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t n = 1 + rng() % 4;
    std::vector<Access> accesses;
    std::string src = "input x : Int64\n";
    for (std::size_t i = 0; i < n; ++i) {
      src += "output o" + std::to_string(i) + " := x";
      std::size_t k = rng() % 3;
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t to = rng() % n;
        int lookback = rng() % 2 ? 0 : 1 + static_cast<int>(rng() % 2);
        accesses.push_back({i, to, lookback});
        std::string name = "o" + std::to_string(to);
        src += lookback == 0 ? " + " + name
                             : " + " + name + ".offset(by: -" + std::to_string(lookback) + ", or: 0)";
      }
      src += "\n";
    }
    AnalysisReport r = run_all(src);
    bool expected = has_zero_weight_cycle(n, accesses);
    ASSERT_EQ(fx::has_code(r.diagnostics, "E020"), expected) << src;
    ASSERT_EQ(r.ok(), !expected) << src;
    rejected += expected;
  }
  EXPECT_GT(rejected, 40);
  EXPECT_LT(rejected, 360);
}

TEST(DependencyGraph, CycleDiagnosticNamesTheCycle) {
  AnalysisReport r = run_all("input x : Int64\noutput a := x + b\noutput b := a\n");
  auto it = std::find_if(r.diagnostics.begin(), r.diagnostics.end(),
                         [](const Diagnostic& d) { return d.code == "E020"; });
  ASSERT_NE(it, r.diagnostics.end());
  EXPECT_NE(it->message.find('a'), std::string::npos);
  EXPECT_NE(it->message.find('b'), std::string::npos);
}

TEST(DependencyGraph, HoldAndWindowEdgesDoNotCloseCycles) {
  EXPECT_TRUE(run_all("input x : Int64\noutput a := x + b.hold(or: 0)\noutput b := a\n").ok());
  EXPECT_TRUE(run_all("input x : Int64\noutput a @1Hz := b.aggregate(over: 1s, using: count)\n"
                      "output b @1Hz := a\n").ok());
}

TEST(DependencyGraph, AltitudeEdges) {
  AnalysisReport r = run_all(fx::read_file(fx::corpus_dir() / "altitude.lola"));
  ASSERT_TRUE(r.graph);
  std::vector<std::string> edges;
  for (const Edge& e : r.graph->edges) {
    const auto& s = r.typed->specification;
    edges.push_back(s.stream_name(e.from) + "->" + s.stream_name(e.to) + ":" + to_string(e.kind));
  }
  EXPECT_EQ(edges, (std::vector<std::string>{"avg_altitude->altitude:window", "altitude_diff->altitude:sync",
                                             "altitude_diff->avg_altitude:hold", "Trigger 0->altitude_diff:sync"}));
}

TEST(DependencyGraph, RepeatedAccessCollapsesIntoOneEdge) {
  AnalysisReport r = run_all("input a : Int64\noutput b := a + a * a\n");
  ASSERT_TRUE(r.graph);
  ASSERT_EQ(r.graph->edges.size(), 1u);
  EXPECT_EQ(r.graph->edges[0].occurrences.size(), 3u);
}

TEST(Memory, BoundIsOnePlusLargestOffset) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<std::string, int> deepest = {{"a", 0}, {"b", 0}, {"c", 0}};
    std::string src = "input a : Int64\ninput b : Int64\ninput c : Int64\n";
    for (int k = 0; k < 4; ++k) {
      std::string target = std::string(1, static_cast<char>('a' + rng() % 3));
      int lookback = 1 + static_cast<int>(rng() % 5);
      deepest[target] = std::max(deepest[target], lookback);
      src += "output o" + std::to_string(k) + " @(a && b && c) := " + target + ".offset(by: -" +
             std::to_string(lookback) + ", or: 0) + a\n";
    }
    AnalysisReport r = run_all(src);
    ASSERT_TRUE(r.ok()) << src;
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_EQ(r.memory->per_stream.at({StreamKind::Input, i}),
                static_cast<std::size_t>(1 + deepest[std::string(1, static_cast<char>('a' + i))]))
          << src;
    for (std::size_t o = 0; o < 4; ++o) EXPECT_EQ(r.memory->per_stream.at({StreamKind::Output, o}), 1u);
  }
}

TEST(Memory, WindowPanesAreDurationTimesFrequency) {
  AnalysisReport r = run_all("input a : Int64\noutput w @2Hz := a.aggregate(over: 3s, using: sum)\n"
                             "output v @0.5Hz := a.aggregate(over: 1min, using: count)\n");
  ASSERT_TRUE(r.ok());
  std::vector<std::size_t> panes;
  for (const auto& [node, count] : r.memory->per_window) panes.push_back(count);
  std::sort(panes.begin(), panes.end());
  EXPECT_EQ(panes, (std::vector<std::size_t>{6, 30}));
  EXPECT_TRUE(fx::has_code(
      run_all("input a : Int64\noutput w @1Hz := a.aggregate(over: 0.5s, using: sum)\n").diagnostics, "E021"));
}

TEST(GraphExport, ThicknessAndMemoryFollowOffsets) {
  auto one = graph_to_json(run_all(fx::read_file(fx::corpus_dir() / "offset_one.lola")));
  auto two = graph_to_json(run_all(fx::read_file(fx::corpus_dir() / "offset_typo.lola")));
  auto edge = [](const nlohmann::json& g, const std::string& kind) {
    for (const auto& e : g["edges"])
      if (e["fromName"] == "check_lon" && e["kind"] == kind) return e;
    return nlohmann::json();
  };
  EXPECT_EQ(edge(one, "offset")["thickness"], 2);
  EXPECT_EQ(edge(two, "offset")["thickness"], 3);
  EXPECT_EQ(edge(two, "offset")["weight"], 2);
  EXPECT_EQ(edge(two, "sync")["thickness"], 1);
}

}  // namespace
}  // namespace lola
