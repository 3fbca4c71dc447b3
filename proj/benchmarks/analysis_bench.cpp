#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "lola/analysis.hpp"
#include "lola/mir.hpp"
#include "lola/parser.hpp"

namespace {

std::string read_corpus(const char* name) {
  std::ifstream in(std::string(LOLA_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A chain of n outputs, each reading its predecessor synchronously and
// through an offset.
std::string chain_spec(int n) {
  std::string src = "input x : Int64\noutput s0 := x\n";
  for (int i = 1; i < n; ++i) {
    std::string prev = "s" + std::to_string(i - 1);
    src += "output s" + std::to_string(i) + " := " + prev + " + " + prev + ".offset(by: -" +
           std::to_string(1 + i % 4) + ", or: 0)\n";
  }
  return src;
}

void BM_ParseAltitude(benchmark::State& state) {
  std::string src = read_corpus("altitude.lola");
  for (auto _ : state) benchmark::DoNotOptimize(lola::parse(src));
}
BENCHMARK(BM_ParseAltitude);

void BM_AnalyzeEngineHealth(benchmark::State& state) {
  std::string src = read_corpus("engine_health.lola");
  for (auto _ : state) benchmark::DoNotOptimize(lola::run_all(src));
}
BENCHMARK(BM_AnalyzeEngineHealth);

void BM_AnalyzeChain(benchmark::State& state) {
  std::string src = chain_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto report = lola::run_all(src);
    benchmark::DoNotOptimize(report);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AnalyzeChain)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_LowerChain(benchmark::State& state) {
  auto report = lola::run_all(chain_spec(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(lola::lower(report));
}
BENCHMARK(BM_LowerChain)->Arg(16)->Arg(128);

}  // namespace
