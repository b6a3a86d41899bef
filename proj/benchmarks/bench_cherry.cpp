#include <benchmark/benchmark.h>

#include "cherry/classify.hpp"
#include "cherry/dimension.hpp"
#include "cherry/ratios.hpp"

using namespace cherry;

namespace {

BigReal dec(const char* s, long p) { return BigReal::from_string(s, p); }

FlatCircleMap make_map(long prec) {
  Arc u(CirclePoint(dec("0.4", prec)), dec("0.1", prec));
  return FlatCircleMap(dec("1.5", prec), dec("1.5", prec), u,
                       CirclePoint(dec("0.2", prec)), prec);
}

struct TunedFixture {
  FlatCircleMap map;
  ConvergentTable table;
  BackwardOrbit orbit;

  static const TunedFixture& get() {
    static TunedFixture f = [] {
      const long prec = 192;
      ContinuedFraction golden = ContinuedFraction::parse("golden");
      Arc u(CirclePoint(dec("0.4", prec)), dec("0.1", prec));
      FlatCircleMap m =
          tune_parameter(dec("1.5", prec), dec("1.5", prec), u, golden, 10, prec);
      ConvergentTable t = convergents(golden, 9);
      BackwardOrbit orbit =
          BackwardOrbit::build(m, static_cast<long>(t.q(9) + t.q(8)) - 1);
      return TunedFixture{std::move(m), std::move(t), std::move(orbit)};
    }();
    return f;
  }
};

}  // namespace

static void BM_RegIncBeta(benchmark::State& state) {
  const long prec = state.range(0);
  BigReal x = dec("0.37", prec), p = dec("1.5", prec), q = dec("1.5", prec);
  for (auto _ : state) benchmark::DoNotOptimize(reg_inc_beta(x, p, q));
}
BENCHMARK(BM_RegIncBeta)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)
    ->Unit(benchmark::kMicrosecond);

static void BM_InverseBeta(benchmark::State& state) {
  const long prec = state.range(0);
  BigReal y = dec("0.37", prec), p = dec("1.5", prec), q = dec("1.5", prec);
  for (auto _ : state) benchmark::DoNotOptimize(inv_reg_inc_beta(y, p, q));
}
BENCHMARK(BM_InverseBeta)->Arg(128)->Arg(256)->Arg(512)
    ->Unit(benchmark::kMillisecond);

static void BM_MapEval(benchmark::State& state) {
  const long prec = state.range(0);
  FlatCircleMap m = make_map(prec);
  CirclePoint x = mod1(dec("0.77", prec));
  for (auto _ : state) benchmark::DoNotOptimize(m.eval(x));
}
BENCHMARK(BM_MapEval)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

static void BM_MapInverse(benchmark::State& state) {
  const long prec = state.range(0);
  FlatCircleMap m = make_map(prec);
  CirclePoint y = mod1(dec("0.61", prec));
  for (auto _ : state) benchmark::DoNotOptimize(m.inverse(y));
}
BENCHMARK(BM_MapInverse)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_TuneProbeOrbit(benchmark::State& state) {
  // cost of one combinatorial probe at depth 10 (one lift orbit to q_10)
  const TunedFixture& f = TunedFixture::get();
  ConvergentTable t = convergents(ContinuedFraction::parse("golden"), 10);
  for (auto _ : state) {
    LiftState s = f.map.lift_start(f.map.b());
    for (long long k = 0; k < t.q(10); ++k) s = f.map.lift_eval(s);
    benchmark::DoNotOptimize(s.base);
  }
}
BENCHMARK(BM_TuneProbeOrbit)->Unit(benchmark::kMillisecond);

static void BM_PartitionBuild(benchmark::State& state) {
  const TunedFixture& f = TunedFixture::get();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        DynamicalPartition::build(f.map, f.orbit, f.table, state.range(0)));
}
BENCHMARK(BM_PartitionBuild)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BiperiodicEigen(benchmark::State& state) {
  BigReal l1 = dec("2.5", 256), l2 = dec("1.7", 256);
  for (auto _ : state) benchmark::DoNotOptimize(biperiodic_eigen(2, 3, l1, l2));
}
BENCHMARK(BM_BiperiodicEigen)->Unit(benchmark::kMicrosecond);

static void BM_BowenDim(benchmark::State& state) {
  const TunedFixture& f = TunedFixture::get();
  DynamicalPartition part = DynamicalPartition::build(f.map, f.orbit, f.table, 8);
  for (auto _ : state) benchmark::DoNotOptimize(bowen_dim(part));
}
BENCHMARK(BM_BowenDim)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
