#include "cakecut/cantor.hpp"
#include "cakecut/divisibility.hpp"
#include "cakecut/fixtures.hpp"
#include "cakecut/oracle.hpp"
#include "cakecut/slicing.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace cakecut;

IntervalSet comb(int teeth) {
    std::vector<Interval> parts;
    for (int i = 0; i < teeth; ++i)
        parts.push_back(make_interval(Rational(2 * i, 2 * teeth), Rational(2 * i + 1, 2 * teeth),
                                      i == 0, false));
    return normalize(std::move(parts));
}

void bm_eval_set(benchmark::State& state) {
    Valuation v = make_exF(Rational(1, 10));
    IntervalSet s = comb(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eval_set(v, s));
}
BENCHMARK(bm_eval_set)->Arg(4)->Arg(32);

void bm_achievable_set(benchmark::State& state) {
    Valuation v = parse_fixture("mix(1/10*dirac(1/8)+1/10*dirac(3/8)+1/10*dirac(5/8)+"
                                "1/10*dirac(7/8)+3/5*uniform)");
    IntervalSet whole = normalize({make_interval(0, 1, true, true)});
    for (auto _ : state) benchmark::DoNotOptimize(achievable_set(v, whole));
}
BENCHMARK(bm_achievable_set);

void bm_check_d(benchmark::State& state) {
    Valuation v = make_exF(Rational(1, 10));
    IntervalSet whole = normalize({make_interval(0, 1, true, true)});
    for (auto _ : state) benchmark::DoNotOptimize(check_d(v, whole, Rational(1, 5)));
}
BENCHMARK(bm_check_d);

void bm_cantor_cdf(benchmark::State& state) {
    Rational x(1, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(cantor_cdf(x, static_cast<int>(state.range(0))));
}
BENCHMARK(bm_cantor_cdf)->Arg(40)->Arg(120);

void bm_cantor_quantile(benchmark::State& state) {
    Rational p(3, 7);
    for (auto _ : state) benchmark::DoNotOptimize(cantor_quantile(p));
}
BENCHMARK(bm_cantor_quantile);

void bm_discretize(benchmark::State& state) {
    Valuation v = parse_fixture("mix(3/10*dirac(1/4)+1/5*dirac(3/4)+1/2*uniform)");
    Rational mesh(1, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(discretize(v, mesh));
}
BENCHMARK(bm_discretize)->Arg(256)->Arg(1024);

void bm_slice_cantor(benchmark::State& state) {
    Valuation v = make_cantor();
    for (auto _ : state) benchmark::DoNotOptimize(slice(v, Rational(1, 32)));
}
BENCHMARK(bm_slice_cantor);

void bm_greedy(benchmark::State& state) {
    Valuation v = make_exF(Rational(1, 10));
    for (auto _ : state)
        benchmark::DoNotOptimize(greedy_slicing(v, Rational(1, 5), state.range(0)));
}
BENCHMARK(bm_greedy)->Arg(20)->Arg(100);

void bm_set_union(benchmark::State& state) {
    IntervalSet a = comb(64);
    IntervalSet b = set_complement(a);
    for (auto _ : state) benchmark::DoNotOptimize(set_union(a, b));
}
BENCHMARK(bm_set_union);

} // namespace

BENCHMARK_MAIN();
