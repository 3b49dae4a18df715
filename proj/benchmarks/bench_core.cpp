#include <benchmark/benchmark.h>

#include "marrm/garch.hpp"
#include "marrm/lognormal.hpp"
#include "marrm/market.hpp"
#include "marrm/solver.hpp"

namespace {

marrm::MarketParams reference_market() {
    marrm::MarketParams m;
    m.d = 2;
    m.T = 1.0;
    m.r = 0.01;
    m.b = {0.04, 0.08};
    m.sigma = {0.15, -0.1, -0.1, 0.25};
    return m;
}

const marrm::LognormalLaw kLoss{1.5, 0.04};

void BM_NormalQuantile(benchmark::State& state) {
    double p = 0.0001;
    for (auto _ : state) {
        benchmark::DoNotOptimize(marrm::normal_quantile(p));
        p += 1e-6;
        if (p > 0.9999) p = 0.0001;
    }
}
BENCHMARK(BM_NormalQuantile);

void BM_SimulateWealth(benchmark::State& state) {
    const auto market = reference_market();
    const marrm::Portfolio pi{{1.0, 0.5}};
    const marrm::McConfig mc{static_cast<std::size_t>(state.range(0)), 7};
    for (auto _ : state)
        benchmark::DoNotOptimize(marrm::simulate_terminal_wealth(market, pi, 1.0, mc));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SimulateWealth)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oN);

void BM_MarrmSolve(benchmark::State& state) {
    const auto market = reference_market();
    for (auto _ : state)
        benchmark::DoNotOptimize(marrm::marrm(kLoss, market, marrm::Criterion::arar(0.95)));
}
BENCHMARK(BM_MarrmSolve);

void BM_MarmInnerVar(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const marrm::McConfig mc{n, 11};
    const auto x = marrm::simulate_loss(kLoss, mc);
    const auto w = marrm::simulate_terminal_wealth(reference_market(), marrm::Portfolio{{1.0, 0.0}},
                                                   1.0, mc);
    for (auto _ : state)
        benchmark::DoNotOptimize(marrm::marm_inner(x, w, marrm::Criterion::var(0.95)));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MarmInnerVar)->Range(1 << 14, 1 << 18)->Complexity();

void BM_GarchLoglik(benchmark::State& state) {
    const marrm::GarchParams p{0.0340, 2.8718e-6, 0.0746, 0.9067};
    const auto r = marrm::garch_simulate(p, static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(marrm::garch_loglik(p, r).loglik);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GarchLoglik)->Range(1 << 10, 1 << 14)->Complexity(benchmark::oN);

} // namespace

BENCHMARK_MAIN();
