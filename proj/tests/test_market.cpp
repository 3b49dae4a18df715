#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marrm/market.hpp"

#include <cmath>
#include <numeric>

using namespace marrm;

namespace {

const MarketParams kRefMarket = [] {
    MarketParams m;
    m.d = 2;
    m.T = 1.0;
    m.r = 0.01;
    m.b = {0.04, 0.08};
    m.sigma = {0.15, -0.1, -0.1, 0.25};
    return m;
}();

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

} // namespace

TEST_CASE("zero diffusion portfolio earns exactly exp(rT)") {
    const auto w = simulate_terminal_wealth(kRefMarket, Portfolio{{0.0, 0.0}}, 1.0, {1000, 7});
    for (double x : w) CHECK(x == std::exp(0.01));
}

TEST_CASE("simulation is deterministic in the seed") {
    const McConfig mc{50000, 987654321};
    const auto a = simulate_terminal_wealth(kRefMarket, Portfolio{{1.0, 0.0}}, 1.0, mc);
    const auto b = simulate_terminal_wealth(kRefMarket, Portfolio{{1.0, 0.0}}, 1.0, mc);
    CHECK(a == b);
    const auto la = simulate_loss({1.5, 0.04}, mc);
    const auto lb = simulate_loss({1.5, 0.04}, mc);
    CHECK(la == lb);
    const auto other = simulate_loss({1.5, 0.04}, {50000, 987654322});
    CHECK(la != other);
}

TEST_CASE("point mass loss simulates to a constant") {
    const auto v = simulate_loss({0.0, 0.0}, {100, 3});
    for (double x : v) CHECK(x == 1.0);
}

TEST_CASE("log-moments converge to drift_vol at CLT rate") {
    const Portfolio pi{{1.0, 0.0}};
    for (std::size_t n : {std::size_t{10000}, std::size_t{100000}, std::size_t{1000000}}) {
        const auto w = simulate_terminal_wealth(kRefMarket, pi, 1.0, {n, 20240811});
        std::vector<double> logs(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) logs[i] = std::log(w[i]);
        const double se_mean = std::sqrt(0.0325 / static_cast<double>(n));
        CHECK(std::abs(mean_of(logs) - 0.02375) < 4.0 * se_mean);
        const double se_var = 0.0325 * std::sqrt(2.0 / static_cast<double>(n));
        CHECK(std::abs(var_of(logs) - 0.0325) < 4.0 * se_var);
    }
}

TEST_CASE("loss sample mean matches the lognormal mean formula") {
    const std::size_t n = 1000000;
    const auto x = simulate_loss({1.5, 0.04}, {n, 5150});
    const double expected = std::exp(1.5 + 0.02);
    const double sd = expected * std::sqrt(std::exp(0.04) - 1.0);
    CHECK(std::abs(mean_of(x) - expected) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("wealth and loss streams are uncorrelated under one master seed") {
    const std::size_t n = 100000;
    const McConfig mc{n, 424242};
    const auto w = simulate_terminal_wealth(kRefMarket, Portfolio{{1.0, 0.0}}, 1.0, mc);
    const auto x = simulate_loss({1.5, 0.04}, mc);
    std::vector<double> lw(n), lx(n);
    for (std::size_t i = 0; i < n; ++i) {
        lw[i] = std::log(w[i]);
        lx[i] = std::log(x[i]);
    }
    const double mw = mean_of(lw), mx = mean_of(lx);
    double cov = 0.0, vw = 0.0, vx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (lw[i] - mw) * (lx[i] - mx);
        vw += (lw[i] - mw) * (lw[i] - mw);
        vx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double corr = cov / std::sqrt(vw * vx);
    CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("simulation input validation") {
    CHECK_THROWS_AS(simulate_terminal_wealth(kRefMarket, Portfolio{{0.0, 0.0}}, 0.0, {100, 1}),
                    std::domain_error);
    CHECK_THROWS_AS(simulate_terminal_wealth(kRefMarket, Portfolio{{0.0, 0.0}}, 1.0, {1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_loss({0.0, -1.0}, {100, 1}), std::invalid_argument);
}
