#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marrm/lognormal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace marrm;

namespace {

// Independent oracle: bisection against the erfc-based Gaussian CDF.
double cdf_oracle(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double quantile_oracle(double p) {
    double lo = -15.0, hi = 15.0;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        (cdf_oracle(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const MarketParams kRefMarket = [] {
    MarketParams m;
    m.d = 2;
    m.T = 1.0;
    m.r = 0.01;
    m.b = {0.04, 0.08};
    m.sigma = {0.15, -0.1, -0.1, 0.25};
    return m;
}();

} // namespace

TEST_CASE("normal_quantile matches the bisection oracle") {
    // frozen oracle outputs
    CHECK(std::abs(quantile_oracle(0.95) - 1.6448536269514722) < 1e-12);
    CHECK(std::abs(quantile_oracle(0.975) - 1.959963984540054) < 1e-12);

    CHECK(std::abs(normal_quantile(0.5)) <= 1e-15);
    CHECK(std::abs(normal_quantile(0.95) - 1.6448536269514722) < 1e-12);
    CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-12);
    for (double p : {1e-4, 1e-3, 0.02, 0.3, 0.7, 0.9, 0.999, 0.9999})
        CHECK(std::abs(normal_quantile(p) - quantile_oracle(p)) < 1e-11);
}

TEST_CASE("quantile/CDF coherence on a 10^4 grid") {
    double worst = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const double p = 0.0001 + (0.9999 - 0.0001) * (i + 0.5) / n;
        worst = std::max(worst, std::abs(cdf_oracle(normal_quantile(p)) - p));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("normal_quantile domain") {
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(-0.3), std::domain_error);
}

TEST_CASE("drift_vol on the reference market") {
    SUBCASE("bank account only") {
        const DriftVol dv = drift_vol(kRefMarket, Portfolio{{0.0, 0.0}});
        CHECK(dv.a == doctest::Approx(0.01).epsilon(1e-15));
        CHECK(dv.s2 == 0.0);
    }
    SUBCASE("all wealth in the first stock") {
        const DriftVol dv = drift_vol(kRefMarket, Portfolio{{1.0, 0.0}});
        // a = 0.03 + 0.01 - 0.0325/2, s2 = 0.15^2 + 0.1^2
        CHECK(dv.a == doctest::Approx(0.02375).epsilon(1e-14));
        CHECK(dv.s2 == doctest::Approx(0.0325).epsilon(1e-14));
    }
    SUBCASE("pure bank account compounds rT") {
        MarketParams m = kRefMarket;
        m.T = 2.0;
        const DriftVol dv = drift_vol(m, Portfolio{{0.0, 0.0}});
        CHECK(dv.a == doctest::Approx(0.02).epsilon(1e-14));
        CHECK(dv.s2 == 0.0);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(drift_vol(kRefMarket, Portfolio{{1.0}}), std::invalid_argument);
    }
}

TEST_CASE("fraction_law follows the terminal wealth exponent") {
    const LognormalLaw loss{1.5, 0.04};
    SUBCASE("bank account, unit capital") {
        const LognormalLaw f = fraction_law(loss, kRefMarket, Portfolio{{0.0, 0.0}}, 1.0);
        CHECK(f.m == doctest::Approx(1.49).epsilon(1e-14));
        CHECK(f.s2 == doctest::Approx(0.04).epsilon(1e-15));
    }
    SUBCASE("first stock, unit capital") {
        const LognormalLaw f = fraction_law(loss, kRefMarket, Portfolio{{1.0, 0.0}}, 1.0);
        CHECK(f.m == doctest::Approx(1.47625).epsilon(1e-13));
        CHECK(f.s2 == doctest::Approx(0.0725).epsilon(1e-13));
    }
    SUBCASE("capital at the median loss, zero rate") {
        MarketParams m = kRefMarket;
        m.r = 0.0;
        const LognormalLaw f = fraction_law(loss, m, Portfolio{{0.0, 0.0}}, std::exp(loss.m));
        CHECK(std::abs(f.m) < 1e-12);
        CHECK(f.s2 == doctest::Approx(0.04).epsilon(1e-15));
    }
    SUBCASE("pi=0, x0=1 shifts m by exactly -rT") {
        for (double mu : {0.0, 1.5, 3.0}) {
            const LognormalLaw f =
                fraction_law({mu, 0.09}, kRefMarket, Portfolio{{0.0, 0.0}}, 1.0);
            CHECK(f.m == doctest::Approx(mu - 0.01).epsilon(1e-14));
            CHECK(f.s2 == 0.09);
        }
    }
    SUBCASE("nonpositive capital") {
        CHECK_THROWS_AS(fraction_law(loss, kRefMarket, Portfolio{{0.0, 0.0}}, 0.0),
                        std::domain_error);
    }
}

TEST_CASE("log_stat closed forms") {
    SUBCASE("median of the standard lognormal is 1") {
        CHECK(log_stat({0.0, 1.0}, Criterion::var(0.5)) == doctest::Approx(0.0).scale(1e-15));
    }
    SUBCASE("ARaR multiplier phi(z)/(1-lambda)") {
        const double z = quantile_oracle(0.95);
        const double expected = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI) / 0.05;
        CHECK(std::abs(expected - 2.0627128) < 1e-6); // frozen
        CHECK(log_stat({0.0, 1.0}, Criterion::arar(0.95)) == doctest::Approx(expected).epsilon(1e-11));
    }
    SUBCASE("L^2 norm of the standard lognormal") {
        CHECK(log_stat({0.0, 1.0}, Criterion::lnorm(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("entropic has no closed form") {
        CHECK_THROWS_AS(log_stat({0.0, 1.0}, Criterion::entropic(2.0)), NoClosedFormError);
    }
}

TEST_CASE("log_stat tail statistics agree with a Monte Carlo oracle") {
    // independent sampler: mt19937_64 + std::normal_distribution
    std::mt19937_64 gen(20240811);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = 4000000;
    std::vector<double> z(n);
    for (auto& v : z) v = normal(gen);

    SUBCASE("ARaR(0.95) is the upper tail average of the log") {
        std::vector<double> s = z;
        const auto k = static_cast<std::size_t>(0.05 * n);
        std::nth_element(s.begin(), s.begin() + (n - k), s.end());
        double tail = 0.0, tail2 = 0.0;
        for (std::size_t i = n - k; i < n; ++i) {
            tail += s[i];
            tail2 += s[i] * s[i];
        }
        tail /= k;
        tail2 = tail2 / k - tail * tail;
        const double se = std::sqrt(tail2 / k);
        const double analytic = log_stat({0.0, 1.0}, Criterion::arar(0.95));
        CHECK(std::abs(analytic - tail) < 5.0 * se + 1e-3);
    }
    SUBCASE("L^2 statistic is log E[K^2]^(1/2)") {
        double mean = 0.0;
        for (double v : z) mean += std::exp(2.0 * v);
        mean /= static_cast<double>(n);
        const double mc_stat = 0.5 * std::log(mean);
        CHECK(std::abs(log_stat({0.0, 1.0}, Criterion::lnorm(2.0)) - mc_stat) < 0.01);
    }
}

TEST_CASE("log_stat properties") {
    const std::vector<Criterion> crits = {Criterion::var(0.9), Criterion::arar(0.95),
                                          Criterion::lnorm(3.0)};
    SUBCASE("shift in m is exact") {
        for (const auto& c : crits)
            for (double delta : {-2.0, -0.5, 0.25, 1.0, 4.0}) {
                const double base = log_stat({0.3, 0.7}, c);
                CHECK(std::abs(log_stat({0.3 + delta, 0.7}, c) - base - delta) <= 1e-12);
            }
    }
    SUBCASE("ARaR dominates VaR for s2 > 0") {
        for (double lambda : {0.8, 0.9, 0.95, 0.99})
            for (double s2 : {0.01, 0.25, 1.0, 4.0})
                CHECK(log_stat({0.0, s2}, Criterion::arar(lambda)) >=
                      log_stat({0.0, s2}, Criterion::var(lambda)));
    }
}
