#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marrm/types.hpp"

using namespace marrm;

namespace {

bool has_field(const std::vector<Violation>& v, const std::string& field) {
    for (const auto& x : v)
        if (x.field == field) return true;
    return false;
}

} // namespace

TEST_CASE("degenerate lognormal point mass is allowed") {
    CHECK(validate(LognormalLaw{0.0, 0.0}).empty());
    CHECK(has_field(validate(LognormalLaw{0.0, -1.0}), "s2"));
    CHECK(has_field(validate(LognormalLaw{std::numeric_limits<double>::infinity(), 1.0}), "m"));
}

TEST_CASE("garch stationarity boundary is rejected") {
    CHECK(validate(GarchParams{0.1, 1e-6, 0.0746, 0.9067}).empty());
    const auto v = validate(GarchParams{0.0, 1e-6, 0.5, 0.6});
    CHECK(has_field(v, "alpha1+beta"));
    CHECK(has_field(validate(GarchParams{0.0, 0.0, 0.1, 0.1}), "alpha0"));
    CHECK(has_field(validate(GarchParams{0.0, 1e-6, -0.1, 0.1}), "alpha1"));
}

TEST_CASE("uniform two-atom space is valid") {
    CHECK(validate(FiniteSpace{{0.5, 0.5}}).empty());
    CHECK(has_field(validate(FiniteSpace{{0.5, 0.6}}), "probs"));
    CHECK(has_field(validate(FiniteSpace{{1.0, 0.0}}), "probs"));
    CHECK(has_field(validate(FiniteSpace{{}}), "probs"));
}

TEST_CASE("market dimension consistency") {
    MarketParams m;
    m.d = 2;
    m.T = 1.0;
    m.r = 0.01;
    m.b = {0.04, 0.08};
    m.sigma = {0.15, -0.1, -0.1, 0.25};
    CHECK(validate(m).empty());

    m.b = {0.04};
    CHECK(has_field(validate(m), "b"));
    m.b = {0.04, 0.08};
    m.T = 0.0;
    CHECK(has_field(validate(m), "T"));
}

TEST_CASE("criterion parameter ranges") {
    CHECK(validate(Criterion::var(0.95)).empty());
    CHECK(has_field(validate(Criterion::var(1.0)), "level"));
    CHECK(has_field(validate(Criterion::arar(0.0)), "level"));
    CHECK(validate(Criterion::lnorm(2.0)).empty());
    CHECK(has_field(validate(Criterion::entropic(-1.0)), "level"));
}

TEST_CASE("positions must match their space") {
    const FiniteSpace s{{0.25, 0.25, 0.5}};
    CHECK(validate(FinitePosition{{1.0, 2.0, 3.0}}, s).empty());
    CHECK(has_field(validate(FinitePosition{{1.0, 2.0}}, s), "values"));
}

TEST_CASE("solve result invariants") {
    SolveResult r;
    r.capital = 1.0;
    r.portfolio.pi = {0.0, 0.0};
    r.converged = true;
    CHECK(validate(r).empty());
    r.capital = -1.0;
    CHECK(has_field(validate(r), "capital"));
}

TEST_CASE("ensure_valid reports every violated field") {
    GarchParams bad{0.0, 0.0, -1.0, 0.5};
    CHECK_THROWS_WITH_AS(ensure_valid(bad, "test"),
                         doctest::Contains("alpha0"), std::invalid_argument);
    try {
        ensure_valid(bad, "test");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("alpha1") != std::string::npos);
    }
}
