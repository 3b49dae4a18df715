#include "marrm/lognormal.hpp"

#include <cmath>
#include <stdexcept>

namespace marrm {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kInvSqrt2 = 0.7071067811865476;

// Acklam's rational approximation to the inverse normal CDF (~1e-9 absolute).
double quantile_seed(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double s = q * q;
    return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * q /
           (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

} // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0,1)");
    double z = quantile_seed(p);
    z -= (normal_cdf(z) - p) / normal_pdf(z);
    return z;
}

DriftVol drift_vol(const MarketParams& market, const Portfolio& portfolio) {
    ensure_valid(market, "drift_vol(market)");
    if (portfolio.pi.size() != static_cast<std::size_t>(market.d))
        throw std::invalid_argument("drift_vol: portfolio dimension does not match market.d");
    ensure_valid(portfolio, "drift_vol(portfolio)");

    const int d = market.d;
    double excess = 0.0;
    for (int i = 0; i < d; ++i) excess += portfolio.pi[i] * (market.b[i] - market.r);

    // |pi' Sigma|^2: squared Euclidean norm of the row vector pi' Sigma.
    double norm2 = 0.0;
    for (int j = 0; j < d; ++j) {
        double row_j = 0.0;
        for (int i = 0; i < d; ++i) row_j += portfolio.pi[i] * market.sigma_at(i, j);
        norm2 += row_j * row_j;
    }

    DriftVol out;
    out.a = (excess + market.r - 0.5 * norm2) * market.T;
    out.s2 = norm2 * market.T;
    return out;
}

LognormalLaw fraction_law(const LognormalLaw& loss, const MarketParams& market,
                          const Portfolio& portfolio, double x0) {
    ensure_valid(loss, "fraction_law(loss)");
    if (!(x0 > 0.0)) throw std::domain_error("fraction_law: x0 must be > 0");
    const DriftVol dv = drift_vol(market, portfolio);
    return {loss.m - std::log(x0) - dv.a, loss.s2 + dv.s2};
}

double log_stat(const LognormalLaw& law, const Criterion& criterion) {
    ensure_valid(law, "log_stat(law)");
    ensure_valid(criterion, "log_stat(criterion)");
    const double s = std::sqrt(law.s2);
    switch (criterion.kind) {
    case Criterion::Kind::var:
        return law.m + s * normal_quantile(criterion.level);
    case Criterion::Kind::arar: {
        const double z = normal_quantile(criterion.level);
        return law.m + s * normal_pdf(z) / (1.0 - criterion.level);
    }
    case Criterion::Kind::lnorm:
        return law.m + 0.5 * criterion.level * law.s2;
    case Criterion::Kind::entropic:
        throw NoClosedFormError(
            "log_stat: entropic acceptability of a lognormal has no closed form "
            "(the moment generating function diverges); use the Monte Carlo path");
    }
    throw std::logic_error("log_stat: unreachable");
}

} // namespace marrm
