#pragma once

#include "marrm/types.hpp"

#include <stdexcept>

namespace marrm {

// Thrown when a closed form does not exist (entropic acceptability of a
// lognormal has a divergent moment generating function); callers are expected
// to switch to the Monte Carlo path.
class NoClosedFormError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double normal_pdf(double x);
double normal_cdf(double x);

// Inverse standard normal CDF, |Phi(result) - p| <= 1e-12 on (0,1).
// Rational approximation refined by one Newton step against the erfc-based CDF.
double normal_quantile(double p);

// Log-drift and log-variance of the terminal wealth exponent:
//   a  = (pi'(b - r 1) + r - |pi' Sigma|^2 / 2) * T
//   s2 = |pi' Sigma|^2 * T
struct DriftVol {
    double a = 0.0;
    double s2 = 0.0;
};

DriftVol drift_vol(const MarketParams& market, const Portfolio& portfolio);

// Law of X / X_T^{x0,pi} for a lognormal loss X independent of the stocks:
//   LN(mu - log x0 - a(pi), sigma^2 + s2(pi)).
LognormalLaw fraction_law(const LognormalLaw& loss, const MarketParams& market,
                          const Portfolio& portfolio, double x0);

// The statistic of log K, K ~ law, whose sign decides acceptability
// (acceptable iff <= 0):
//   var(lambda)   -> m + s * Phi^{-1}(lambda)
//   arar(lambda)  -> m + s * phi(Phi^{-1}(lambda)) / (1 - lambda)
//   lnorm(gamma)  -> m + gamma * s2 / 2          (= log ||K||_{L^gamma})
// entropic has no closed form here and throws NoClosedFormError.
double log_stat(const LognormalLaw& law, const Criterion& criterion);

} // namespace marrm
