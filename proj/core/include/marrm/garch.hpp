#pragma once

#include "marrm/solver.hpp"
#include "marrm/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace marrm {

struct GarchFit {
    GarchParams params;
    double loglik = 0.0;
    std::vector<double> sigma_path; // conditional volatilities, one per return
    bool converged = false;
};

struct GarchEval {
    double loglik = 0.0;
    std::vector<double> sigma_path;
};

// Gaussian pseudo-likelihood of an AR(1)-GARCH(1,1) on a return series.
// Residuals e_t = r_t - phi r_{t-1}; variance recursion sigma_t^2 = alpha0 +
// alpha1 e_{t-1}^2 + beta sigma_{t-1}^2, started at the unconditional
// variance alpha0/(1-alpha1-beta) with the pre-sample squared residual
// backcast at that same value. The likelihood sums over t = 2..n.
GarchEval garch_loglik(const GarchParams& params, std::span<const double> returns);

// Pseudo-maximum-likelihood fit by Nelder-Mead on transformed coordinates
// (phi free, log alpha0, and a logistic map keeping alpha1 >= 0, beta >= 0,
// alpha1 + beta < 1). Restarts from its own optimum until the improvement
// drops below f_tol.
GarchFit garch_fit(std::span<const double> returns, const GarchParams& init,
                   const OptConfig& opt = {});

// Conditional law of the next index value:
//   Y_t | past ~ LN((1+phi) log y_prev - phi log y_prev2, sigma_next^2).
LognormalLaw one_step_law(const GarchFit& fit, double y_prev, double y_prev2, double sigma_next);

// Forward simulation with sigma_1^2 at the unconditional variance;
// deterministic in the seed.
std::vector<double> garch_simulate(const GarchParams& params, std::size_t n, std::uint64_t seed);

struct PricePoint {
    std::string date; // ISO YYYY-MM-DD
    double price = 0.0;
};

struct ForecastRow {
    std::string date;
    double index = 0.0;
    double rrm = 0.0;
    double marrm = 0.0;
    double rrm_vs_index = 0.0;   // (rrm - index) / index
    double marrm_vs_index = 0.0; // (marrm - index) / index
    double rrm_vs_marrm = 0.0;   // (rrm - marrm) / marrm
    std::vector<double> pi;
};

struct ForecastTable {
    std::vector<ForecastRow> rows;
    std::vector<std::string> gap_notes; // calendar gaps above one week
};

// One-day-ahead rolling forecast: the variance recursion is advanced through
// the observed prices with the fitted parameters (filtering with realized
// residuals, not simulation), the conditional lognormal law of each day feeds
// rrm and marrm. first_forecast indexes into `prices` and must be >= 2 so the
// AR term has two predecessors.
ForecastTable rolling_forecast(const std::vector<PricePoint>& prices, const GarchFit& fit,
                               std::size_t first_forecast, const MarketParams& market,
                               const Criterion& criterion, const OptConfig& opt = {});

} // namespace marrm
