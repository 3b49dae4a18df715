#pragma once

#include "marrm/constants.hpp"
#include "marrm/market.hpp"
#include "marrm/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace marrm {

struct OptConfig {
    int max_iter = tol::nm_max_iter;
    double x_tol = tol::nm_x_tol;
    double f_tol = tol::nm_f_tol;
    int restarts = tol::nm_restarts;        // Nelder-Mead reruns per start point
    double pi_bounds = tol::nm_pi_bounds;   // symmetric box half-width
    std::vector<std::vector<double>> start_grid; // empty -> default multi-start policy
};

std::vector<Violation> validate(const OptConfig& opt);

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    long evals = 0;
    int iterations = 0;
    bool converged = false;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink
// 0.5) on the box [-pi_bounds, pi_bounds]^d; values outside the box are +inf.
// Stops when the simplex diameter falls below x_tol, the value spread below
// f_tol, or after max_iter iterations.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const OptConfig& opt);

// Default start points for the outer search: the origin, the 8 axis/diagonal
// points at radius 1 (axes plus sign patterns for d <= 3, axes plus the main
// diagonal otherwise).
std::vector<std::vector<double>> default_start_grid(int d);

// Single-eligible-asset return risk measure: the smallest x0 > 0 with
// log(X/(x0 e^{rT})) acceptable, i.e. exp(mu - rT + log_stat(LN(0, s2), c)).
// Entropic criteria throw NoClosedFormError.
double rrm(const LognormalLaw& loss, const Criterion& criterion, double r, double T);

// Minimal x0 for a fixed portfolio: log x0 = mu - a(pi) + log_stat(LN(0,
// sigma^2 + s2(pi)), c). The log form is exact and never overflows.
double marrm_inner_log(const LognormalLaw& loss, const MarketParams& market,
                       const Portfolio& portfolio, const Criterion& criterion);
double marrm_inner(const LognormalLaw& loss, const MarketParams& market,
                   const Portfolio& portfolio, const Criterion& criterion);

// Multi-asset return risk measure: minimises marrm_inner over constant
// portfolios by multi-start Nelder-Mead. If the volatility matrix has a
// kernel direction with positive excess drift the infimum is 0 (relative
// acceptability arbitrage); the result reports capital 0 with a diagnostic
// instead of chasing the unattained limit.
SolveResult marrm(const LognormalLaw& loss, const MarketParams& market, const Criterion& criterion,
                  const OptConfig& opt = {});

// Minimal x0 >= 0 with the empirical statistic of (X_i - x0 W_i) <= 0, found
// by bisection on [0, max X / min W] to relative tolerance 1e-10. Criteria:
// var (empirical left quantile at ceil(lambda n)), arar (Expected Shortfall:
// mean of the top floor((1-lambda) n) order statistics) and entropic
// (log-mean-exp of gamma (X_i - x0 W_i)).
double marm_inner(std::span<const double> loss_samples, std::span<const double> wealth_unit_samples,
                  const Criterion& criterion);

// Multi-asset (additive) risk measure by Monte Carlo: outer Nelder-Mead over
// pi with one fixed master seed, inner marm_inner on samples regenerated per
// pi through the monotone coupling. Entropic results carry a divergence
// warning in the diagnostic (the population value is +inf for a lognormal
// loss independent of the hedge).
SolveResult marm(const LognormalLaw& loss, const MarketParams& market, const Criterion& criterion,
                 const McConfig& mc, const OptConfig& opt = {});

// Empirical estimators shared with the tests: left quantile as the order
// statistic at index ceil(lambda n) and tail mean over the top
// floor((1-lambda) n) order statistics.
double empirical_quantile(std::vector<double> values, double lambda);
double empirical_es(std::vector<double> values, double lambda);
double log_mean_exp(std::span<const double> values, double gamma);

} // namespace marrm
