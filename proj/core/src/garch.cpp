#include "marrm/garch.hpp"

#include "marrm/csv.hpp"
#include "marrm/lognormal.hpp"
#include "marrm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marrm {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) {
    p = std::clamp(p, 1e-10, 1.0 - 1e-10);
    return std::log(p / (1.0 - p));
}

std::vector<double> encode(const GarchParams& p) {
    const double s = p.alpha1 + p.beta;
    const double w = s > 0.0 ? p.alpha1 / s : 0.5;
    return {p.phi, std::log(p.alpha0), logit(s), logit(w)};
}

GarchParams decode(const std::vector<double>& x) {
    GarchParams p;
    p.phi = x[0];
    p.alpha0 = std::exp(x[1]);
    const double s = sigmoid(x[2]);
    const double w = sigmoid(x[3]);
    p.alpha1 = s * w;
    p.beta = s * (1.0 - w);
    return p;
}

} // namespace

GarchEval garch_loglik(const GarchParams& params, std::span<const double> returns) {
    ensure_valid(params, "garch_loglik(params)");
    const std::size_t n = returns.size();
    if (n < 3) throw std::invalid_argument("garch_loglik: need at least 3 returns");

    const double uncond = params.unconditional_variance();
    GarchEval out;
    out.sigma_path.resize(n);
    out.sigma_path[0] = std::sqrt(uncond);

    double v_prev = uncond;
    double e2_prev = uncond; // pre-sample squared residual backcast
    double loglik = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        const double v = params.alpha0 + params.alpha1 * e2_prev + params.beta * v_prev;
        const double e = returns[t] - params.phi * returns[t - 1];
        loglik += -0.5 * (kLog2Pi + std::log(v)) - e * e / (2.0 * v);
        out.sigma_path[t] = std::sqrt(v);
        e2_prev = e * e;
        v_prev = v;
    }
    out.loglik = loglik;
    return out;
}

GarchFit garch_fit(std::span<const double> returns, const GarchParams& init, const OptConfig& opt) {
    ensure_valid(init, "garch_fit(init)");
    ensure_valid(opt, "garch_fit(opt)");
    if (returns.size() < 100) throw std::invalid_argument("garch_fit: need at least 100 returns");

    auto objective = [&](const std::vector<double>& x) {
        return -garch_loglik(decode(x), returns).loglik;
    };

    // The transformed coordinates live on the whole real line; the pi box of
    // the outer solver does not apply here.
    OptConfig fit_opt = opt;
    fit_opt.pi_bounds = 1e6;

    std::vector<double> x = encode(init);
    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    double prev = best.value;
    bool converged = false;
    for (int rep = 0; rep < opt.restarts; ++rep) {
        NelderMeadResult res = nelder_mead(objective, x, fit_opt);
        if (res.value < best.value) {
            best = res;
            converged = res.converged;
        }
        const bool improved = prev - res.value > opt.f_tol;
        prev = res.value;
        x = res.x;
        if (!improved) break;
    }

    GarchFit fit;
    fit.params = decode(best.x);
    const GarchEval eval = garch_loglik(fit.params, returns);
    fit.loglik = eval.loglik;
    fit.sigma_path = eval.sigma_path;
    fit.converged = converged;
    return fit;
}

LognormalLaw one_step_law(const GarchFit& fit, double y_prev, double y_prev2, double sigma_next) {
    if (!(y_prev > 0.0) || !(y_prev2 > 0.0))
        throw std::domain_error("one_step_law: prices must be > 0");
    if (!(sigma_next > 0.0)) throw std::domain_error("one_step_law: sigma_next must be > 0");
    const double phi = fit.params.phi;
    const double m = (1.0 + phi) * std::log(y_prev) - phi * std::log(y_prev2);
    return {m, sigma_next * sigma_next};
}

std::vector<double> garch_simulate(const GarchParams& params, std::size_t n, std::uint64_t seed) {
    ensure_valid(params, "garch_simulate(params)");
    std::vector<double> out(n);
    if (n == 0) return out;

    const std::uint64_t base = rng::stream_base(seed, rng::Stream::garch);
    double v = params.unconditional_variance();
    double e = std::sqrt(v) * rng::gaussian_at(base, 0);
    out[0] = e; // no predecessor return for the AR term
    for (std::size_t t = 1; t < n; ++t) {
        v = params.alpha0 + params.alpha1 * e * e + params.beta * v;
        e = std::sqrt(v) * rng::gaussian_at(base, t);
        out[t] = params.phi * out[t - 1] + e;
    }
    return out;
}

ForecastTable rolling_forecast(const std::vector<PricePoint>& prices, const GarchFit& fit,
                               std::size_t first_forecast, const MarketParams& market,
                               const Criterion& criterion, const OptConfig& opt) {
    if (prices.size() < 3) throw std::invalid_argument("rolling_forecast: need at least 3 prices");
    if (first_forecast < 2 || first_forecast >= prices.size())
        throw std::invalid_argument("rolling_forecast: first_forecast must lie in [2, n_prices)");
    for (const auto& p : prices)
        if (!(p.price > 0.0)) throw std::invalid_argument("rolling_forecast: prices must be > 0");

    const std::size_t n = prices.size();
    std::vector<double> returns(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
        returns[k] = std::log(prices[k + 1].price / prices[k].price);

    // Filter the conditional variance through the whole observed series;
    // sigma of return k is conditional on information through k-1.
    const GarchEval filter = garch_loglik(fit.params, returns);

    ForecastTable table;
    for (std::size_t t = first_forecast; t < n; ++t) {
        const double sigma_next = filter.sigma_path[t - 1];
        const LognormalLaw law =
            one_step_law(fit, prices[t - 1].price, prices[t - 2].price, sigma_next);

        ForecastRow row;
        row.date = prices[t].date;
        row.index = prices[t].price;
        row.rrm = rrm(law, criterion, market.r, market.T);
        const SolveResult res = marrm(law, market, criterion, opt);
        row.marrm = res.capital;
        row.pi = res.portfolio.pi;
        row.rrm_vs_index = (row.rrm - row.index) / row.index;
        row.marrm_vs_index = (row.marrm - row.index) / row.index;
        row.rrm_vs_marrm = (row.rrm - row.marrm) / row.marrm;
        table.rows.push_back(std::move(row));
    }

    for (std::size_t t = 1; t < n; ++t) {
        const auto d0 = cli::iso_day_number(prices[t - 1].date);
        const auto d1 = cli::iso_day_number(prices[t].date);
        if (!d0 || !d1) {
            table.gap_notes.push_back("unparseable date near " + prices[t].date);
            continue;
        }
        if (*d1 - *d0 > 7)
            table.gap_notes.push_back("gap of " + std::to_string(*d1 - *d0) + " days between " +
                                      prices[t - 1].date + " and " + prices[t].date);
    }
    return table;
}

} // namespace marrm
