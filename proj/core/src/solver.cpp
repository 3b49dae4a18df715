#include "marrm/solver.hpp"

#include "marrm/lognormal.hpp"
#include "marrm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace marrm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(double v) { return std::isnan(v) ? kInf : v; }

// ---------------------------------------------------------------- small linalg

// Solve A x = rhs (row-major n x n) by partial-pivot elimination.
// Returns false if a pivot falls below the tolerance.
bool solve_linear(std::vector<double> a, std::vector<double> rhs, int n, std::vector<double>& out) {
    for (int r = 0; r < n; ++r) {
        int piv = r;
        for (int i = r + 1; i < n; ++i)
            if (std::abs(a[i * n + r]) > std::abs(a[piv * n + r])) piv = i;
        if (std::abs(a[piv * n + r]) < tol::kernel_pivot) return false;
        if (piv != r) {
            for (int j = 0; j < n; ++j) std::swap(a[r * n + j], a[piv * n + j]);
            std::swap(rhs[r], rhs[piv]);
        }
        for (int i = r + 1; i < n; ++i) {
            const double f = a[i * n + r] / a[r * n + r];
            if (f == 0.0) continue;
            for (int j = r; j < n; ++j) a[i * n + j] -= f * a[r * n + j];
            rhs[i] -= f * rhs[r];
        }
    }
    out.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int j = r + 1; j < n; ++j) s -= a[r * n + j] * out[j];
        out[r] = s / (a[r * n + r]);
    }
    return true;
}

// Basis of {x : A x = 0} via full-pivot elimination (row-major n x n).
std::vector<std::vector<double>> kernel_basis(std::vector<double> a, int n) {
    std::vector<int> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    const double pivot_tol = tol::kernel_pivot * std::max(1.0, amax);

    int rank = 0;
    for (int r = 0; r < n; ++r) {
        int pi = -1, pj = -1;
        double best = pivot_tol;
        for (int i = r; i < n; ++i)
            for (int j = r; j < n; ++j)
                if (std::abs(a[i * n + cols[j]]) > best) {
                    best = std::abs(a[i * n + cols[j]]);
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        if (pi != r)
            for (int j = 0; j < n; ++j) std::swap(a[r * n + j], a[pi * n + j]);
        std::swap(cols[r], cols[pj]);
        const double piv = a[r * n + cols[r]];
        for (int i = r + 1; i < n; ++i) {
            const double f = a[i * n + cols[r]] / piv;
            if (f == 0.0) continue;
            a[i * n + cols[r]] = 0.0;
            for (int j = r + 1; j < n; ++j) a[i * n + cols[j]] -= f * a[r * n + cols[j]];
        }
        ++rank;
    }

    std::vector<std::vector<double>> basis;
    for (int k = rank; k < n; ++k) {
        std::vector<double> x(n, 0.0);
        x[cols[k]] = 1.0;
        for (int r = rank - 1; r >= 0; --r) {
            double s = 0.0;
            for (int j = r + 1; j < n; ++j) s += a[r * n + cols[j]] * x[cols[j]];
            x[cols[r]] = -s / a[r * n + cols[r]];
        }
        double norm = 0.0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : x) v /= norm;
        basis.push_back(std::move(x));
    }
    return basis;
}

// Zero-diffusion direction with positive excess drift, if one exists: a unit
// v with Sigma^T v = 0 and v'(b - r 1) > 0. Scaling such a v makes any loss
// acceptable at vanishing cost.
std::optional<std::vector<double>> arbitrage_direction(const MarketParams& market) {
    const int d = market.d;
    std::vector<double> sig_t(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sig_t[static_cast<std::size_t>(j) * d + i] = market.sigma_at(i, j);
    for (auto& v : kernel_basis(std::move(sig_t), d)) {
        double g = 0.0;
        for (int i = 0; i < d; ++i) g += v[i] * (market.b[i] - market.r);
        if (std::abs(g) > 1e-12) {
            if (g < 0.0)
                for (double& c : v) c = -c;
            return v;
        }
    }
    return std::nullopt;
}

const char* kArbitrageNote =
    "relative acceptability arbitrage: the volatility matrix has a zero-diffusion "
    "direction with positive excess drift; scaling that portfolio drives the required "
    "capital to 0 (infimum not attained)";

// Wealth-direction starts: multiples of (Sigma Sigma^T)^{-1} (b - r 1), the
// asymptotic optimal direction. They let the outer search jump into the far
// valley that appears when Sigma is nearly singular.
std::vector<std::vector<double>> drift_direction_starts(const MarketParams& market,
                                                        double pi_bounds) {
    const int d = market.d;
    std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += market.sigma_at(i, k) * market.sigma_at(j, k);
            m[static_cast<std::size_t>(i) * d + j] = s;
        }
    std::vector<double> rhs(d);
    for (int i = 0; i < d; ++i) rhs[i] = market.b[i] - market.r;
    std::vector<double> dir;
    if (!solve_linear(std::move(m), std::move(rhs), d, dir)) return {};
    double norm = 0.0;
    for (double v : dir) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) return {};
    for (double& v : dir) v /= norm;

    std::vector<std::vector<double>> starts;
    for (double radius : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
        bool inside = true;
        std::vector<double> p(d), q(d);
        for (int i = 0; i < d; ++i) {
            p[i] = radius * dir[i];
            q[i] = -radius * dir[i];
            if (std::abs(p[i]) > pi_bounds) inside = false;
        }
        if (!inside) break;
        starts.push_back(std::move(p));
        starts.push_back(std::move(q));
    }
    return starts;
}

struct MultiStartOutcome {
    NelderMeadResult best;
    long evals = 0;
    int runs = 0;
    bool converged = false;
};

MultiStartOutcome run_multistart(const std::function<double(const std::vector<double>&)>& objective,
                                 const std::vector<std::vector<double>>& starts,
                                 const OptConfig& opt) {
    MultiStartOutcome out;
    out.best.value = kInf;
    for (const auto& start : starts) {
        std::vector<double> x = start;
        double prev = kInf;
        for (int rep = 0; rep < opt.restarts; ++rep) {
            NelderMeadResult res = nelder_mead(objective, x, opt);
            ++out.runs;
            out.evals += res.evals;
            if (res.value < out.best.value) {
                out.best = res;
                out.converged = res.converged;
            }
            const bool improved = prev - res.value > opt.f_tol;
            prev = res.value;
            x = res.x;
            if (!improved) break;
        }
    }
    return out;
}

std::vector<std::vector<double>> resolve_starts(const OptConfig& opt, const MarketParams& market) {
    std::vector<std::vector<double>> starts;
    starts.emplace_back(market.d, 0.0); // the origin is always a start point
    if (opt.start_grid.empty()) {
        for (auto& s : default_start_grid(market.d)) starts.push_back(std::move(s));
        for (auto& s : drift_direction_starts(market, opt.pi_bounds)) starts.push_back(std::move(s));
    } else {
        for (const auto& s : opt.start_grid) {
            if (s.size() != static_cast<std::size_t>(market.d))
                throw std::invalid_argument("start_grid entry dimension does not match market.d");
            starts.push_back(s);
        }
    }
    return starts;
}

// ------------------------------------------------------- empirical statistics

double quantile_in_place(std::vector<double>& v, double lambda) {
    const std::size_t n = v.size();
    auto k = static_cast<std::size_t>(std::ceil(lambda * static_cast<double>(n) - 1e-9));
    k = std::clamp<std::size_t>(k, 1, n);
    std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
    return v[k - 1];
}

double es_in_place(std::vector<double>& v, double lambda) {
    const std::size_t n = v.size();
    const auto k = static_cast<std::size_t>(std::floor((1.0 - lambda) * static_cast<double>(n) + 1e-9));
    if (k < 1)
        throw std::invalid_argument("empirical_es: tail holds no sample at this level and size");
    std::nth_element(v.begin(), v.begin() + (n - k), v.end());
    double sum = 0.0;
    for (std::size_t i = n - k; i < n; ++i) sum += v[i];
    return sum / static_cast<double>(k);
}

// Acceptability of x0, i.e. "statistic of (X_i - x0 W_i) <= 0". The var rule
// is decided by a counting pass: the order statistic at ceil(lambda n) is
// <= 0 exactly when at least that many differences are <= 0.
bool marm_acceptable(std::span<const double> x, std::span<const double> w, double x0,
                     const Criterion& c, std::vector<double>& diff) {
    const std::size_t n = x.size();
    switch (c.kind) {
    case Criterion::Kind::var: {
        auto need = static_cast<std::size_t>(std::ceil(c.level * static_cast<double>(n) - 1e-9));
        need = std::clamp<std::size_t>(need, 1, n);
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) count += x[i] <= x0 * w[i];
        return count >= need;
    }
    case Criterion::Kind::arar: {
        diff.resize(n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - x0 * w[i];
        return es_in_place(diff, c.level) <= 0.0;
    }
    case Criterion::Kind::entropic: {
        diff.resize(n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - x0 * w[i];
        return log_mean_exp(diff, c.level) <= 0.0;
    }
    case Criterion::Kind::lnorm:
        break;
    }
    throw std::invalid_argument(
        "marm_inner: the L^gamma rule has no additive sample statistic; use var, arar (Expected "
        "Shortfall) or entropic");
}

double marm_inner_impl(std::span<const double> x, std::span<const double> w, const Criterion& c,
                       std::vector<double>& diff) {
    if (x.empty()) throw std::invalid_argument("marm_inner: empty samples");
    if (x.size() != w.size())
        throw std::invalid_argument("marm_inner: sample vectors must have equal length");
    double w_min = kInf, x_max = -kInf;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) throw std::invalid_argument("marm_inner: wealth samples must be > 0");
        w_min = std::min(w_min, w[i]);
        x_max = std::max(x_max, x[i]);
    }

    if (marm_acceptable(x, w, 0.0, c, diff)) return 0.0;
    double lo = 0.0;
    double hi = x_max / w_min;
    if (!marm_acceptable(x, w, hi, c, diff))
        throw std::runtime_error(
            "marm_inner: statistic stayed positive at the bracket end; the sample statistic is "
            "not nonincreasing in x0");
    for (int it = 0; it < tol::bisection_max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (marm_acceptable(x, w, mid, c, diff))
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= tol::bisection_rel * hi) break;
    }
    return hi;
}

} // namespace

std::vector<Violation> validate(const OptConfig& opt) {
    std::vector<Violation> out;
    if (opt.max_iter < 1) out.push_back({"max_iter", "must be >= 1"});
    if (!(opt.x_tol > 0.0)) out.push_back({"x_tol", "must be > 0"});
    if (!(opt.f_tol > 0.0)) out.push_back({"f_tol", "must be > 0"});
    if (opt.restarts < 1) out.push_back({"restarts", "must be >= 1"});
    if (!(opt.pi_bounds > 0.0)) out.push_back({"pi_bounds", "must be > 0"});
    return out;
}

std::vector<std::vector<double>> default_start_grid(int d) {
    std::vector<std::vector<double>> grid;
    for (int i = 0; i < d; ++i)
        for (double s : {1.0, -1.0}) {
            std::vector<double> p(d, 0.0);
            p[i] = s;
            grid.push_back(std::move(p));
        }
    if (d == 1) return grid;
    if (d <= 3) {
        const double c = 1.0 / std::sqrt(static_cast<double>(d));
        const int patterns = 1 << d;
        for (int mask = 0; mask < patterns; ++mask) {
            std::vector<double> p(d);
            for (int i = 0; i < d; ++i) p[i] = (mask >> i & 1) ? c : -c;
            grid.push_back(std::move(p));
        }
    } else {
        const double c = 1.0 / std::sqrt(static_cast<double>(d));
        grid.emplace_back(d, c);
        grid.emplace_back(d, -c);
    }
    return grid;
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const OptConfig& opt) {
    ensure_valid(opt, "nelder_mead(opt)");
    const int d = static_cast<int>(start.size());
    if (d < 1) throw std::invalid_argument("nelder_mead: empty start point");

    const double bound = opt.pi_bounds;
    for (double& v : start) v = std::clamp(v, -bound, bound);

    long evals = 0;
    auto boxed = [&](const std::vector<double>& x) {
        for (double v : x)
            if (std::abs(v) > bound) return kInf;
        ++evals;
        return guarded(objective(x));
    };

    std::vector<std::vector<double>> pts(d + 1, start);
    std::vector<double> vals(d + 1);
    for (int i = 0; i < d; ++i) {
        double h = 0.25 + 0.05 * std::abs(start[i]);
        if (start[i] + h > bound) h = -h;
        pts[i + 1][i] += h;
    }
    for (int i = 0; i <= d; ++i) vals[i] = boxed(pts[i]);

    std::vector<int> order(d + 1);
    int iterations = 0;
    bool converged = false;

    for (; iterations < opt.max_iter; ++iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        const int best = order[0], worst = order[d], second = order[d - 1];

        double diameter = 0.0;
        for (int k = 1; k <= d; ++k)
            for (int i = 0; i < d; ++i)
                diameter = std::max(diameter, std::abs(pts[order[k]][i] - pts[best][i]));
        if (diameter < opt.x_tol || vals[worst] - vals[best] < opt.f_tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (int k = 0; k <= d; ++k) {
            if (k == worst) continue;
            for (int i = 0; i < d; ++i) centroid[i] += pts[k][i];
        }
        for (double& c : centroid) c /= d;

        std::vector<double> xr(d);
        for (int i = 0; i < d; ++i) xr[i] = centroid[i] + (centroid[i] - pts[worst][i]);
        const double fr = boxed(xr);

        if (fr < vals[best]) {
            std::vector<double> xe(d);
            for (int i = 0; i < d; ++i) xe[i] = centroid[i] + 2.0 * (centroid[i] - pts[worst][i]);
            const double fe = boxed(xe);
            if (fe < fr) {
                pts[worst] = std::move(xe);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = std::move(xr);
            vals[worst] = fr;
            continue;
        }

        bool shrink = false;
        if (fr < vals[worst]) {
            std::vector<double> xc(d); // outside contraction
            for (int i = 0; i < d; ++i) xc[i] = centroid[i] + 0.5 * (xr[i] - centroid[i]);
            const double fc = boxed(xc);
            if (fc <= fr) {
                pts[worst] = std::move(xc);
                vals[worst] = fc;
            } else {
                shrink = true;
            }
        } else {
            std::vector<double> xc(d); // inside contraction
            for (int i = 0; i < d; ++i) xc[i] = centroid[i] + 0.5 * (pts[worst][i] - centroid[i]);
            const double fc = boxed(xc);
            if (fc < vals[worst]) {
                pts[worst] = std::move(xc);
                vals[worst] = fc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (int k = 0; k <= d; ++k) {
                if (k == best) continue;
                for (int i = 0; i < d; ++i) pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
                vals[k] = boxed(pts[k]);
            }
        }
    }

    int best = 0;
    for (int k = 1; k <= d; ++k)
        if (vals[k] < vals[best]) best = k;

    NelderMeadResult out;
    out.x = pts[best];
    out.value = vals[best];
    out.evals = evals;
    out.iterations = iterations;
    out.converged = converged;
    return out;
}

double rrm(const LognormalLaw& loss, const Criterion& criterion, double r, double T) {
    ensure_valid(loss, "rrm(loss)");
    if (!(T > 0.0) || !std::isfinite(T) || !std::isfinite(r))
        throw std::invalid_argument("rrm: need finite r and T > 0");
    return std::exp(loss.m - r * T + log_stat({0.0, loss.s2}, criterion));
}

double marrm_inner_log(const LognormalLaw& loss, const MarketParams& market,
                       const Portfolio& portfolio, const Criterion& criterion) {
    ensure_valid(loss, "marrm_inner(loss)");
    const DriftVol dv = drift_vol(market, portfolio);
    return loss.m - dv.a + log_stat({0.0, loss.s2 + dv.s2}, criterion);
}

double marrm_inner(const LognormalLaw& loss, const MarketParams& market, const Portfolio& portfolio,
                   const Criterion& criterion) {
    return std::exp(marrm_inner_log(loss, market, portfolio, criterion));
}

SolveResult marrm(const LognormalLaw& loss, const MarketParams& market, const Criterion& criterion,
                  const OptConfig& opt) {
    ensure_valid(loss, "marrm(loss)");
    ensure_valid(market, "marrm(market)");
    ensure_valid(opt, "marrm(opt)");
    log_stat({0.0, loss.s2}, criterion); // rejects entropic up front

    if (auto dir = arbitrage_direction(market)) {
        SolveResult res;
        res.capital = 0.0;
        res.portfolio.pi = std::move(*dir);
        res.converged = true;
        res.diagnostic = kArbitrageNote;
        return res;
    }

    const auto starts = resolve_starts(opt, market);
    auto objective = [&](const std::vector<double>& pi) {
        return marrm_inner_log(loss, market, Portfolio{pi}, criterion);
    };
    const MultiStartOutcome ms = run_multistart(objective, starts, opt);

    SolveResult res;
    res.capital = std::exp(ms.best.value);
    res.portfolio.pi = ms.best.x;
    res.objective_evals = ms.evals;
    res.converged = ms.converged;
    res.restarts_used = ms.runs;
    return res;
}

double marm_inner(std::span<const double> loss_samples, std::span<const double> wealth_unit_samples,
                  const Criterion& criterion) {
    ensure_valid(criterion, "marm_inner(criterion)");
    std::vector<double> diff;
    return marm_inner_impl(loss_samples, wealth_unit_samples, criterion, diff);
}

SolveResult marm(const LognormalLaw& loss, const MarketParams& market, const Criterion& criterion,
                 const McConfig& mc, const OptConfig& opt) {
    ensure_valid(loss, "marm(loss)");
    ensure_valid(market, "marm(market)");
    ensure_valid(criterion, "marm(criterion)");
    ensure_valid(mc, "marm(mc)");
    ensure_valid(opt, "marm(opt)");
    if (criterion.kind == Criterion::Kind::lnorm)
        throw std::invalid_argument(
            "marm: the L^gamma rule has no additive sample statistic; use var, arar (Expected "
            "Shortfall) or entropic");

    if (auto dir = arbitrage_direction(market)) {
        SolveResult res;
        res.capital = 0.0;
        res.portfolio.pi = std::move(*dir);
        res.converged = true;
        res.diagnostic = kArbitrageNote;
        return res;
    }

    const std::vector<double> x = simulate_loss(loss, mc);
    const std::uint64_t wealth_base = rng::stream_base(mc.seed, rng::Stream::wealth);
    std::vector<double> xi(mc.n_paths);
    for (std::size_t i = 0; i < mc.n_paths; ++i) xi[i] = rng::gaussian_at(wealth_base, i);

    std::vector<double> w(mc.n_paths), diff;
    auto objective = [&](const std::vector<double>& pi) {
        const DriftVol dv = drift_vol(market, Portfolio{pi});
        const double s = std::sqrt(dv.s2);
        for (std::size_t i = 0; i < mc.n_paths; ++i) w[i] = std::exp(dv.a + s * xi[i]);
        return marm_inner_impl(x, w, criterion, diff);
    };

    const auto starts = resolve_starts(opt, market);
    const MultiStartOutcome ms = run_multistart(objective, starts, opt);

    SolveResult res;
    res.capital = ms.best.value;
    res.portfolio.pi = ms.best.x;
    res.objective_evals = ms.evals;
    res.converged = ms.converged;
    res.restarts_used = ms.runs;
    if (criterion.kind == Criterion::Kind::entropic)
        res.diagnostic =
            "entropic Monte Carlo estimate: the population value is +inf for a lognormal loss "
            "independent of the hedge (divergent moment generating function); this number is a "
            "truncation artifact of n_paths=" +
            std::to_string(mc.n_paths) + ", seed=" + std::to_string(mc.seed);
    return res;
}

double empirical_quantile(std::vector<double> values, double lambda) {
    if (values.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("empirical_quantile: lambda must lie in (0,1)");
    return quantile_in_place(values, lambda);
}

double empirical_es(std::vector<double> values, double lambda) {
    if (values.empty()) throw std::invalid_argument("empirical_es: empty sample");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("empirical_es: lambda must lie in (0,1)");
    return es_in_place(values, lambda);
}

double log_mean_exp(std::span<const double> values, double gamma) {
    if (values.empty()) throw std::invalid_argument("log_mean_exp: empty sample");
    double m = -kInf;
    for (double v : values) m = std::max(m, gamma * v);
    double sum = 0.0;
    for (double v : values) sum += std::exp(gamma * v - m);
    return m + std::log(sum / static_cast<double>(values.size()));
}

} // namespace marrm
