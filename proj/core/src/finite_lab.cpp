#include "marrm/finite_lab.hpp"

#include "marrm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace marrm::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(const FinitePosition& p, const char* what) {
    for (double v : p.values)
        if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + ": values must be > 0");
}

void check_grid(const SecurityGrid& grid, const FiniteSpace& space) {
    if (grid.payoffs.size() != grid.prices.size())
        throw std::invalid_argument("SecurityGrid: payoffs and prices must align");
    for (const auto& z : grid.payoffs) {
        ensure_valid(validate(z, space), "SecurityGrid payoff");
        require_positive(z, "SecurityGrid payoff");
    }
    for (double p : grid.prices)
        if (!(p > 0.0)) throw std::invalid_argument("SecurityGrid: prices must be > 0");
}

// Left quantile of a finite-space position: smallest v with P(Y <= v) >= level.
double left_quantile(const FinitePosition& y, const FiniteSpace& space, double level) {
    const std::size_t n = y.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return y.values[a] < y.values[b]; });
    double cum = 0.0;
    for (std::size_t i : order) {
        cum += space.probs[i];
        if (cum >= level - 1e-15) return y.values[i];
    }
    return y.values[order.back()];
}

// log(p e^a + q) without overflow, p, q > 0.
double log_sum_exp2(double p, double a, double q) {
    const double m = std::max(a, 0.0);
    return m + std::log(p * std::exp(a - m) + q * std::exp(-m));
}

std::array<double, 2> segment_point(std::array<double, 2> a, std::array<double, 2> b, double t) {
    return {t * a[0] + (1.0 - t) * b[0], t * a[1] + (1.0 - t) * b[1]};
}

} // namespace

AcceptancePredicate AcceptancePredicate::quantile_rule(double level, double threshold) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("quantile_rule: level must lie in (0,1)");
    if (!(threshold > 0.0)) throw std::invalid_argument("quantile_rule: threshold must be > 0");
    AcceptancePredicate p;
    p.kind_ = Kind::quantile;
    p.level_ = level;
    p.threshold_ = threshold;
    return p;
}

AcceptancePredicate AcceptancePredicate::box(std::vector<double> upper) {
    for (double u : upper)
        if (!(u > 0.0)) throw std::invalid_argument("box: upper bounds must be > 0");
    AcceptancePredicate p;
    p.kind_ = Kind::box;
    p.upper_ = std::move(upper);
    return p;
}

AcceptancePredicate AcceptancePredicate::mass_rule() {
    AcceptancePredicate p;
    p.kind_ = Kind::mass;
    return p;
}

AcceptancePredicate AcceptancePredicate::half_spaces(std::vector<HalfSpace> constraints) {
    if (constraints.empty()) throw std::invalid_argument("half_spaces: need at least one constraint");
    for (const auto& h : constraints) {
        if (!(h.bound > 0.0)) throw std::invalid_argument("half_spaces: bounds must be > 0");
        for (double w : h.weights)
            if (!(w >= 0.0)) throw std::invalid_argument("half_spaces: weights must be >= 0");
    }
    AcceptancePredicate p;
    p.kind_ = Kind::half_spaces;
    p.constraints_ = std::move(constraints);
    return p;
}

bool AcceptancePredicate::accepts(const FinitePosition& y, const FiniteSpace& space) const {
    switch (kind_) {
    case Kind::quantile:
        return left_quantile(y, space, level_) <= threshold_;
    case Kind::box: {
        if (y.size() != upper_.size())
            throw std::invalid_argument("box predicate: dimension mismatch");
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y.values[i] > upper_[i]) return false;
        return true;
    }
    case Kind::mass:
        for (double v : y.values)
            if (v <= 1.0) return true;
        return false;
    case Kind::half_spaces:
        for (const auto& h : constraints_) {
            if (h.weights.size() != y.size())
                throw std::invalid_argument("half_space predicate: dimension mismatch");
            double s = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) s += h.weights[i] * y.values[i];
            if (s > h.bound) return false;
        }
        return true;
    }
    throw std::logic_error("accepts: unreachable");
}

double AcceptancePredicate::scaling_factor(const FinitePosition& y, const FiniteSpace& space) const {
    switch (kind_) {
    case Kind::quantile:
        return left_quantile(y, space, level_) / threshold_;
    case Kind::box: {
        if (y.size() != upper_.size())
            throw std::invalid_argument("box predicate: dimension mismatch");
        double lam = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) lam = std::max(lam, y.values[i] / upper_[i]);
        return lam;
    }
    case Kind::mass: {
        double lam = kInf;
        for (double v : y.values) lam = std::min(lam, v);
        return lam;
    }
    case Kind::half_spaces: {
        double lam = 0.0;
        for (const auto& h : constraints_) {
            double s = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) s += h.weights[i] * y.values[i];
            lam = std::max(lam, s / h.bound);
        }
        return lam;
    }
    }
    throw std::logic_error("scaling_factor: unreachable");
}

bool monotone_by_sampling(const AcceptancePredicate& acc, const FiniteSpace& space, int trials,
                          std::uint64_t seed) {
    const std::size_t n = space.size();
    rng::Sequence seq(seed, rng::Stream::trial);
    FinitePosition x, y;
    x.values.resize(n);
    y.values.resize(n);
    for (int t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            x.values[i] = 0.05 + 3.0 * seq.uniform();
            y.values[i] = x.values[i] * seq.uniform();
        }
        if (acc.accepts(x, space) && !acc.accepts(y, space)) return false;
    }
    return true;
}

double brute_force_marrm(const FinitePosition& loss, const SecurityGrid& grid,
                         const AcceptancePredicate& acc, const FiniteSpace& space) {
    ensure_valid(space, "brute_force_marrm(space)");
    ensure_valid(validate(loss, space), "brute_force_marrm(loss)");
    require_positive(loss, "brute_force_marrm(loss)");
    check_grid(grid, space);

    const std::size_t n = loss.size();
    FinitePosition ratio;
    ratio.values.resize(n);
    double best = kInf;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.prices[k] >= best) continue;
        for (std::size_t i = 0; i < n; ++i)
            ratio.values[i] = loss.values[i] / grid.payoffs[k].values[i];
        if (acc.accepts(ratio, space)) best = grid.prices[k];
    }
    return best;
}

ReductionResult reduction_check(const FinitePosition& loss, const SecurityGrid& unit_grid,
                                const AcceptancePredicate& acc, const FiniteSpace& space,
                                const std::vector<double>& lambda_grid) {
    ensure_valid(space, "reduction_check(space)");
    ensure_valid(validate(loss, space), "reduction_check(loss)");
    require_positive(loss, "reduction_check(loss)");
    check_grid(unit_grid, space);
    for (double p : unit_grid.prices)
        if (p != 1.0)
            throw std::invalid_argument("reduction_check: the grid must hold unit-price payoffs");
    if (lambda_grid.empty()) throw std::invalid_argument("reduction_check: empty lambda grid");

    std::vector<double> lambdas = lambda_grid;
    std::sort(lambdas.begin(), lambdas.end());
    for (double l : lambdas)
        if (!(l > 0.0)) throw std::invalid_argument("reduction_check: lambdas must be > 0");

    const std::size_t n = loss.size();
    FinitePosition ratio;
    ratio.values.resize(n);

    ReductionResult out{kInf, kInf};

    // route 1: scan (lambda, Z) pairs
    for (double lam : lambdas) {
        bool hit = false;
        for (const auto& z : unit_grid.payoffs) {
            for (std::size_t i = 0; i < n; ++i) ratio.values[i] = loss.values[i] / (lam * z.values[i]);
            if (acc.accepts(ratio, space)) {
                hit = true;
                break;
            }
        }
        if (hit) {
            out.direct = lam;
            break;
        }
    }

    // route 2: scan lambda, membership of X/lambda in B*S1 by a scan over Z
    for (double lam : lambdas) {
        bool member = false;
        for (const auto& z : unit_grid.payoffs) {
            for (std::size_t i = 0; i < n; ++i)
                ratio.values[i] = (loss.values[i] / lam) / z.values[i];
            if (acc.accepts(ratio, space)) {
                member = true;
                break;
            }
        }
        if (member) {
            out.reduced = lam;
            break;
        }
    }
    return out;
}

ProbeResult product_set_convexity_probe(const AcceptancePredicate& region,
                                        std::array<double, 2> segment_a,
                                        std::array<double, 2> segment_b,
                                        std::array<double, 2> sample_caps, long trials,
                                        std::uint64_t seed, double margin) {
    if (!(segment_a[0] > 0.0 && segment_a[1] > 0.0 && segment_b[0] > 0.0 && segment_b[1] > 0.0))
        throw std::invalid_argument("convexity probe: segment endpoints must be positive");
    if (!(margin > 0.0)) throw std::invalid_argument("convexity probe: margin must be > 0");

    const FiniteSpace plane = uniform_space(2);
    const auto steps = static_cast<std::size_t>(std::lround(1.0 / tol::segment_resolution));

    FinitePosition ratio;
    ratio.values.resize(2);
    auto member = [&](const std::array<double, 2>& p) {
        const double m0 = p[0] / (1.0 + margin);
        const double m1 = p[1] / (1.0 + margin);
        for (std::size_t k = 0; k <= steps; ++k) {
            const auto z = segment_point(segment_a, segment_b,
                                         static_cast<double>(k) / static_cast<double>(steps));
            ratio.values[0] = m0 / z[0];
            ratio.values[1] = m1 / z[1];
            if (region.accepts(ratio, plane)) return true;
        }
        return false;
    };

    rng::Sequence seq(seed, rng::Stream::trial);
    auto sample_region = [&]() -> std::array<double, 2> {
        for (int tries = 0; tries < 100000; ++tries) {
            const std::array<double, 2> p{sample_caps[0] * seq.uniform(),
                                          sample_caps[1] * seq.uniform()};
            ratio.values[0] = p[0];
            ratio.values[1] = p[1];
            if (region.accepts(ratio, plane)) return p;
        }
        throw std::runtime_error("convexity probe: could not sample the region inside the caps");
    };

    ProbeResult out;
    for (long t = 0; t < trials; ++t) {
        out.trials_run = t + 1;
        const auto b1 = sample_region();
        const auto z1 = segment_point(segment_a, segment_b, seq.uniform());
        const auto b2 = sample_region();
        const auto z2 = segment_point(segment_a, segment_b, seq.uniform());
        const std::array<double, 2> u{b1[0] * z1[0], b1[1] * z1[1]};
        const std::array<double, 2> v{b2[0] * z2[0], b2[1] * z2[1]};
        const std::array<double, 2> mid{0.5 * (u[0] + v[0]), 0.5 * (u[1] + v[1])};
        if (!member(mid)) {
            out.convex = false;
            out.witness = ConvexityWitness{u, v, mid};
            return out;
        }
    }
    out.convex = true;
    return out;
}

EsLogValues es_log_counterexample(double lambda, double x, double a, bool stabilized) {
    if (!(lambda > 0.5 && lambda < 1.0))
        throw std::domain_error("es_log_counterexample: lambda must lie in (1/2, 1)");
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("es_log_counterexample: x must lie in (0,1)");
    if (!(a > 0.0)) throw std::domain_error("es_log_counterexample: a must be > 0");

    EsLogValues out;
    out.f1 = a * (1.0 - lambda * x);
    if (stabilized) {
        out.f2 = (1.0 - x) * log_sum_exp2(lambda, a, 1.0 - lambda) +
                 x * log_sum_exp2(1.0 - lambda, a, lambda);
    } else {
        out.f2 = (1.0 - x) * std::log(lambda * std::exp(a) + 1.0 - lambda) +
                 x * std::log((1.0 - lambda) * std::exp(a) + lambda);
    }
    return out;
}

EntropicDualResult entropic_dual_check(const FinitePosition& x, const FiniteSpace& space,
                                       int grid_subdivisions) {
    ensure_valid(space, "entropic_dual_check(space)");
    ensure_valid(validate(x, space), "entropic_dual_check(x)");
    require_positive(x, "entropic_dual_check(x)");
    if (grid_subdivisions < 1)
        throw std::invalid_argument("entropic_dual_check: grid_subdivisions must be >= 1");

    const std::size_t n = x.size();
    EntropicDualResult out;
    for (std::size_t i = 0; i < n; ++i) out.primal += space.probs[i] * x.values[i];

    out.optimal_density.values.resize(n);
    double exponent = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = x.values[i] / out.primal;
        out.optimal_density.values[i] = y;
        exponent += space.probs[i] * y * (std::log(x.values[i]) - std::log(y));
    }
    out.dual = std::exp(exponent);

    // Grid search over densities: masses w_i = j_i / k on the simplex, density
    // values y_i = w_i / p_i, objective sum w_i log x_i - sum w_i log(w_i/p_i).
    std::vector<double> log_x(n);
    for (std::size_t i = 0; i < n; ++i) log_x[i] = std::log(x.values[i]);
    const int k = grid_subdivisions;
    double best = -kInf;
    std::vector<int> counts(n, 0);
    // enumerate compositions of k into n parts
    auto value_of = [&]() {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (counts[i] == 0) continue;
            const double w = static_cast<double>(counts[i]) / k;
            v += w * log_x[i] - w * std::log(w / space.probs[i]);
        }
        return v;
    };
    const std::function<void(std::size_t, int)> walk = [&](std::size_t i, int remaining) {
        if (i == n - 1) {
            counts[i] = remaining;
            best = std::max(best, value_of());
            counts[i] = 0;
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[i] = c;
            walk(i + 1, remaining - c);
        }
        counts[i] = 0;
    };
    walk(0, k);
    out.grid_supremum = std::exp(best);
    return out;
}

InfconvResult infconv_check(const FinitePosition& loss, const SecurityGrid& grid,
                            const AcceptancePredicate& acc, const FiniteSpace& space) {
    InfconvResult out;
    out.marrm_value = brute_force_marrm(loss, grid, acc, space);

    const std::size_t n = loss.size();
    FinitePosition factor;
    factor.values.resize(n);
    double best = kInf;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i)
            factor.values[i] = loss.values[i] / grid.payoffs[k].values[i];
        if (acc.accepts(factor, space)) best = std::min(best, grid.prices[k]);
    }
    out.infconv_value = best;
    return out;
}

double segment_marrm(const FinitePosition& loss, std::array<double, 2> segment_a,
                     std::array<double, 2> segment_b, const AcceptancePredicate& acc,
                     double resolution) {
    if (loss.size() != 2) throw std::invalid_argument("segment_marrm: two-atom positions only");
    require_positive(loss, "segment_marrm(loss)");
    const FiniteSpace plane = uniform_space(2);
    const auto steps = static_cast<std::size_t>(std::lround(1.0 / resolution));
    FinitePosition ratio;
    ratio.values.resize(2);
    double best = kInf;
    for (std::size_t k = 0; k <= steps; ++k) {
        const auto z = segment_point(segment_a, segment_b,
                                     static_cast<double>(k) / static_cast<double>(steps));
        ratio.values[0] = loss.values[0] / z[0];
        ratio.values[1] = loss.values[1] / z[1];
        best = std::min(best, acc.scaling_factor(ratio, plane));
    }
    return best;
}

FiniteSpace uniform_space(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_space: n must be >= 1");
    FiniteSpace s;
    s.probs.assign(n, 1.0 / static_cast<double>(n));
    return s;
}

FinitePosition uniform_bin_midpoints(std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("uniform_bin_midpoints: bins must be >= 1");
    FinitePosition p;
    p.values.resize(bins);
    for (std::size_t k = 0; k < bins; ++k)
        p.values[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(bins);
    return p;
}

SecurityGrid constant_grid(const std::vector<double>& levels, std::size_t n_atoms) {
    SecurityGrid g;
    for (double m : levels) {
        if (!(m > 0.0)) throw std::invalid_argument("constant_grid: levels must be > 0");
        FinitePosition z;
        z.values.assign(n_atoms, m);
        g.payoffs.push_back(std::move(z));
        g.prices.push_back(m);
    }
    return g;
}

SecurityGrid segment_grid(std::array<double, 2> a, std::array<double, 2> b, double resolution) {
    if (!(resolution > 0.0 && resolution <= 1.0))
        throw std::invalid_argument("segment_grid: resolution must lie in (0,1]");
    const auto steps = static_cast<std::size_t>(std::lround(1.0 / resolution));
    SecurityGrid g;
    for (std::size_t k = 0; k <= steps; ++k) {
        const auto z = segment_point(a, b, static_cast<double>(k) / static_cast<double>(steps));
        FinitePosition p;
        p.values = {z[0], z[1]};
        g.payoffs.push_back(std::move(p));
        g.prices.push_back(1.0);
    }
    return g;
}

} // namespace marrm::lab
