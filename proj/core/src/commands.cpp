#include "marrm/commands.hpp"

#include "marrm/csv.hpp"
#include "marrm/finite_lab.hpp"
#include "marrm/lognormal.hpp"
#include "marrm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace marrm::cli {

namespace {

std::string header_block(const char* command, const RunConfig& cfg) {
    cfg.seed(); // every output records its seed, used or not
    std::ostringstream os;
    os << "# command=" << command << "\n";
    for (const auto& line : cfg.resolved_lines()) os << "# " << line << "\n";
    return os.str();
}

Criterion with_level(const Criterion& c, double level) { return {c.kind, level}; }

Criterion marm_counterpart(const Criterion& c) {
    // The additive counterpart of the L^gamma rule is the entropic risk
    // measure at the same gamma; var/arar carry over directly.
    if (c.kind == Criterion::Kind::lnorm) return Criterion::entropic(c.level);
    return c;
}

} // namespace

std::string cmd_sweep(const RunConfig& cfg) {
    const MarketParams market = cfg.market();
    const LognormalLaw loss = cfg.loss();
    const Criterion base = cfg.criterion();
    if (base.kind == Criterion::Kind::entropic)
        throw ConfigError("sweep: criterion.kind=entropic has no closed-form rrm/marrm; "
                          "sweep lnorm and the marm column carries the entropic counterpart");
    const std::vector<double> levels = cfg.grid("grid");
    const OptConfig opt = cfg.opt();
    const bool include_marm = cfg.get_bool("sweep.include_marm", false);
    const McConfig mc = include_marm ? cfg.mc() : McConfig{};

    std::ostringstream rows;
    std::vector<std::string> notes;
    for (double level : levels) {
        const Criterion c = with_level(base, level);
        const double rrm_v = rrm(loss, c, market.r, market.T);
        const SolveResult mres = marrm(loss, market, c, opt);
        if (!mres.diagnostic.empty()) notes.push_back(mres.diagnostic);

        rows << format_real(level) << "," << format_real(rrm_v) << ","
             << format_real(mres.capital);
        SolveResult ares;
        if (include_marm) {
            ares = marm(loss, market, marm_counterpart(c), mc, opt);
            if (!ares.diagnostic.empty()) notes.push_back(ares.diagnostic);
            rows << "," << format_real(ares.capital);
        }
        rows << "," << format_real((rrm_v - mres.capital) / mres.capital);
        if (include_marm)
            rows << "," << format_real((ares.capital - mres.capital) / mres.capital);
        for (double p : mres.portfolio.pi) rows << "," << format_real(p);
        if (include_marm)
            for (double p : ares.portfolio.pi) rows << "," << format_real(p);
        rows << "\n";
    }

    std::ostringstream os;
    os << header_block("sweep", cfg);
    std::sort(notes.begin(), notes.end());
    notes.erase(std::unique(notes.begin(), notes.end()), notes.end());
    for (const auto& n : notes) os << "# note=" << n << "\n";
    os << "level,rrm,marrm";
    if (include_marm) os << ",marm";
    os << ",dev_rrm_marrm";
    if (include_marm) os << ",dev_marm_marrm";
    for (int i = 1; i <= market.d; ++i) os << ",pi_" << i;
    if (include_marm)
        for (int i = 1; i <= market.d; ++i) os << ",marm_pi_" << i;
    os << "\n" << rows.str();
    return os.str();
}

std::string cmd_sensitivity(const RunConfig& cfg) {
    const std::string param = cfg.require_string("sensitivity.param");
    if (param != "sigma22" && param != "sigma12" && param != "loss_sigma")
        throw ConfigError("sensitivity.param must be sigma22|sigma12|loss_sigma, got `" + param +
                          "`");
    const MarketParams base_market = cfg.market();
    if (param != "loss_sigma" && base_market.d != 2)
        throw ConfigError("sensitivity: sigma sweeps assume market.d=2");
    const LognormalLaw base_loss = cfg.loss();
    const Criterion criterion = cfg.criterion();
    const std::vector<double> values = cfg.grid("grid");
    const OptConfig opt = cfg.opt();

    std::ostringstream rows;
    for (double v : values) {
        MarketParams market = base_market;
        LognormalLaw loss = base_loss;
        if (param == "sigma22") {
            market.sigma[3] = v;
        } else if (param == "sigma12") {
            market.sigma[1] = v;
            market.sigma[2] = v;
        } else {
            loss.s2 = v * v;
        }
        const double rrm_v = rrm(loss, criterion, market.r, market.T);
        const SolveResult mres = marrm(loss, market, criterion, opt);
        rows << format_real(v) << "," << format_real(rrm_v) << "," << format_real(mres.capital)
             << "\n";
    }

    std::ostringstream os;
    os << header_block("sensitivity", cfg) << "value,rrm,marrm\n" << rows.str();
    return os.str();
}

namespace {

struct PropertyCheck {
    explicit PropertyCheck(std::string n) : name(std::move(n)) {}
    std::string name;
    bool passed = true;
    std::string detail;
};

using lab::AcceptancePredicate;

// Reference two-stock market used by the solver property checks.
MarketParams reference_market() {
    MarketParams m;
    m.d = 2;
    m.T = 1.0;
    m.r = 0.01;
    m.b = {0.04, 0.08};
    m.sigma = {0.15, -0.1, -0.1, 0.25};
    return m;
}

std::string plane_point(const std::array<double, 2>& p) {
    return "(" + format_real(p[0]) + ", " + format_real(p[1]) + ")";
}

void run_properties(const RunConfig& cfg, std::vector<PropertyCheck>& checks) {
    const std::uint64_t seed = cfg.seed();
    const long trials = cfg.get_int("properties.trials", 100000);
    const long triples = cfg.get_int("properties.triples", 20000);
    const auto n_paths = static_cast<std::size_t>(cfg.get_int("properties.n_paths", 200000));
    const bool inject_es_log = cfg.get_bool("properties.inject_es_log_overflow", false);

    const std::array<double, 2> seg_a{1.0, 1.0};
    const std::array<double, 2> seg_b{0.1, 2.0};
    const auto b_left = AcceptancePredicate::box({1.0, 1.0});
    const auto b_right = AcceptancePredicate::half_spaces(
        {{{1.0, 0.0}, 1.0}, {{3.0, 1.0}, 4.0}}); // x1 <= 1, x2 <= 4 - 3 x1
    const FiniteSpace plane = lab::uniform_space(2);

    // --- acceptance predicates are monotone
    {
        PropertyCheck c("acceptance-monotonicity");
        const FiniteSpace s3 = lab::uniform_space(3);
        const bool ok = lab::monotone_by_sampling(b_left, plane, 1000, seed) &&
                        lab::monotone_by_sampling(b_right, plane, 1000, seed + 1) &&
                        lab::monotone_by_sampling(AcceptancePredicate::mass_rule(), s3, 1000,
                                                  seed + 2) &&
                        lab::monotone_by_sampling(
                            AcceptancePredicate::quantile_rule(0.8, 1.0), s3, 1000, seed + 3);
        if (!ok) {
            c.passed = false;
            c.detail = "a sampled dominated pair broke monotonicity";
        }
        checks.push_back(std::move(c));
    }

    // --- reduction lemma on the worked two-atom geometry
    {
        PropertyCheck c("reduction-identity-example");
        const lab::SecurityGrid s1 = lab::segment_grid(seg_a, seg_b);
        std::vector<double> lambdas;
        for (double l = 1e-3; l <= 4.0 + 1e-12; l += 1e-3) lambdas.push_back(l);
        const FinitePosition x{{1.3, 1.1}};
        const auto res = lab::reduction_check(x, s1, b_left, plane, lambdas);
        if (!(std::abs(res.direct - res.reduced) <= 1e-3 + 1e-12)) {
            c.passed = false;
            c.detail = "direct=" + format_real(res.direct) + " reduced=" + format_real(res.reduced);
        }
        checks.push_back(std::move(c));
    }

    // --- reduction lemma on random three-atom instances
    {
        PropertyCheck c("reduction-identity-random");
        rng::Sequence seq(seed + 10, rng::Stream::trial);
        std::vector<double> lambdas;
        for (double l = 1e-3; l <= 300.0 + 1e-12; l += 1e-3) lambdas.push_back(l);
        for (int inst = 0; inst < 100 && c.passed; ++inst) {
            FiniteSpace space;
            space.probs.resize(3);
            double total = 0.0;
            for (double& p : space.probs) {
                p = 0.05 + seq.uniform();
                total += p;
            }
            for (double& p : space.probs) p /= total;

            std::vector<double> w(3);
            for (double& wi : w) wi = 0.1 + seq.uniform();
            const auto acc = AcceptancePredicate::half_spaces({{w, 0.5 + 2.0 * seq.uniform()}});

            lab::SecurityGrid grid;
            for (int k = 0; k < 5; ++k) {
                FinitePosition z;
                z.values.resize(3);
                for (double& v : z.values) v = 0.2 + 2.8 * seq.uniform();
                grid.payoffs.push_back(std::move(z));
                grid.prices.push_back(1.0);
            }
            FinitePosition x;
            x.values.resize(3);
            for (double& v : x.values) v = 0.2 + 2.8 * seq.uniform();

            const auto res = lab::reduction_check(x, grid, acc, space, lambdas);
            if (!(std::abs(res.direct - res.reduced) <= 1e-3 + 1e-12)) {
                c.passed = false;
                c.detail = "instance " + std::to_string(inst) + ": direct=" +
                           format_real(res.direct) + " reduced=" + format_real(res.reduced);
            }
        }
        checks.push_back(std::move(c));
    }

    // --- convexity probe, both relative acceptance sets
    {
        PropertyCheck c("convexity-probe-left");
        const auto res =
            lab::product_set_convexity_probe(b_left, seg_a, seg_b, {1.0, 1.0}, trials, seed + 20);
        if (!res.convex) {
            c.passed = false;
            c.detail = "unexpected witness: mid=" + plane_point(res.witness->midpoint);
        }
        checks.push_back(std::move(c));
    }
    {
        PropertyCheck c("convexity-probe-right");
        const auto res =
            lab::product_set_convexity_probe(b_right, seg_a, seg_b, {1.0, 4.0}, trials, seed + 21);
        if (res.convex) {
            c.passed = false;
            c.detail = "no witness in " + std::to_string(trials) + " trials";
        } else {
            c.detail = "witness after " + std::to_string(res.trials_run) +
                       " trials: a=" + plane_point(res.witness->a) +
                       " b=" + plane_point(res.witness->b) +
                       " mid=" + plane_point(res.witness->midpoint);
        }
        checks.push_back(std::move(c));
    }

    // --- subadditivity of the brute-force value (convexity linkage)
    {
        auto subadd_witness = [&](const AcceptancePredicate& acc, std::uint64_t s,
                                  std::string& detail) {
            rng::Sequence seq(s, rng::Stream::trial);
            for (long t = 0; t < triples; ++t) {
                FinitePosition x{{0.05 + 2.95 * seq.uniform(), 0.05 + 2.95 * seq.uniform()}};
                FinitePosition y{{0.05 + 2.95 * seq.uniform(), 0.05 + 2.95 * seq.uniform()}};
                const double alpha = seq.uniform();
                FinitePosition mid{{alpha * x.values[0] + (1 - alpha) * y.values[0],
                                    alpha * x.values[1] + (1 - alpha) * y.values[1]}};
                const double vx = lab::segment_marrm(x, seg_a, seg_b, acc);
                const double vy = lab::segment_marrm(y, seg_a, seg_b, acc);
                const double vm = lab::segment_marrm(mid, seg_a, seg_b, acc);
                if (alpha * vx + (1 - alpha) * vy < vm * (1.0 - tol::probe_margin)) {
                    detail = "triple " + std::to_string(t) + ": alpha=" + format_real(alpha) +
                             " value(x)=" + format_real(vx) + " value(y)=" + format_real(vy) +
                             " value(mix)=" + format_real(vm);
                    return true;
                }
            }
            return false;
        };
        PropertyCheck cl("subadditivity-linkage-left");
        std::string detail;
        if (subadd_witness(b_left, seed + 30, detail)) {
            cl.passed = false;
            cl.detail = "unexpected violation: " + detail;
        }
        checks.push_back(std::move(cl));

        PropertyCheck cr("subadditivity-linkage-right");
        if (subadd_witness(b_right, seed + 31, detail)) {
            cr.detail = detail;
        } else {
            cr.passed = false;
            cr.detail = "no subadditivity violation found";
        }
        checks.push_back(std::move(cr));
    }

    // --- Expected-Shortfall-of-log counterexample surface
    {
        PropertyCheck c("es-log-counterexample");
        const bool stabilized = !inject_es_log;
        const auto worked = lab::es_log_counterexample(0.75, 0.5, 100.0, stabilized);
        if (std::abs(worked.f1 - 62.5) > 1e-9 || !(worked.f2 > 99.1)) {
            c.passed = false;
            c.detail = "f1=" + format_real(worked.f1) + " f2=" + format_real(worked.f2);
        }
        for (double a : {0.5, 1.0, 10.0, 100.0, 1000.0}) {
            const auto v = lab::es_log_counterexample(0.75, 0.5, a, stabilized);
            const auto v2 = lab::es_log_counterexample(0.75, 0.5, 2.0 * a, stabilized);
            if (!std::isfinite(v.f2) || v.f2 < 0.0) {
                c.passed = false;
                c.detail = "f2 overflowed or went negative at a=" + format_real(a) +
                           ": f2=" + format_real(v.f2);
                break;
            }
            if (std::abs(v2.f1 - 2.0 * v.f1) > 1e-9 * std::abs(v2.f1)) {
                c.passed = false;
                c.detail = "f1 not linear in a at a=" + format_real(a);
                break;
            }
        }
        checks.push_back(std::move(c));
    }

    // --- entropic dual identity on random five-atom instances
    {
        PropertyCheck c("entropic-dual");
        rng::Sequence seq(seed + 40, rng::Stream::trial);
        for (int inst = 0; inst < 100 && c.passed; ++inst) {
            FiniteSpace space;
            space.probs.resize(5);
            double total = 0.0;
            for (double& p : space.probs) {
                p = 0.05 + seq.uniform();
                total += p;
            }
            for (double& p : space.probs) p /= total;
            FinitePosition x;
            x.values.resize(5);
            for (double& v : x.values) v = 0.1 + 4.9 * seq.uniform();
            const auto res = lab::entropic_dual_check(x, space, 16);
            if (std::abs(res.primal - res.dual) > 1e-10 ||
                res.grid_supremum > res.dual + 1e-6) {
                c.passed = false;
                c.detail = "instance " + std::to_string(inst) + ": primal=" +
                           format_real(res.primal) + " dual=" + format_real(res.dual) +
                           " grid=" + format_real(res.grid_supremum);
            }
        }
        checks.push_back(std::move(c));
    }

    // --- acceptability arbitrage demo (uniform loss, mass rule)
    {
        PropertyCheck c("arbitrage-demo");
        const std::size_t bins = 600000;
        const FinitePosition x = lab::uniform_bin_midpoints(bins);
        const FiniteSpace space = lab::uniform_space(bins);
        const lab::SecurityGrid grid =
            lab::constant_grid({1.0, 0.5, 0.1, 0.01, 1e-3, 1e-4, 1e-5, 9.5e-7}, bins);
        const double v = lab::brute_force_marrm(x, grid, AcceptancePredicate::mass_rule(), space);
        c.detail = "value=" + format_real(v);
        if (!(v < 1e-6)) c.passed = false;
        checks.push_back(std::move(c));
    }

    // --- inf-convolution consistency
    {
        PropertyCheck c("infconv-consistency");
        const lab::SecurityGrid s1 = lab::segment_grid(seg_a, seg_b);
        const FinitePosition x{{1.3, 1.1}};
        const auto geo = lab::infconv_check(x, s1, b_left, plane);
        bool ok = geo.marrm_value == geo.infconv_value;
        rng::Sequence seq(seed + 50, rng::Stream::trial);
        for (int inst = 0; inst < 100 && ok; ++inst) {
            const FiniteSpace space = lab::uniform_space(3);
            lab::SecurityGrid grid;
            for (int k = 0; k < 6; ++k) {
                FinitePosition z;
                z.values = {0.2 + 2.8 * seq.uniform(), 0.2 + 2.8 * seq.uniform(),
                            0.2 + 2.8 * seq.uniform()};
                grid.payoffs.push_back(std::move(z));
                grid.prices.push_back(0.1 + 2.0 * seq.uniform());
            }
            FinitePosition loss{{0.2 + 2.8 * seq.uniform(), 0.2 + 2.8 * seq.uniform(),
                                 0.2 + 2.8 * seq.uniform()}};
            const auto res = lab::infconv_check(
                loss, grid, AcceptancePredicate::quantile_rule(0.7, 1.5), space);
            ok = res.marrm_value == res.infconv_value;
        }
        if (!ok) {
            c.passed = false;
            c.detail = "the two enumeration routes disagreed";
        }
        checks.push_back(std::move(c));
    }

    // --- solver properties on the reference market
    const MarketParams market = reference_market();
    const LognormalLaw loss{1.5, 0.04};
    const std::vector<Criterion> closed_form = {Criterion::var(0.95), Criterion::arar(0.95),
                                                Criterion::lnorm(2.0)};
    {
        PropertyCheck c("solver-dominance");
        for (const auto& crit : closed_form) {
            const double r = rrm(loss, crit, market.r, market.T);
            const SolveResult m = marrm(loss, market, crit);
            if (!(m.capital <= r + tol::nm_f_tol)) {
                c.passed = false;
                c.detail = "marrm=" + format_real(m.capital) + " rrm=" + format_real(r);
                break;
            }
        }
        checks.push_back(std::move(c));
    }
    {
        PropertyCheck c("solver-homogeneity");
        const Portfolio pi{{0.7, -0.3}};
        for (double scale : {0.5, 2.0, 10.0}) {
            for (const auto& crit : closed_form) {
                const double base = marrm_inner(loss, market, pi, crit);
                const LognormalLaw scaled{loss.m + std::log(scale), loss.s2};
                const double lhs = marrm_inner(scaled, market, pi, crit);
                if (std::abs(lhs - scale * base) > 1e-12 * scale * base) {
                    c.passed = false;
                    c.detail = "scale=" + format_real(scale) + " lhs=" + format_real(lhs) +
                               " rhs=" + format_real(scale * base);
                }
            }
        }
        checks.push_back(std::move(c));
    }
    {
        PropertyCheck c("solver-monotonicity");
        const Portfolio pi{{0.4, 0.2}};
        double prev = -1.0;
        for (double mu = 0.5; mu <= 2.5; mu += 0.25) {
            const double v = marrm_inner({mu, 0.04}, market, pi, Criterion::arar(0.95));
            if (!(v > prev)) {
                c.passed = false;
                c.detail = "not strictly increasing at mu=" + format_real(mu);
            }
            prev = v;
        }
        checks.push_back(std::move(c));
    }
    {
        PropertyCheck c("solver-log-star-shape");
        for (const auto& crit : closed_form) {
            const double full = marrm(loss, market, crit).capital;
            for (double alpha : {0.25, 0.5, 0.75}) {
                const LognormalLaw powered{alpha * loss.m, alpha * alpha * loss.s2};
                const double lhs = marrm(powered, market, crit).capital;
                if (!(lhs <= std::pow(full, alpha) + tol::nm_f_tol)) {
                    c.passed = false;
                    c.detail = "alpha=" + format_real(alpha) + " lhs=" + format_real(lhs) +
                               " rhs=" + format_real(std::pow(full, alpha));
                }
            }
        }
        checks.push_back(std::move(c));
    }
    {
        PropertyCheck c("marm-correspondence-var");
        const Criterion crit = Criterion::var(0.95);
        OptConfig mc_opt;
        mc_opt.max_iter = 150;
        mc_opt.x_tol = 1e-6;
        mc_opt.f_tol = 1e-9;
        mc_opt.restarts = 1;
        mc_opt.start_grid = {{1.0, 0.7}};
        const SolveResult closed = marrm(loss, market, crit);
        const SolveResult sampled = marm(loss, market, crit, {n_paths, seed}, mc_opt);
        const DriftVol dv = drift_vol(market, sampled.portfolio);
        const double z = normal_quantile(0.95);
        const double se_rel = std::sqrt(0.95 * 0.05 / static_cast<double>(n_paths)) *
                              std::sqrt(loss.s2 + dv.s2) / normal_pdf(z);
        const double rel = std::abs(sampled.capital - closed.capital) / closed.capital;
        c.detail = "rel=" + format_real(rel) + " bound=" + format_real(3.0 * se_rel);
        if (!(rel <= 3.0 * se_rel)) c.passed = false;
        checks.push_back(std::move(c));
    }
    {
        PropertyCheck c("marm-determinism");
        OptConfig mc_opt;
        mc_opt.max_iter = 60;
        mc_opt.restarts = 1;
        mc_opt.x_tol = 1e-5;
        mc_opt.f_tol = 1e-8;
        const McConfig mc{10000, seed};
        const SolveResult a = marm(loss, market, Criterion::arar(0.9), mc, mc_opt);
        const SolveResult b = marm(loss, market, Criterion::arar(0.9), mc, mc_opt);
        const bool same = a.capital == b.capital && a.portfolio.pi == b.portfolio.pi &&
                          a.objective_evals == b.objective_evals;
        if (!same) {
            c.passed = false;
            c.detail = "two identical runs returned different SolveResults";
        }
        checks.push_back(std::move(c));
    }
}

} // namespace

PropertiesReport cmd_properties(const RunConfig& cfg) {
    std::vector<PropertyCheck> checks;
    run_properties(cfg, checks);

    PropertiesReport report;
    std::ostringstream os;
    int failed = 0;
    std::ostringstream body;
    for (const auto& c : checks) {
        if (c.passed) {
            body << "PASS " << c.name;
            if (!c.detail.empty()) body << " (" << c.detail << ")";
        } else {
            ++failed;
            body << "FAIL " << c.name << ": " << c.detail;
        }
        body << "\n";
    }
    os << header_block("properties", cfg) << body.str();
    os << "SUMMARY: " << (checks.size() - failed) << " passed, " << failed << " failed\n";
    report.text = os.str();
    report.all_passed = failed == 0;
    return report;
}

std::string cmd_empirical(const RunConfig& cfg, const std::vector<PricePoint>& prices) {
    const std::string calib_start = cfg.require_string("empirical.calib_start");
    const std::string calib_end = cfg.require_string("empirical.calib_end");
    const std::string forecast_start = cfg.require_string("empirical.forecast_start");
    const std::string forecast_end = cfg.require_string("empirical.forecast_end");
    for (const auto& d : {calib_start, calib_end, forecast_start, forecast_end})
        if (!iso_day_number(d)) throw ConfigError("empirical: invalid ISO date `" + d + "`");
    if (!(calib_start <= calib_end && calib_end < forecast_start && forecast_start <= forecast_end))
        throw ConfigError("empirical: windows must be disjoint and ordered "
                          "(calib_start <= calib_end < forecast_start <= forecast_end)");

    std::size_t c0 = prices.size(), c1 = 0, f0 = prices.size(), f1 = 0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const auto& d = prices[i].date;
        if (d >= calib_start && d <= calib_end) {
            c0 = std::min(c0, i);
            c1 = std::max(c1, i);
        }
        if (d >= forecast_start && d <= forecast_end) {
            f0 = std::min(f0, i);
            f1 = std::max(f1, i);
        }
    }
    if (c0 >= prices.size()) throw ConfigError("empirical: calibration window holds no prices");
    if (f0 >= prices.size()) throw ConfigError("empirical: forecast window holds no prices");
    if (c1 - c0 < 100)
        throw ConfigError("empirical: insufficient window length, need at least 100 calibration "
                          "returns, got " +
                          std::to_string(c1 - c0));

    std::vector<double> calib_returns(c1 - c0);
    for (std::size_t i = c0; i < c1; ++i)
        calib_returns[i - c0] = std::log(prices[i + 1].price / prices[i].price);

    double mean = 0.0;
    for (double r : calib_returns) mean += r;
    mean /= static_cast<double>(calib_returns.size());
    double var = 0.0;
    for (double r : calib_returns) var += (r - mean) * (r - mean);
    var /= static_cast<double>(calib_returns.size() - 1);

    GarchParams init;
    init.phi = 0.0;
    init.alpha1 = 0.1;
    init.beta = 0.8;
    init.alpha0 = std::max(var * (1.0 - init.alpha1 - init.beta), 1e-12);
    const OptConfig opt = cfg.opt();
    const GarchFit fit = garch_fit(calib_returns, init, opt);

    const std::vector<PricePoint> window(prices.begin() + static_cast<long>(c0),
                                         prices.begin() + static_cast<long>(f1) + 1);
    const std::size_t first_forecast = f0 - c0;

    const MarketParams market = cfg.market();
    const Criterion criterion = cfg.criterion();
    const ForecastTable table =
        rolling_forecast(window, fit, first_forecast, market, criterion, opt);

    std::ostringstream os;
    os << header_block("empirical", cfg);
    os << "# fit.phi=" << format_real(fit.params.phi) << "\n";
    os << "# fit.alpha0=" << format_real(fit.params.alpha0) << "\n";
    os << "# fit.alpha1=" << format_real(fit.params.alpha1) << "\n";
    os << "# fit.beta=" << format_real(fit.params.beta) << "\n";
    os << "# fit.loglik=" << format_real(fit.loglik) << "\n";
    os << "# fit.converged=" << (fit.converged ? "true" : "false") << "\n";
    for (const auto& g : table.gap_notes) os << "# gap=" << g << "\n";
    os << "date,index,rrm,marrm,dev_rrm_index,dev_marrm_index,dev_rrm_marrm";
    for (int i = 1; i <= market.d; ++i) os << ",pi_" << i;
    os << "\n";
    for (const auto& row : table.rows) {
        os << row.date << "," << format_real(row.index) << "," << format_real(row.rrm) << ","
           << format_real(row.marrm) << "," << format_real(row.rrm_vs_index) << ","
           << format_real(row.marrm_vs_index) << "," << format_real(row.rrm_vs_marrm);
        for (double p : row.pi) os << "," << format_real(p);
        os << "\n";
    }
    return os.str();
}

std::string cmd_simulate(const RunConfig& cfg) {
    const GarchParams params = cfg.garch_params();
    const auto n_days = static_cast<std::size_t>(cfg.get_int("simulate.n_days", 1000));
    const std::string start_date = cfg.get_string("simulate.start_date", "2016-01-01");
    const double start_price = cfg.get_real("simulate.start_price", 100.0);
    if (!(start_price > 0.0)) throw ConfigError("simulate.start_price must be > 0");
    const auto day0 = iso_day_number(start_date);
    if (!day0) throw ConfigError("simulate.start_date: invalid ISO date `" + start_date + "`");

    const std::vector<double> returns = garch_simulate(params, n_days, cfg.seed());
    std::vector<PricePoint> prices;
    prices.reserve(n_days + 1);
    prices.push_back({start_date, start_price});
    for (std::size_t t = 0; t < n_days; ++t) {
        prices.push_back({iso_from_day_number(*day0 + static_cast<long>(t) + 1),
                          prices.back().price * std::exp(returns[t])});
    }

    std::vector<std::string> comments{"command=simulate"};
    for (const auto& line : cfg.resolved_lines()) comments.push_back(line);
    return render_price_csv(prices, comments);
}

} // namespace marrm::cli
