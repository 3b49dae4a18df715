#include "marrm/market.hpp"

#include "marrm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace marrm {

std::vector<Violation> validate(const McConfig& mc) {
    std::vector<Violation> out;
    if (mc.n_paths < 2) out.push_back({"n_paths", "must be >= 2"});
    return out;
}

std::vector<double> simulate_terminal_wealth(const MarketParams& market, const Portfolio& portfolio,
                                             double x0, const McConfig& mc) {
    ensure_valid(mc, "simulate_terminal_wealth(mc)");
    if (!(x0 > 0.0)) throw std::domain_error("simulate_terminal_wealth: x0 must be > 0");
    const DriftVol dv = drift_vol(market, portfolio);
    const double s = std::sqrt(dv.s2);
    const std::uint64_t base = rng::stream_base(mc.seed, rng::Stream::wealth);

    std::vector<double> out(mc.n_paths);
    if (s == 0.0) {
        const double w = x0 * std::exp(dv.a);
        for (auto& v : out) v = w;
        return out;
    }
    for (std::size_t i = 0; i < mc.n_paths; ++i)
        out[i] = x0 * std::exp(dv.a + s * rng::gaussian_at(base, i));
    return out;
}

std::vector<double> simulate_loss(const LognormalLaw& loss, const McConfig& mc) {
    ensure_valid(loss, "simulate_loss(loss)");
    ensure_valid(mc, "simulate_loss(mc)");
    const double s = std::sqrt(loss.s2);
    const std::uint64_t base = rng::stream_base(mc.seed, rng::Stream::loss);

    std::vector<double> out(mc.n_paths);
    if (s == 0.0) {
        const double v0 = std::exp(loss.m);
        for (auto& v : out) v = v0;
        return out;
    }
    for (std::size_t i = 0; i < mc.n_paths; ++i)
        out[i] = std::exp(loss.m + s * rng::gaussian_at(base, i));
    return out;
}

} // namespace marrm
