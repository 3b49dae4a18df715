#pragma once

#include "marrm/lognormal.hpp"
#include "marrm/types.hpp"

#include <cstdint>
#include <vector>

namespace marrm {

struct McConfig {
    std::size_t n_paths = 200000;
    std::uint64_t seed = 12345;
};

std::vector<Violation> validate(const McConfig& mc);

// Terminal wealth samples x0 * exp(a(pi) + sqrt(s2(pi)) * xi_i) with xi_i
// standard Gaussians drawn from the wealth stream of mc.seed. Sample i
// depends only on (seed, i).
std::vector<double> simulate_terminal_wealth(const MarketParams& market, const Portfolio& portfolio,
                                             double x0, const McConfig& mc);

// I.i.d. lognormal loss samples from a stream independent of the wealth
// stream under the same master seed.
std::vector<double> simulate_loss(const LognormalLaw& loss, const McConfig& mc);

} // namespace marrm
