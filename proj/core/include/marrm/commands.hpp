#pragma once

#include "marrm/config.hpp"
#include "marrm/garch.hpp"

#include <string>
#include <vector>

namespace marrm::cli {

// Each command renders its complete output file (comment header with the
// resolved configuration, then CSV rows or report lines). Output is a pure
// function of (config, seed): repeated runs are byte-identical.

// One row per grid level: rrm, marrm and optionally the Monte Carlo marm
// (var -> var, arar -> Expected Shortfall, lnorm -> entropic counterpart).
std::string cmd_sweep(const RunConfig& cfg);

// Sweep one parameter (sigma22, sigma12 or loss_sigma) at a fixed criterion.
std::string cmd_sensitivity(const RunConfig& cfg);

// Finite-lab and solver property suites; exits nonzero via all_passed=false.
struct PropertiesReport {
    std::string text;
    bool all_passed = true;
};
PropertiesReport cmd_properties(const RunConfig& cfg);

// Calibrate on one window, roll one-day-ahead forecasts over the other.
std::string cmd_empirical(const RunConfig& cfg, const std::vector<PricePoint>& prices);

// Synthetic price CSV from simulated AR(1)-GARCH(1,1) log-returns.
std::string cmd_simulate(const RunConfig& cfg);

} // namespace marrm::cli
