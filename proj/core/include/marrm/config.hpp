#pragma once

#include "marrm/market.hpp"
#include "marrm/solver.hpp"
#include "marrm/types.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace marrm::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key=value run configuration. `#` lines are comments, nested structure
// uses dotted keys (market.sigma.1.2=-0.1). Unknown and duplicate keys are
// rejected with their line number. Every accessor records the value it
// resolved (explicit or default), so a run can echo its full configuration.
class RunConfig {
public:
    static RunConfig from_string(const std::string& text, const std::string& name = "<config>");
    static RunConfig from_file(const std::string& path);

    // Command-line overrides (e.g. --seed).
    void override_key(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_real(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;

    // Level grid: either a comma list `0.8,0.9` or `start:stop:step`
    // (inclusive). An empty value is an empty grid.
    std::vector<double> grid(const std::string& key) const;

    std::uint64_t seed() const;
    MarketParams market() const;
    LognormalLaw loss() const;
    Criterion criterion() const;
    McConfig mc() const;
    OptConfig opt() const;
    GarchParams garch_params() const;

    // Sorted `key=value` lines of everything this run resolved.
    std::vector<std::string> resolved_lines() const;

private:
    std::string raw(const std::string& key, const std::string& fallback) const;
    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, std::string> used_;
};

} // namespace marrm::cli
