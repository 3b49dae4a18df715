#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace marrm {

// Parameters (m, s2) of a lognormal law: log K ~ N(m, s2). s2 = 0 is the
// point mass at exp(m).
struct LognormalLaw {
    double m = 0.0;
    double s2 = 0.0;
};

// Multivariate Black-Scholes market: d stocks, horizon T in years, riskless
// rate r, drift vector b and volatility loading matrix sigma (row-major d*d).
// The log-return covariance of the stocks is sigma * sigma^T.
struct MarketParams {
    int d = 0;
    double T = 1.0;
    double r = 0.0;
    std::vector<double> b;
    std::vector<double> sigma;

    double sigma_at(int i, int j) const { return sigma[static_cast<std::size_t>(i) * d + j]; }
};

// Constant portfolio process: pi[i] is the fraction of wealth held in stock i,
// the bank account takes 1 - sum(pi). Short positions are allowed; any box
// constraint is solver configuration, not part of the type.
struct Portfolio {
    std::vector<double> pi;
};

// Acceptability rule for a relative loss K = X/Z, parameterised by a level.
//   var(lambda):      exp(q^-_{log K}(lambda)) <= 1
//   arar(lambda):     exponential of the Expected Shortfall of log K <= 1
//   lnorm(gamma):     E[K^gamma]^(1/gamma) <= 1
//   entropic(gamma):  log E[exp(gamma * Y)] <= 0 on the additive scale; only
//                     meaningful for the Monte Carlo (MARM) path.
// In the additive MARM setting the arar tag stands for the Expected Shortfall
// of X - Z itself.
struct Criterion {
    enum class Kind { var, arar, lnorm, entropic };
    Kind kind = Kind::var;
    double level = 0.95;

    static Criterion var(double lambda) { return {Kind::var, lambda}; }
    static Criterion arar(double lambda) { return {Kind::arar, lambda}; }
    static Criterion lnorm(double gamma) { return {Kind::lnorm, gamma}; }
    static Criterion entropic(double gamma) { return {Kind::entropic, gamma}; }
};

// Outcome of a capital minimisation. `capital` is the minimal initial wealth,
// `portfolio` the minimiser. `diagnostic` is empty for a clean solve; it
// carries the acceptability-arbitrage note for degenerate markets and the
// divergence warning for entropic Monte Carlo values.
struct SolveResult {
    double capital = 0.0;
    Portfolio portfolio;
    long objective_evals = 0;
    bool converged = false;
    int restarts_used = 0;
    std::string diagnostic;
};

// Finite probability space: strictly positive atom probabilities summing to 1.
struct FiniteSpace {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
};

// A random variable on a FiniteSpace, one value per atom.
struct FinitePosition {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

// AR(1)-GARCH(1,1) parameters for log-returns:
//   r_t = phi * r_{t-1} + sigma_t z_t,
//   sigma_t^2 = alpha0 + alpha1 * (sigma_{t-1} z_{t-1})^2 + beta * sigma_{t-1}^2.
struct GarchParams {
    double phi = 0.0;
    double alpha0 = 1e-6;
    double alpha1 = 0.0;
    double beta = 0.0;

    double unconditional_variance() const { return alpha0 / (1.0 - alpha1 - beta); }
};

// One violated invariant; violations are data, not failures.
struct Violation {
    std::string field;
    std::string message;
};

std::vector<Violation> validate(const LognormalLaw& law);
std::vector<Violation> validate(const MarketParams& market);
std::vector<Violation> validate(const Portfolio& portfolio);
std::vector<Violation> validate(const Criterion& criterion);
std::vector<Violation> validate(const SolveResult& result);
std::vector<Violation> validate(const FiniteSpace& space);
std::vector<Violation> validate(const FinitePosition& position, const FiniteSpace& space);
std::vector<Violation> validate(const GarchParams& params);

// Throws std::invalid_argument listing every violation.
void ensure_valid(const std::vector<Violation>& violations, const char* what);

template <typename T>
void ensure_valid(const T& value, const char* what) {
    ensure_valid(validate(value), what);
}

} // namespace marrm
