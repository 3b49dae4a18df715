#include "marrm/types.hpp"

#include "marrm/constants.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace marrm {

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_finite_vector(const std::vector<double>& v, const char* field,
                         std::vector<Violation>& out) {
    for (double x : v) {
        if (!finite(x)) {
            out.push_back({field, "contains a non-finite entry"});
            return;
        }
    }
}

} // namespace

std::vector<Violation> validate(const LognormalLaw& law) {
    std::vector<Violation> out;
    if (!finite(law.m)) out.push_back({"m", "must be finite"});
    if (!(law.s2 >= 0.0) || !finite(law.s2)) out.push_back({"s2", "must be finite and >= 0"});
    return out;
}

std::vector<Violation> validate(const MarketParams& market) {
    std::vector<Violation> out;
    if (market.d <= 0) out.push_back({"d", "must be a positive integer"});
    if (!(market.T > 0.0) || !finite(market.T)) out.push_back({"T", "must be finite and > 0"});
    if (!finite(market.r)) out.push_back({"r", "must be finite"});
    const auto d = static_cast<std::size_t>(market.d > 0 ? market.d : 0);
    if (market.b.size() != d) out.push_back({"b", "length must equal d"});
    if (market.sigma.size() != d * d) out.push_back({"sigma", "must be a d x d matrix"});
    check_finite_vector(market.b, "b", out);
    check_finite_vector(market.sigma, "sigma", out);
    return out;
}

std::vector<Violation> validate(const Portfolio& portfolio) {
    std::vector<Violation> out;
    check_finite_vector(portfolio.pi, "pi", out);
    return out;
}

std::vector<Violation> validate(const Criterion& criterion) {
    std::vector<Violation> out;
    switch (criterion.kind) {
    case Criterion::Kind::var:
    case Criterion::Kind::arar:
        if (!(criterion.level > 0.0 && criterion.level < 1.0))
            out.push_back({"level", "lambda must lie in (0,1)"});
        break;
    case Criterion::Kind::lnorm:
    case Criterion::Kind::entropic:
        if (!(criterion.level > 0.0) || !finite(criterion.level))
            out.push_back({"level", "gamma must be finite and > 0"});
        break;
    }
    return out;
}

std::vector<Violation> validate(const SolveResult& result) {
    std::vector<Violation> out;
    if (!(result.capital >= 0.0)) out.push_back({"capital", "must be >= 0"});
    if (result.converged && !finite(result.capital))
        out.push_back({"capital", "converged result must be finite"});
    check_finite_vector(result.portfolio.pi, "portfolio", out);
    return out;
}

std::vector<Violation> validate(const FiniteSpace& space) {
    std::vector<Violation> out;
    if (space.probs.empty()) out.push_back({"probs", "must be nonempty"});
    for (double p : space.probs) {
        if (!(p > 0.0) || !finite(p)) {
            out.push_back({"probs", "every atom probability must be finite and > 0"});
            break;
        }
    }
    // Kahan summation keeps the check meaningful for spaces with millions of atoms.
    double sum = 0.0, carry = 0.0;
    for (double p : space.probs) {
        const double y = p - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    if (!space.probs.empty() && std::abs(sum - 1.0) > tol::prob_sum)
        out.push_back({"probs", "must sum to 1 within 1e-12"});
    return out;
}

std::vector<Violation> validate(const FinitePosition& position, const FiniteSpace& space) {
    std::vector<Violation> out;
    if (position.values.size() != space.probs.size())
        out.push_back({"values", "length must match the FiniteSpace"});
    check_finite_vector(position.values, "values", out);
    return out;
}

std::vector<Violation> validate(const GarchParams& params) {
    std::vector<Violation> out;
    if (!finite(params.phi)) out.push_back({"phi", "must be finite"});
    if (!(params.alpha0 > 0.0) || !finite(params.alpha0)) out.push_back({"alpha0", "must be > 0"});
    if (!(params.alpha1 >= 0.0) || !finite(params.alpha1)) out.push_back({"alpha1", "must be >= 0"});
    if (!(params.beta >= 0.0) || !finite(params.beta)) out.push_back({"beta", "must be >= 0"});
    if (finite(params.alpha1) && finite(params.beta) && !(params.alpha1 + params.beta < 1.0))
        out.push_back({"alpha1+beta", "alpha1+beta<1 required for covariance stationarity"});
    return out;
}

void ensure_valid(const std::vector<Violation>& violations, const char* what) {
    if (violations.empty()) return;
    std::string msg = std::string(what) + ": invalid value:";
    for (const auto& v : violations) msg += " [" + v.field + "] " + v.message + ";";
    throw std::invalid_argument(msg);
}

} // namespace marrm
