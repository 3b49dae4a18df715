#pragma once

#include "marrm/constants.hpp"
#include "marrm/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

// Brute-force verification lab on finite probability spaces: everything here
// is enumeration or sampling, no optimizer involved.
namespace marrm::lab {

// One linear constraint sum_i weights[i] * y_i <= bound with nonnegative
// weights (nonnegativity keeps the acceptance set monotone).
struct HalfSpace {
    std::vector<double> weights;
    double bound = 1.0;
};

// Monotone acceptance rule on strictly positive finite positions. Four
// concrete shapes cover every configuration used by the lab.
class AcceptancePredicate {
public:
    enum class Kind { quantile, box, mass, half_spaces };

    // left quantile of Y at `level` is <= `threshold`
    static AcceptancePredicate quantile_rule(double level, double threshold);
    // y_i <= upper[i] for every atom
    static AcceptancePredicate box(std::vector<double> upper);
    // P(Y <= 1) > 0
    static AcceptancePredicate mass_rule();
    // every half-space constraint holds
    static AcceptancePredicate half_spaces(std::vector<HalfSpace> constraints);

    bool accepts(const FinitePosition& y, const FiniteSpace& space) const;

    // Smallest lambda > 0 with y/lambda accepted; by positive homogeneity of
    // all four shapes this is exact (threshold/bounds must be positive).
    double scaling_factor(const FinitePosition& y, const FiniteSpace& space) const;

    Kind kind() const { return kind_; }

private:
    Kind kind_ = Kind::box;
    double level_ = 0.0;
    double threshold_ = 0.0;
    std::vector<double> upper_;
    std::vector<HalfSpace> constraints_;
};

// Samples dominated pairs Y <= X and reports whether accepted(X) always
// implied accepted(Y).
bool monotone_by_sampling(const AcceptancePredicate& acc, const FiniteSpace& space, int trials,
                          std::uint64_t seed);

// Finitely many strictly positive payoffs with strictly positive prices.
struct SecurityGrid {
    std::vector<FinitePosition> payoffs;
    std::vector<double> prices;

    std::size_t size() const { return payoffs.size(); }
};

// min { price(Z) : Z in grid, X/Z accepted }, +inf when nothing is acceptable.
double brute_force_marrm(const FinitePosition& loss, const SecurityGrid& grid,
                         const AcceptancePredicate& acc, const FiniteSpace& space);

// Two independent enumerations of the same infimum over a unit-price grid
// S1: `direct` scans (lambda, Z) pairs for acc(X/(lambda Z)), `reduced` scans
// lambda and decides membership of X/lambda in B*S1 by a scan over Z.
struct ReductionResult {
    double direct = 0.0;
    double reduced = 0.0;
};
ReductionResult reduction_check(const FinitePosition& loss, const SecurityGrid& unit_grid,
                                const AcceptancePredicate& acc, const FiniteSpace& space,
                                const std::vector<double>& lambda_grid);

// Random midpoint test of the convexity of B*S1 on a two-atom space. Points
// are sampled as products (region sample) * (segment sample); membership of a
// midpoint is decided by scanning the segment after shrinking the point by
// (1+margin) — monotonicity of B*S1 makes the shrunk test one-sided, so a
// reported witness is a genuine violation and never a discretisation artifact.
struct ConvexityWitness {
    std::array<double, 2> a{};
    std::array<double, 2> b{};
    std::array<double, 2> midpoint{};
};
struct ProbeResult {
    bool convex = true;
    std::optional<ConvexityWitness> witness;
    long trials_run = 0;
};
ProbeResult product_set_convexity_probe(const AcceptancePredicate& region,
                                        std::array<double, 2> segment_a,
                                        std::array<double, 2> segment_b,
                                        std::array<double, 2> sample_caps, long trials,
                                        std::uint64_t seed, double margin = tol::probe_margin);

// The Expected-Shortfall-of-log counterexample surface:
//   f1 = a (1 - lambda x)
//   f2 = (1-x) log(lambda e^a + 1-lambda) + x log((1-lambda) e^a + lambda)
// computed with log-sum-exp stabilisation. `stabilized = false` is a fault
// hook that evaluates the naive formula (overflows for large a).
struct EsLogValues {
    double f1 = 0.0;
    double f2 = 0.0;
};
EsLogValues es_log_counterexample(double lambda, double x, double a, bool stabilized = true);

// Entropic dual identity on a finite space: E[X] equals
// exp(E[Y* log X] - E[Y* log Y*]) with Y* = X/E[X], and no density on a
// simplex grid does better. grid_subdivisions is the resolution of that grid.
struct EntropicDualResult {
    double primal = 0.0;
    double dual = 0.0;
    FinitePosition optimal_density;
    double grid_supremum = 0.0;
};
EntropicDualResult entropic_dual_check(const FinitePosition& x, const FiniteSpace& space,
                                       int grid_subdivisions);

// The multiplicative inf-convolution route min { price(V) : X = Y V, Y
// accepted } against the direct MARRM enumeration; both scan the same grid.
struct InfconvResult {
    double marrm_value = 0.0;
    double infconv_value = 0.0;
};
InfconvResult infconv_check(const FinitePosition& loss, const SecurityGrid& grid,
                            const AcceptancePredicate& acc, const FiniteSpace& space);

// Exact MARRM over a discretised segment of unit-price payoffs on a two-atom
// space: min over segment points z of the scaling factor of X/z. Used for the
// subadditivity cross-check of the convexity probe.
double segment_marrm(const FinitePosition& loss, std::array<double, 2> segment_a,
                     std::array<double, 2> segment_b, const AcceptancePredicate& acc,
                     double resolution = tol::segment_resolution);

// Builders.
FiniteSpace uniform_space(std::size_t n);
// Midpoints of `bins` equal-width bins on (0,1).
FinitePosition uniform_bin_midpoints(std::size_t bins);
// Constant payoffs Z = m with price m, one per level, on n_atoms atoms.
SecurityGrid constant_grid(const std::vector<double>& levels, std::size_t n_atoms);
// S1 segment between two positive plane points discretised at `resolution`,
// every payoff priced 1.
SecurityGrid segment_grid(std::array<double, 2> a, std::array<double, 2> b,
                          double resolution = tol::segment_resolution);

} // namespace marrm::lab
