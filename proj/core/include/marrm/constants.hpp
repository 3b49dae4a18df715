#pragma once

// Numerical tolerances used across the library. Kept in one place so that
// every module and every test pins the same constants.
namespace marrm::tol {

inline constexpr double prob_sum = 1e-12;          // |sum(probs) - 1| allowed
inline constexpr double quantile_abs = 1e-12;      // normal_quantile accuracy target
inline constexpr double bisection_rel = 1e-10;     // inner MARM solve, relative
inline constexpr int bisection_max_iter = 200;
inline constexpr double zero_diffusion = 1e-14;    // s2(pi) below this counts as none
inline constexpr double kernel_pivot = 1e-12;      // rank decisions in the Sigma kernel
inline constexpr double segment_resolution = 1e-3; // S1 discretisation step
inline constexpr double probe_margin = 2e-2;       // relative slack in set-membership scans

// Outer optimizer defaults (see OptConfig).
inline constexpr int nm_max_iter = 2000;
inline constexpr double nm_x_tol = 1e-8;
inline constexpr double nm_f_tol = 1e-10;
inline constexpr int nm_restarts = 3;
inline constexpr double nm_pi_bounds = 10.0;

} // namespace marrm::tol
