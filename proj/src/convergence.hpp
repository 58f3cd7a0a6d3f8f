#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schemes.hpp"

namespace jumpmil {

struct LevelErrors {
    double p = 2.0;
    std::vector<int> levels;
    std::vector<double> deltas;      // T * 2^{-k}
    std::vector<double> errors;      // error(k)
    std::vector<double> std_errors;  // delta-method MC standard errors
    std::uint64_t n_paths = 0;
    std::uint64_t aborted_paths = 0;
};

struct ConvergenceReport {
    LevelErrors level_errors;
    double fitted_slope = 0.0;
    double slope_std_error = 0.0;
    double theoretical_rate = 0.0;
    bool slope_defined = false;  // false when too few non-degenerate levels
    int zero_error_levels = 0;   // levels excluded from the log fit
    SchemeKind scheme = SchemeKind::EulerMaruyama;
    std::string problem_name;
};

// error = mean(|fine_i - coarse_i|^p)^{1/p} over coupled paths, with the
// delta-method standard error of the p-th-root estimator.
std::pair<double, double> successive_error(std::span<const double> terminal_fine,
                                           std::span<const double> terminal_coarse, double p);

// Same estimator against exact terminal values.
std::pair<double, double> exact_error(std::span<const double> terminal_numeric,
                                      std::span<const double> terminal_exact, double p);

// Ordinary least squares of log2(error) on log2(delta); returns (slope,
// standard error of the slope). Needs >= 3 finite points.
std::pair<double, double> fit_slope(std::span<const double> log_deltas,
                                    std::span<const double> log_errors);

enum class RateVariant {
    Jump,               // min{2/p, rho1 + 1/p, rho2, rho3}
    JumpFree,           // min{rho1 + 1/2, rho2}
    ClassicalMilstein,  // min{2/p, rho1, rho2, rho3}
};

// Theoretical strong convergence rate. p in [1,2) maps to the p = 2 rate;
// exponents must lie in (0, 1].
double theoretical_rate(double p, double rho1, double rho2, double rho3, RateVariant variant);

// Rate attached to a report: Milstein variants use theoretical_rate with the
// problem's exponents (JumpFree when lambda == 0); the Euler schemes get the
// classical 1/2.
double scheme_theoretical_rate(const SdeProblem& problem, SchemeKind scheme, double p);

enum class ErrorMode {
    Successive,  // error(k) from |X^(k)(T) - X^(k-1)(T)|, k_min < k <= k_max
    Exact,       // error(k) from |X^(k)(T) - X(T)|, k_min <= k <= k_max
};

struct ConvergenceConfig {
    std::vector<double> p_values = {2.0};
    int k_min = 3;
    int k_max = 10;
    std::uint64_t n_paths = 4096;
    std::uint64_t master_seed = 42;
    ErrorMode mode = ErrorMode::Successive;
    int fit_k_min = 4;  // regression window: discard pre-asymptotic levels
    int threads = 0;
};

// Generates every path once at level k_max, coarsens down to k_min while
// preserving the coupling and the Bernoulli xi-selection, runs the scheme on
// each level, and estimates error(k) and the log-log slope per p.
std::vector<ConvergenceReport> run_convergence_experiment(const SdeProblem& problem,
                                                          SchemeKind scheme,
                                                          const ConvergenceConfig& config);

} // namespace jumpmil
