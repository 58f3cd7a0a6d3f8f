#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "driver_paths.hpp"
#include "sde_problem.hpp"

namespace jumpmil {

enum class SchemeKind {
    EulerMaruyama,
    RandomizedEuler,
    ClassicalMilstein,
    RandomizedMilstein,
    RandomizedMilsteinJcc,
};

// CLI names: euler, rand-euler, milstein, rand-milstein, rand-milstein-jcc.
const char* scheme_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);

struct Trajectory {
    Grid grid;
    std::vector<double> values;  // X(t_i), i = 0..n

    double terminal() const { return values.back(); }
};

// One step of the randomized Milstein scheme: drift at the randomized time
// xi_i, first-order terms at t_i, and all four iterated-integral corrections.
double step_randomized_milstein(const SdeProblem& problem, double t_i, double x_i,
                                const CellNoise& cell, const IteratedIntegrals& integrals,
                                double xi_i, double delta);

// Under the JCC the two mixed corrections collapse to L-1 sigma * dW dN, so
// the step needs node increments only (no within-cell jump times).
double step_randomized_milstein_jcc(const SdeProblem& problem, double t_i, double x_i, double dW,
                                    std::uint64_t dN, double i_ww, double i_nn, double xi_i,
                                    double delta);

// Euler-Maruyama; with `randomized` the drift is evaluated at xi_i.
double step_euler(const SdeProblem& problem, double t_i, double x_i, double dW, std::uint64_t dN,
                  double delta, bool randomized, double xi_i);

// Randomized Milstein with xi_i pinned to t_i.
double step_classical_milstein(const SdeProblem& problem, double t_i, double x_i,
                               const CellNoise& cell, const IteratedIntegrals& integrals,
                               double delta);

// Folds the one-step map over every cell of the path. Throws NumericalError
// (with the step index) as soon as a state stops being finite, and
// invalid_argument if grid and problem horizons disagree or the JCC variant
// is requested for an unverified problem.
Trajectory run_scheme(const SdeProblem& problem, SchemeKind scheme, const PathPrimitive& path);

} // namespace jumpmil
