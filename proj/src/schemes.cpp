#include "schemes.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"

namespace jumpmil {

const char* scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::EulerMaruyama: return "euler";
        case SchemeKind::RandomizedEuler: return "rand-euler";
        case SchemeKind::ClassicalMilstein: return "milstein";
        case SchemeKind::RandomizedMilstein: return "rand-milstein";
        case SchemeKind::RandomizedMilsteinJcc: return "rand-milstein-jcc";
    }
    return "unknown";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
    if (name == "euler") return SchemeKind::EulerMaruyama;
    if (name == "rand-euler") return SchemeKind::RandomizedEuler;
    if (name == "milstein") return SchemeKind::ClassicalMilstein;
    if (name == "rand-milstein") return SchemeKind::RandomizedMilstein;
    if (name == "rand-milstein-jcc") return SchemeKind::RandomizedMilsteinJcc;
    return std::nullopt;
}

double step_randomized_milstein(const SdeProblem& problem, double t_i, double x_i,
                                const CellNoise& cell, const IteratedIntegrals& integrals,
                                double xi_i, double delta) {
    const double drift = problem.mu.value(xi_i, x_i);
    const double diffusion = problem.sigma.value(t_i, x_i);
    const double jump = problem.rho.value(t_i, x_i);
    const double l1_sigma = l1_apply(problem.sigma, problem.sigma, t_i, x_i);
    const double lm1_rho = lm1_apply(problem.rho, problem.rho, t_i, x_i);
    const double lm1_sigma = lm1_apply(problem.sigma, problem.rho, t_i, x_i);
    const double l1_rho = l1_apply(problem.rho, problem.sigma, t_i, x_i);

    // Fixed summation order for bit reproducibility.
    return x_i + drift * delta + diffusion * cell.dW + jump * static_cast<double>(cell.dN) +
           l1_sigma * integrals.i_ww + lm1_rho * integrals.i_nn + lm1_sigma * integrals.i_nw +
           l1_rho * integrals.i_wn;
}

double step_randomized_milstein_jcc(const SdeProblem& problem, double t_i, double x_i, double dW,
                                    std::uint64_t dN, double i_ww, double i_nn, double xi_i,
                                    double delta) {
    const double drift = problem.mu.value(xi_i, x_i);
    const double diffusion = problem.sigma.value(t_i, x_i);
    const double jump = problem.rho.value(t_i, x_i);
    const double l1_sigma = l1_apply(problem.sigma, problem.sigma, t_i, x_i);
    const double lm1_rho = lm1_apply(problem.rho, problem.rho, t_i, x_i);
    const double lm1_sigma = lm1_apply(problem.sigma, problem.rho, t_i, x_i);

    return x_i + drift * delta + diffusion * dW + jump * static_cast<double>(dN) +
           l1_sigma * i_ww + lm1_rho * i_nn + lm1_sigma * (dW * static_cast<double>(dN));
}

double step_euler(const SdeProblem& problem, double t_i, double x_i, double dW, std::uint64_t dN,
                  double delta, bool randomized, double xi_i) {
    const double drift_time = randomized ? xi_i : t_i;
    return x_i + problem.mu.value(drift_time, x_i) * delta +
           problem.sigma.value(t_i, x_i) * dW +
           problem.rho.value(t_i, x_i) * static_cast<double>(dN);
}

double step_classical_milstein(const SdeProblem& problem, double t_i, double x_i,
                               const CellNoise& cell, const IteratedIntegrals& integrals,
                               double delta) {
    return step_randomized_milstein(problem, t_i, x_i, cell, integrals, t_i, delta);
}

Trajectory run_scheme(const SdeProblem& problem, SchemeKind scheme, const PathPrimitive& path) {
    if (path.grid.horizon_T != problem.horizon_T) {
        throw std::invalid_argument("run_scheme: path horizon does not match problem horizon");
    }
    if (scheme == SchemeKind::RandomizedMilsteinJcc && !problem.jcc_verified) {
        throw std::invalid_argument(
            "run_scheme: rand-milstein-jcc requires a problem with verified JCC");
    }

    const Grid& grid = path.grid;
    Trajectory traj;
    traj.grid = grid;
    traj.values.resize(grid.n + 1);
    traj.values[0] = problem.x0;

    const double delta = grid.delta;
    double x = problem.x0;
    for (std::uint64_t i = 0; i < grid.n; ++i) {
        const CellNoise& cell = path.cells[i];
        const double t_i = grid.node(i);
        const double xi_i = path.xi[i];

        switch (scheme) {
            case SchemeKind::EulerMaruyama:
                x = step_euler(problem, t_i, x, cell.dW, cell.dN, delta, false, xi_i);
                break;
            case SchemeKind::RandomizedEuler:
                x = step_euler(problem, t_i, x, cell.dW, cell.dN, delta, true, xi_i);
                break;
            case SchemeKind::ClassicalMilstein: {
                const IteratedIntegrals integrals = cell_iterated_integrals(cell, delta);
                x = step_classical_milstein(problem, t_i, x, cell, integrals, delta);
                break;
            }
            case SchemeKind::RandomizedMilstein: {
                const IteratedIntegrals integrals = cell_iterated_integrals(cell, delta);
                x = step_randomized_milstein(problem, t_i, x, cell, integrals, xi_i, delta);
                break;
            }
            case SchemeKind::RandomizedMilsteinJcc: {
                // Standard discrete information only: both integrals follow
                // from the node increments.
                const double dn = static_cast<double>(cell.dN);
                const double i_ww = 0.5 * (cell.dW * cell.dW - delta);
                const double i_nn = 0.5 * dn * (dn - 1.0);
                x = step_randomized_milstein_jcc(problem, t_i, x, cell.dW, cell.dN, i_ww, i_nn,
                                                 xi_i, delta);
                break;
            }
        }

        if (!std::isfinite(x)) {
            throw NumericalError(i, "run_scheme: non-finite state for scheme " +
                                        std::string(scheme_name(scheme)));
        }
        traj.values[i + 1] = x;
    }
    return traj;
}

} // namespace jumpmil
