#include "levy_area.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace jumpmil {

double exact_levy_area(const PathPrimitive& path) {
    if (path.cells.size() != path.grid.n) {
        throw std::invalid_argument("exact_levy_area: cell count does not match grid");
    }
    double total = 0.0;
    double running_count = 0.0;
    for (std::uint64_t i = 0; i < path.grid.n; ++i) {
        const CellNoise& cell = path.cells[i];
        if (cell.jump_times.size() != cell.dN || cell.w_at_jumps.size() != cell.dN) {
            throw std::invalid_argument("exact_levy_area: path lacks within-cell jump data");
        }
        const IteratedIntegrals integrals = cell_iterated_integrals(cell, path.grid.delta);
        total += running_count * cell.dW + integrals.i_nw;
        running_count += static_cast<double>(cell.dN);
    }
    return total;
}

namespace {

void require_node_arrays(std::span<const double> w_nodes, std::span<const double> n_nodes) {
    if (w_nodes.size() != n_nodes.size()) {
        throw std::invalid_argument("levy_area: node arrays differ in length");
    }
    if (w_nodes.size() < 2) {
        throw std::invalid_argument("levy_area: need at least two nodes");
    }
}

} // namespace

double trapezoid_levy_area(std::span<const double> w_nodes, std::span<const double> n_nodes) {
    require_node_arrays(w_nodes, n_nodes);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < w_nodes.size(); ++i) {
        total += 0.5 * (w_nodes[i + 1] - w_nodes[i]) * (n_nodes[i + 1] + n_nodes[i]);
    }
    return total;
}

double left_point_levy_area(std::span<const double> w_nodes, std::span<const double> n_nodes) {
    require_node_arrays(w_nodes, n_nodes);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < w_nodes.size(); ++i) {
        total += n_nodes[i] * (w_nodes[i + 1] - w_nodes[i]);
    }
    return total;
}

double theoretical_trapezoid_mse(double lambda, double horizon_T, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("theoretical_trapezoid_mse: n must be >= 1");
    if (!(lambda >= 0.0) || !(horizon_T > 0.0)) {
        throw std::invalid_argument("theoretical_trapezoid_mse: need lambda >= 0, T > 0");
    }
    const double nd = static_cast<double>(n);
    const double t2 = horizon_T * horizon_T;
    return lambda * t2 / (4.0 * nd) + lambda * lambda * t2 * horizon_T / (12.0 * nd * nd);
}

double poisson_bridge_mean(double n_left, double n_right, double t_left, double t_right,
                           double s) {
    if (!(t_left < t_right)) {
        throw std::invalid_argument("poisson_bridge_mean: degenerate interval");
    }
    if (s < t_left || s > t_right) {
        throw std::invalid_argument("poisson_bridge_mean: s outside [t_left, t_right]");
    }
    return (n_right * (s - t_left) + n_left * (t_right - s)) / (t_right - t_left);
}

double wiener_increment_conditional_mean(double dW_cell, double sub_left, double sub_right,
                                         double t_left, double t_right) {
    if (!(t_left < t_right)) {
        throw std::invalid_argument("wiener_increment_conditional_mean: degenerate cell");
    }
    if (sub_left < t_left || sub_right > t_right || sub_left > sub_right) {
        throw std::invalid_argument(
            "wiener_increment_conditional_mean: sub-interval not inside the cell");
    }
    return dW_cell * (sub_right - sub_left) / (t_right - t_left);
}

LevyMseExperiment run_levy_mse_experiment(double lambda, double horizon_T, int level_k,
                                          std::uint64_t n_paths, std::uint64_t master_seed,
                                          int threads) {
    if (n_paths < 100) {
        throw std::invalid_argument("run_levy_mse_experiment: n_paths must be >= 100");
    }
    const Grid grid = build_grid(horizon_T, level_k);

    std::vector<double> trap_sq(n_paths);
    std::vector<double> left_sq(n_paths);

    parallel_for(n_paths, threads, [&](std::uint64_t index) {
        const SeedSpec seed{master_seed, index};
        const PathPrimitive path = sample_fine_path(seed, grid, lambda);
        std::vector<double> w_nodes, n_nodes;
        path_node_values(path, w_nodes, n_nodes);

        const double exact = exact_levy_area(path);
        const double trap = trapezoid_levy_area(w_nodes, n_nodes);
        const double left = left_point_levy_area(w_nodes, n_nodes);
        trap_sq[index] = (exact - trap) * (exact - trap);
        left_sq[index] = (exact - left) * (exact - left);
    });

    // Sequential reductions in path order keep totals thread-count independent.
    auto mean_and_se = [n_paths](const std::vector<double>& values) {
        double sum = 0.0;
        for (double v : values) sum += v;
        const double mean = sum / static_cast<double>(n_paths);
        double sq_dev = 0.0;
        for (double v : values) sq_dev += (v - mean) * (v - mean);
        const double variance = sq_dev / static_cast<double>(n_paths - 1);
        return std::pair<double, double>(mean, std::sqrt(variance / static_cast<double>(n_paths)));
    };

    LevyMseExperiment out;
    out.level_k = level_k;
    out.n = grid.n;
    const auto [trap_mse, trap_se] = mean_and_se(trap_sq);
    const auto [left_mse, left_se] = mean_and_se(left_sq);
    out.trapezoid.empirical_mse = trap_mse;
    out.trapezoid.mc_standard_error = trap_se;
    out.trapezoid.theoretical_mse = theoretical_trapezoid_mse(lambda, horizon_T, grid.n);
    out.trapezoid.n_paths = n_paths;
    out.left_empirical_mse = left_mse;
    out.left_mc_standard_error = left_se;
    return out;
}

} // namespace jumpmil
