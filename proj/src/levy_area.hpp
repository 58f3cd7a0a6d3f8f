#pragma once

#include <cstdint>
#include <span>

#include "driver_paths.hpp"

namespace jumpmil {

// J(N,W) = int_0^T N(t) dW(t), evaluated in closed form from the simulated
// within-cell jump data: per cell, N(t_i) dW_i plus the cell's I(N,W).
// Exact up to floating-point arithmetic, not a discretization.
double exact_levy_area(const PathPrimitive& path);

// Trapezoidal method on node values: sum_i (W_{i+1}-W_i)(N_{i+1}+N_i)/2.
// This is E[J | node values], the L2-optimal node-based approximation.
double trapezoid_levy_area(std::span<const double> w_nodes, std::span<const double> n_nodes);

// Euler-type comparator: sum_i N_i (W_{i+1}-W_i).
double left_point_levy_area(std::span<const double> w_nodes, std::span<const double> n_nodes);

// Exact mean-square error of the trapezoidal method on the equidistant mesh:
// lambda T^2 / (4n) + lambda^2 T^3 / (12 n^2).
double theoretical_trapezoid_mse(double lambda, double horizon_T, std::uint64_t n);

// E[N(s) | node counts] on [t_left, t_right]: linear interpolation.
double poisson_bridge_mean(double n_left, double n_right, double t_left, double t_right,
                           double s);

// E[W(sub_right) - W(sub_left) | cell increment]: proportional share of dW.
double wiener_increment_conditional_mean(double dW_cell, double sub_left, double sub_right,
                                         double t_left, double t_right);

struct MseReport {
    double empirical_mse = 0.0;
    double theoretical_mse = 0.0;
    double mc_standard_error = 0.0;
    std::uint64_t n_paths = 0;
};

struct LevyMseExperiment {
    MseReport trapezoid;
    double left_empirical_mse = 0.0;
    double left_mc_standard_error = 0.0;
    int level_k = 0;
    std::uint64_t n = 0;
};

// Monte Carlo estimate of E|J - trapezoid|^2 (and the left-point comparator)
// at mesh 2^level_k, against the closed-form trapezoid MSE.
LevyMseExperiment run_levy_mse_experiment(double lambda, double horizon_T, int level_k,
                                          std::uint64_t n_paths, std::uint64_t master_seed,
                                          int threads = 0);

} // namespace jumpmil
