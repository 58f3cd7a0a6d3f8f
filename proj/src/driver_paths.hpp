#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"

namespace jumpmil {

// Dyadic partition of [0, T] into n = 2^level_k equal cells.
struct Grid {
    double horizon_T = 1.0;
    int level_k = 0;
    std::uint64_t n = 1;
    double delta = 1.0;

    // t_i; the last node is pinned to horizon_T so t_n == T exactly.
    double node(std::uint64_t i) const {
        return i == n ? horizon_T : static_cast<double>(i) * delta;
    }
};

Grid build_grid(double horizon_T, int level_k);

// Driving-noise data of one cell. Jump times are absolute and strictly
// inside the cell; w_at_jumps holds W(tau_j) - W(t_i), the Wiener value at
// the j-th jump relative to the cell start.
struct CellNoise {
    double dW = 0.0;
    std::uint64_t dN = 0;
    std::vector<double> jump_times;
    std::vector<double> w_at_jumps;
};

// The four double integrals over one cell,
// I(Y,Z) = int_s^t int_s^{u-} dY(v) dZ(u) for Y,Z in {W,N}.
struct IteratedIntegrals {
    double i_ww = 0.0;
    double i_nn = 0.0;
    double i_nw = 0.0;
    double i_wn = 0.0;
};

struct PathPrimitive {
    Grid grid;
    double intensity_lambda = 0.0;
    std::vector<CellNoise> cells;  // length n
    std::vector<double> xi;        // length n, xi[i] in [t_i, t_{i+1}]

    double terminal_w() const;        // W(T)
    std::uint64_t terminal_n() const; // N(T)
};

inline constexpr std::uint64_t kDefaultJumpCap = 1'000'000;

// Samples all driving noise of one path at the given (finest) grid level.
// Per cell, in a fixed draw order: dW ~ N(0, delta); dN ~ Poisson(lambda*delta);
// jump times as sorted uniforms; Wiener values at jump times as sequential
// Brownian-bridge samples conditioned on dW; xi ~ Uniform[t_i, t_{i+1}].
PathPrimitive sample_fine_path(const SeedSpec& seed, const Grid& grid, double intensity_lambda,
                               std::uint64_t max_jumps_per_path = kDefaultJumpCap);

IteratedIntegrals cell_iterated_integrals(const CellNoise& cell, double delta);

// Chasles-type composition over adjacent cells [a,b], [b,c]:
// I_{a,c}(Y,Z) = I_{a,b}(Y,Z) + I_{b,c}(Y,Z) + dY_{[a,b]} * dZ_{[b,c]}.
IteratedIntegrals compose_iterated_integrals(const IteratedIntegrals& left,
                                             const IteratedIntegrals& right,
                                             const CellNoise& left_cell,
                                             const CellNoise& right_cell);

// Aggregates a level-k primitive into level k-1 on the same underlying path:
// increments are summed, jump lists merged (second-cell bridge values shifted
// by the first cell's dW), and each coarse xi is one of its two fine xi,
// chosen by a fair coin from an independent stream keyed by the fine level.
PathPrimitive coarsen(const PathPrimitive& fine, const SeedSpec& coin_stream);

// Node values W(t_i), N(t_i) for i = 0..n, from cumulative increments.
void path_node_values(const PathPrimitive& path, std::vector<double>& w_nodes,
                      std::vector<double>& n_nodes);

// Debug dump, little-endian: magic "JMPD", version u32, level_k u32, n u64,
// lambda f64, T f64; per cell: dW f64, dN u32, dN x (time f64, bridge f64),
// xi f64.
void write_path_dump(const PathPrimitive& path, const std::string& filename);
PathPrimitive read_path_dump(const std::string& filename);

} // namespace jumpmil
