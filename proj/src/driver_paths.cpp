#include "driver_paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "errors.hpp"

namespace jumpmil {

Grid build_grid(double horizon_T, int level_k) {
    if (!(horizon_T > 0.0) || !std::isfinite(horizon_T)) {
        throw std::invalid_argument("build_grid: horizon_T must be positive and finite");
    }
    if (level_k < 0 || level_k > 62) {
        throw std::invalid_argument("build_grid: level_k must be in [0, 62]");
    }
    Grid grid;
    grid.horizon_T = horizon_T;
    grid.level_k = level_k;
    grid.n = std::uint64_t{1} << level_k;
    grid.delta = horizon_T / static_cast<double>(grid.n);
    return grid;
}

double PathPrimitive::terminal_w() const {
    double w = 0.0;
    for (const CellNoise& cell : cells) w += cell.dW;
    return w;
}

std::uint64_t PathPrimitive::terminal_n() const {
    std::uint64_t n = 0;
    for (const CellNoise& cell : cells) n += cell.dN;
    return n;
}

namespace {

void validate_cell(const CellNoise& cell) {
    if (cell.jump_times.size() != cell.dN || cell.w_at_jumps.size() != cell.dN) {
        throw DataCorruptionError("CellNoise: jump list lengths do not match dN");
    }
}

// Keeps a sampled jump time strictly inside (lo, hi); fp collisions with a
// node have probability zero but would break the cadlag cell assignment.
double clamp_open(double t, double lo, double hi) {
    if (t <= lo) t = std::nextafter(lo, hi);
    if (t >= hi) t = std::nextafter(hi, lo);
    return t;
}

} // namespace

PathPrimitive sample_fine_path(const SeedSpec& seed, const Grid& grid, double intensity_lambda,
                               std::uint64_t max_jumps_per_path) {
    if (!(intensity_lambda >= 0.0) || !std::isfinite(intensity_lambda)) {
        throw std::invalid_argument("sample_fine_path: intensity_lambda must be >= 0");
    }

    CounterRng rng(seed, kStreamPath);
    PathPrimitive path;
    path.grid = grid;
    path.intensity_lambda = intensity_lambda;
    path.cells.resize(grid.n);
    path.xi.resize(grid.n);

    const double delta = grid.delta;
    const double sqrt_delta = std::sqrt(delta);
    const double jump_mean = intensity_lambda * delta;
    std::uint64_t total_jumps = 0;

    for (std::uint64_t i = 0; i < grid.n; ++i) {
        CellNoise& cell = path.cells[i];
        const double t_lo = path.grid.node(i);
        const double t_hi = path.grid.node(i + 1);

        cell.dW = sqrt_delta * rng.normal();
        cell.dN = rng.poisson(jump_mean);

        total_jumps += cell.dN;
        if (total_jumps > max_jumps_per_path) {
            throw std::invalid_argument("sample_fine_path: jump cap exceeded (" +
                                        std::to_string(max_jumps_per_path) + " jumps per path)");
        }

        if (cell.dN > 0) {
            // Conditional on dN = m, jump times are the order statistics of m
            // Uniform(cell) draws.
            std::vector<double> offsets(cell.dN);
            for (double& s : offsets) s = delta * rng.uniform_open01();
            std::sort(offsets.begin(), offsets.end());

            cell.jump_times.resize(cell.dN);
            cell.w_at_jumps.resize(cell.dN);

            // Brownian bridge from (0, 0) to (delta, dW), sampled left to
            // right at the jump offsets.
            double prev_s = 0.0;
            double prev_w = 0.0;
            for (std::uint64_t j = 0; j < cell.dN; ++j) {
                const double s = offsets[j];
                const double frac = (s - prev_s) / (delta - prev_s);
                const double mean = prev_w + frac * (cell.dW - prev_w);
                const double var = (s - prev_s) * (delta - s) / (delta - prev_s);
                const double w = mean + std::sqrt(std::max(var, 0.0)) * rng.normal();
                cell.jump_times[j] = clamp_open(t_lo + s, t_lo, t_hi);
                cell.w_at_jumps[j] = w;
                prev_s = s;
                prev_w = w;
            }
        }

        path.xi[i] = rng.uniform(t_lo, t_hi);
    }
    return path;
}

IteratedIntegrals cell_iterated_integrals(const CellNoise& cell, double delta) {
    validate_cell(cell);

    IteratedIntegrals out;
    out.i_ww = 0.5 * (cell.dW * cell.dW - delta);
    out.i_nn = 0.5 * static_cast<double>(cell.dN) * (static_cast<double>(cell.dN) - 1.0);

    if (cell.dN > 0) {
        // i_wn = sum_j W(tau_j) - W(cell start); i_nw counts jumps seen so far
        // against the following Wiener increments, with w_{m+1} the cell-end
        // value dW.
        double sum_w = 0.0;
        double weighted = 0.0;
        for (std::uint64_t j = 0; j < cell.dN; ++j) {
            const double w_next = (j + 1 < cell.dN) ? cell.w_at_jumps[j + 1] : cell.dW;
            sum_w += cell.w_at_jumps[j];
            weighted += static_cast<double>(j + 1) * (w_next - cell.w_at_jumps[j]);
        }
        out.i_wn = sum_w;
        out.i_nw = weighted;
    }
    return out;
}

IteratedIntegrals compose_iterated_integrals(const IteratedIntegrals& left,
                                             const IteratedIntegrals& right,
                                             const CellNoise& left_cell,
                                             const CellNoise& right_cell) {
    IteratedIntegrals out;
    const double left_dn = static_cast<double>(left_cell.dN);
    const double right_dn = static_cast<double>(right_cell.dN);
    out.i_ww = left.i_ww + right.i_ww + left_cell.dW * right_cell.dW;
    out.i_nn = left.i_nn + right.i_nn + left_dn * right_dn;
    out.i_nw = left.i_nw + right.i_nw + left_dn * right_cell.dW;
    out.i_wn = left.i_wn + right.i_wn + left_cell.dW * right_dn;
    return out;
}

PathPrimitive coarsen(const PathPrimitive& fine, const SeedSpec& coin_stream) {
    if (fine.grid.level_k < 1) {
        throw std::invalid_argument("coarsen: level 0 path cannot be coarsened");
    }
    if (fine.cells.size() != fine.grid.n || fine.xi.size() != fine.grid.n) {
        throw DataCorruptionError("coarsen: cell/xi count does not match grid");
    }

    CounterRng coins(coin_stream, kStreamCoinBase + static_cast<std::uint32_t>(fine.grid.level_k));

    PathPrimitive coarse;
    coarse.grid = build_grid(fine.grid.horizon_T, fine.grid.level_k - 1);
    coarse.intensity_lambda = fine.intensity_lambda;
    coarse.cells.resize(coarse.grid.n);
    coarse.xi.resize(coarse.grid.n);

    for (std::uint64_t i = 0; i < coarse.grid.n; ++i) {
        const CellNoise& first = fine.cells[2 * i];
        const CellNoise& second = fine.cells[2 * i + 1];
        validate_cell(first);
        validate_cell(second);

        CellNoise& merged = coarse.cells[i];
        merged.dW = first.dW + second.dW;
        merged.dN = first.dN + second.dN;
        merged.jump_times.reserve(merged.dN);
        merged.w_at_jumps.reserve(merged.dN);

        merged.jump_times = first.jump_times;
        merged.jump_times.insert(merged.jump_times.end(), second.jump_times.begin(),
                                 second.jump_times.end());
        merged.w_at_jumps = first.w_at_jumps;
        for (double w : second.w_at_jumps) {
            merged.w_at_jumps.push_back(first.dW + w);
        }

        // A fair coin picks one of the two fine randomization points; the
        // result is uniform on the merged cell.
        const bool take_second = coins.uniform01() < 0.5;
        coarse.xi[i] = take_second ? fine.xi[2 * i + 1] : fine.xi[2 * i];
    }
    return coarse;
}

void path_node_values(const PathPrimitive& path, std::vector<double>& w_nodes,
                      std::vector<double>& n_nodes) {
    const std::uint64_t n = path.grid.n;
    w_nodes.assign(n + 1, 0.0);
    n_nodes.assign(n + 1, 0.0);
    double w = 0.0;
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        w += path.cells[i].dW;
        count += path.cells[i].dN;
        w_nodes[i + 1] = w;
        n_nodes[i + 1] = static_cast<double>(count);
    }
}

namespace {

constexpr char kDumpMagic[4] = {'J', 'M', 'P', 'D'};
constexpr std::uint32_t kDumpVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

} // namespace

void write_path_dump(const PathPrimitive& path, const std::string& filename) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw std::runtime_error("write_path_dump: cannot open " + filename);

    out.write(kDumpMagic, 4);
    write_raw(out, kDumpVersion);
    write_raw(out, static_cast<std::uint32_t>(path.grid.level_k));
    write_raw(out, path.grid.n);
    write_raw(out, path.intensity_lambda);
    write_raw(out, path.grid.horizon_T);

    for (std::uint64_t i = 0; i < path.grid.n; ++i) {
        const CellNoise& cell = path.cells[i];
        validate_cell(cell);
        write_raw(out, cell.dW);
        write_raw(out, static_cast<std::uint32_t>(cell.dN));
        for (std::uint64_t j = 0; j < cell.dN; ++j) {
            write_raw(out, cell.jump_times[j]);
            write_raw(out, cell.w_at_jumps[j]);
        }
        write_raw(out, path.xi[i]);
    }
    if (!out) throw std::runtime_error("write_path_dump: write failed for " + filename);
}

PathPrimitive read_path_dump(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw std::runtime_error("read_path_dump: cannot open " + filename);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kDumpMagic, 4) != 0) {
        throw DataCorruptionError("read_path_dump: bad magic");
    }
    std::uint32_t version = 0;
    read_raw(in, version);
    if (version != kDumpVersion) {
        throw DataCorruptionError("read_path_dump: unsupported version " + std::to_string(version));
    }

    std::uint32_t level = 0;
    std::uint64_t n = 0;
    double lambda = 0.0;
    double horizon = 0.0;
    read_raw(in, level);
    read_raw(in, n);
    read_raw(in, lambda);
    read_raw(in, horizon);

    PathPrimitive path;
    path.grid = build_grid(horizon, static_cast<int>(level));
    if (path.grid.n != n) throw DataCorruptionError("read_path_dump: cell count mismatch");
    path.intensity_lambda = lambda;
    path.cells.resize(n);
    path.xi.resize(n);

    for (std::uint64_t i = 0; i < n; ++i) {
        CellNoise& cell = path.cells[i];
        std::uint32_t dn = 0;
        read_raw(in, cell.dW);
        read_raw(in, dn);
        cell.dN = dn;
        cell.jump_times.resize(dn);
        cell.w_at_jumps.resize(dn);
        for (std::uint32_t j = 0; j < dn; ++j) {
            read_raw(in, cell.jump_times[j]);
            read_raw(in, cell.w_at_jumps[j]);
        }
        read_raw(in, path.xi[i]);
    }
    if (!in) throw DataCorruptionError("read_path_dump: truncated file");
    return path;
}

} // namespace jumpmil
