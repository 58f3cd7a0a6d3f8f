#include "convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "parallel.hpp"

namespace jumpmil {

namespace {

std::pair<double, double> pth_root_moment(std::span<const double> diffs, double p) {
    const std::size_t n = diffs.size();
    double sum = 0.0;
    for (double d : diffs) sum += std::pow(std::abs(d), p);
    const double moment = sum / static_cast<double>(n);
    if (moment == 0.0) return {0.0, 0.0};

    double sq_dev = 0.0;
    for (double d : diffs) {
        const double y = std::pow(std::abs(d), p) - moment;
        sq_dev += y * y;
    }
    const double moment_var = n > 1 ? sq_dev / static_cast<double>(n - 1) : 0.0;
    const double error = std::pow(moment, 1.0 / p);
    // Delta method: d/dm m^{1/p} = m^{1/p - 1} / p.
    const double std_error = std::pow(moment, 1.0 / p - 1.0) / p *
                             std::sqrt(moment_var / static_cast<double>(n));
    return {error, std_error};
}

std::pair<double, double> elementwise_error(std::span<const double> a, std::span<const double> b,
                                            double p, const char* who) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(who) + ": terminal lists differ in length");
    }
    if (a.empty()) {
        throw std::invalid_argument(std::string(who) + ": empty terminal lists");
    }
    if (!(p >= 1.0)) {
        throw std::invalid_argument(std::string(who) + ": p must be >= 1");
    }
    std::vector<double> diffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];
    return pth_root_moment(diffs, p);
}

} // namespace

std::pair<double, double> successive_error(std::span<const double> terminal_fine,
                                           std::span<const double> terminal_coarse, double p) {
    return elementwise_error(terminal_fine, terminal_coarse, p, "successive_error");
}

std::pair<double, double> exact_error(std::span<const double> terminal_numeric,
                                      std::span<const double> terminal_exact, double p) {
    return elementwise_error(terminal_numeric, terminal_exact, p, "exact_error");
}

std::pair<double, double> fit_slope(std::span<const double> log_deltas,
                                    std::span<const double> log_errors) {
    const std::size_t n = log_deltas.size();
    if (n != log_errors.size()) {
        throw std::invalid_argument("fit_slope: input lengths differ");
    }
    if (n < 3) {
        throw std::invalid_argument("fit_slope: need at least 3 points");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(log_deltas[i]) || !std::isfinite(log_errors[i])) {
            throw std::invalid_argument("fit_slope: non-finite input");
        }
    }

    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x_mean += log_deltas[i];
        y_mean += log_errors[i];
    }
    x_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = log_deltas[i] - x_mean;
        sxx += dx * dx;
        sxy += dx * (log_errors[i] - y_mean);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_slope: degenerate abscissae");
    }
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = log_errors[i] - (intercept + slope * log_deltas[i]);
        sse += resid * resid;
    }
    const double std_error = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    return {slope, std_error};
}

double theoretical_rate(double p, double rho1, double rho2, double rho3, RateVariant variant) {
    for (double rho : {rho1, rho2, rho3}) {
        if (!(rho > 0.0) || rho > 1.0) {
            throw std::invalid_argument("theoretical_rate: exponents must lie in (0, 1]");
        }
    }
    if (!(p >= 1.0)) {
        throw std::invalid_argument("theoretical_rate: p must be >= 1");
    }
    // The L^1 rate is estimated via the L^2 rate (Cauchy-Schwarz), so p < 2
    // maps to the p = 2 exponents.
    const double pe = std::max(p, 2.0);
    switch (variant) {
        case RateVariant::Jump:
            return std::min({2.0 / pe, rho1 + 1.0 / pe, rho2, rho3});
        case RateVariant::JumpFree:
            return std::min(rho1 + 0.5, rho2);
        case RateVariant::ClassicalMilstein:
            return std::min({2.0 / pe, rho1, rho2, rho3});
    }
    throw std::invalid_argument("theoretical_rate: unknown variant");
}

double scheme_theoretical_rate(const SdeProblem& problem, SchemeKind scheme, double p) {
    const double rho1 = problem.mu.hoelder_exponent;
    const double rho2 = problem.sigma.hoelder_exponent;
    const double rho3 = problem.rho.hoelder_exponent;
    switch (scheme) {
        case SchemeKind::EulerMaruyama:
        case SchemeKind::RandomizedEuler:
            return 0.5;
        case SchemeKind::ClassicalMilstein:
            return theoretical_rate(p, rho1, rho2, rho3, RateVariant::ClassicalMilstein);
        case SchemeKind::RandomizedMilstein:
        case SchemeKind::RandomizedMilsteinJcc:
            if (problem.intensity_lambda == 0.0) {
                return theoretical_rate(p, rho1, rho2, rho3, RateVariant::JumpFree);
            }
            return theoretical_rate(p, rho1, rho2, rho3, RateVariant::Jump);
    }
    throw std::invalid_argument("scheme_theoretical_rate: unknown scheme");
}

std::vector<ConvergenceReport> run_convergence_experiment(const SdeProblem& problem,
                                                          SchemeKind scheme,
                                                          const ConvergenceConfig& config) {
    if (config.k_min < 1 || config.k_max <= config.k_min) {
        throw std::invalid_argument("run_convergence_experiment: need k_max > k_min >= 1");
    }
    if (config.n_paths < 100) {
        throw std::invalid_argument("run_convergence_experiment: n_paths must be >= 100");
    }
    if (config.p_values.empty()) {
        throw std::invalid_argument("run_convergence_experiment: no p values");
    }
    if (config.mode == ErrorMode::Exact && !problem.exact_terminal) {
        throw std::invalid_argument(
            "run_convergence_experiment: exact mode needs a problem with exact_terminal");
    }

    const int k_min = config.k_min;
    const int k_max = config.k_max;
    const int n_levels = k_max - k_min + 1;
    const Grid fine_grid = build_grid(problem.horizon_T, k_max);

    // terminals[level_index][path]; level_index 0 is k_min.
    std::vector<std::vector<double>> terminals(
        static_cast<std::size_t>(n_levels), std::vector<double>(config.n_paths, 0.0));
    std::vector<double> exact_terminals(config.n_paths, 0.0);
    std::vector<std::uint8_t> aborted(config.n_paths, 0);

    parallel_for(config.n_paths, config.threads, [&](std::uint64_t index) {
        const SeedSpec seed{config.master_seed, index};
        try {
            PathPrimitive path = sample_fine_path(seed, fine_grid, problem.intensity_lambda);
            if (config.mode == ErrorMode::Exact) {
                exact_terminals[index] =
                    problem.exact_terminal(path.terminal_w(), path.terminal_n());
            }
            for (int k = k_max;; --k) {
                const Trajectory traj = run_scheme(problem, scheme, path);
                terminals[static_cast<std::size_t>(k - k_min)][index] = traj.terminal();
                if (k == k_min) break;
                path = coarsen(path, seed);
            }
        } catch (const NumericalError&) {
            aborted[index] = 1;
        }
    });

    // Compact to the surviving paths, in path order.
    std::uint64_t aborted_count = 0;
    for (std::uint8_t flag : aborted) aborted_count += flag;
    const std::uint64_t kept = config.n_paths - aborted_count;
    if (kept < 2) {
        throw NumericalError(0, "run_convergence_experiment: all paths aborted");
    }
    if (aborted_count > 0) {
        std::uint64_t write = 0;
        for (std::uint64_t read = 0; read < config.n_paths; ++read) {
            if (aborted[read]) continue;
            for (auto& level : terminals) level[write] = level[read];
            exact_terminals[write] = exact_terminals[read];
            ++write;
        }
        for (auto& level : terminals) level.resize(kept);
        exact_terminals.resize(kept);
    }

    std::vector<ConvergenceReport> reports;
    reports.reserve(config.p_values.size());
    for (double p : config.p_values) {
        ConvergenceReport report;
        report.scheme = scheme;
        report.problem_name = problem.name;
        report.theoretical_rate = scheme_theoretical_rate(problem, scheme, p);

        LevelErrors& le = report.level_errors;
        le.p = p;
        le.n_paths = kept;
        le.aborted_paths = aborted_count;

        const int first_k = config.mode == ErrorMode::Successive ? k_min + 1 : k_min;
        for (int k = first_k; k <= k_max; ++k) {
            const auto& fine = terminals[static_cast<std::size_t>(k - k_min)];
            const auto [err, se] =
                config.mode == ErrorMode::Successive
                    ? successive_error(fine, terminals[static_cast<std::size_t>(k - 1 - k_min)], p)
                    : exact_error(fine, exact_terminals, p);
            le.levels.push_back(k);
            le.deltas.push_back(problem.horizon_T * std::pow(2.0, -k));
            le.errors.push_back(err);
            le.std_errors.push_back(se);
        }

        // Log-log fit over the regression window, skipping degenerate levels.
        std::vector<double> log_deltas, log_errors;
        for (std::size_t i = 0; i < le.levels.size(); ++i) {
            if (le.levels[i] < config.fit_k_min) continue;
            if (le.errors[i] <= 0.0) {
                ++report.zero_error_levels;
                continue;
            }
            log_deltas.push_back(std::log2(le.deltas[i]));
            log_errors.push_back(std::log2(le.errors[i]));
        }
        if (log_deltas.size() >= 3) {
            const auto [slope, slope_se] = fit_slope(log_deltas, log_errors);
            report.fitted_slope = slope;
            report.slope_std_error = slope_se;
            report.slope_defined = true;
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace jumpmil
