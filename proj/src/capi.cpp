#include "jumpmil/jumpmil.h"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "convergence.hpp"
#include "driver_paths.hpp"
#include "errors.hpp"
#include "levy_area.hpp"
#include "schemes.hpp"
#include "sde_problem.hpp"

using namespace jumpmil;

struct jm_problem {
    SdeProblem problem;
};

struct jm_convergence {
    std::vector<ConvergenceReport> reports;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Runs fn and folds any exception into a status code + message.
template <typename Fn>
jm_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const NumericalError& e) {
        set_error(e.what());
        return JM_ERR_NUMERICAL;
    } catch (const DataCorruptionError& e) {
        set_error(e.what());
        return JM_ERR_DATA;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return JM_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return JM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return JM_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return JM_ERR_INTERNAL;
    }
}

jm_status make_problem(SdeProblem&& problem, jm_problem** out) {
    if (out == nullptr) {
        set_error("output pointer is null");
        return JM_ERR_INVALID_ARGUMENT;
    }
    *out = new jm_problem{std::move(problem)};
    return JM_OK;
}

} // namespace

extern "C" {

const char* jm_version(void) { return "0.1.0"; }

const char* jm_last_error(void) { return g_last_error.c_str(); }

jm_status jm_problem_create_example(double M, double rho1, double rho2, double lambda,
                                    jm_problem** out) {
    return guarded([&] { return make_problem(builtin_example_sde(M, rho1, rho2, lambda), out); });
}

jm_status jm_problem_create_linear(double a, double b, double c, double x0, double horizon,
                                   double lambda, jm_problem** out) {
    return guarded([&] {
        return make_problem(builtin_linear_jump_diffusion(a, b, c, x0, horizon, lambda), out);
    });
}

jm_status jm_problem_create_jcc_family(double M, double rho1, double rho2, double lambda,
                                       jm_problem** out) {
    return guarded(
        [&] { return make_problem(builtin_jcc_sine_family(M, rho1, rho2, lambda), out); });
}

void jm_problem_free(jm_problem* problem) { delete problem; }

const char* jm_problem_name(const jm_problem* problem) {
    return problem ? problem->problem.name.c_str() : "";
}

jm_status jm_problem_check_jcc(const jm_problem* problem, int t_samples, int y_samples,
                               double y_lo, double y_hi, double tolerance, int* passed,
                               double* max_abs_residual) {
    return guarded([&]() -> jm_status {
        if (problem == nullptr) {
            set_error("problem handle is null");
            return JM_ERR_INVALID_ARGUMENT;
        }
        const JccReport report =
            t_samples <= 0 ? check_jcc(problem->problem)
                           : check_jcc(problem->problem, t_samples, y_samples, y_lo, y_hi,
                                       tolerance);
        if (passed != nullptr) *passed = report.passed ? 1 : 0;
        if (max_abs_residual != nullptr) *max_abs_residual = report.max_abs_residual;
        return JM_OK;
    });
}

jm_status jm_levy_mse_run(double lambda, double horizon, int level, uint64_t n_paths,
                          uint64_t master_seed, int threads, jm_levy_result* out) {
    return guarded([&]() -> jm_status {
        if (out == nullptr) {
            set_error("output pointer is null");
            return JM_ERR_INVALID_ARGUMENT;
        }
        const LevyMseExperiment result =
            run_levy_mse_experiment(lambda, horizon, level, n_paths, master_seed, threads);
        out->empirical_mse = result.trapezoid.empirical_mse;
        out->theoretical_mse = result.trapezoid.theoretical_mse;
        out->mc_standard_error = result.trapezoid.mc_standard_error;
        out->left_empirical_mse = result.left_empirical_mse;
        out->left_mc_standard_error = result.left_mc_standard_error;
        out->n_paths = result.trapezoid.n_paths;
        out->n = result.n;
        return JM_OK;
    });
}

jm_status jm_trapezoid_mse_theoretical(double lambda, double horizon, uint64_t n, double* out) {
    return guarded([&]() -> jm_status {
        if (out == nullptr) {
            set_error("output pointer is null");
            return JM_ERR_INVALID_ARGUMENT;
        }
        *out = theoretical_trapezoid_mse(lambda, horizon, n);
        return JM_OK;
    });
}

jm_status jm_convergence_run(const jm_problem* problem, const char* scheme,
                             const double* p_values, size_t p_count, int k_min, int k_max,
                             uint64_t n_paths, uint64_t master_seed, int exact_error_mode,
                             int fit_k_min, int threads, jm_convergence** out) {
    return guarded([&]() -> jm_status {
        if (problem == nullptr || scheme == nullptr || p_values == nullptr || out == nullptr) {
            set_error("null argument");
            return JM_ERR_INVALID_ARGUMENT;
        }
        const auto kind = parse_scheme(scheme);
        if (!kind) {
            set_error("unknown scheme '" + std::string(scheme) + "'");
            return JM_ERR_INVALID_ARGUMENT;
        }
        ConvergenceConfig config;
        config.p_values.assign(p_values, p_values + p_count);
        config.k_min = k_min;
        config.k_max = k_max;
        config.n_paths = n_paths;
        config.master_seed = master_seed;
        config.mode = exact_error_mode != 0 ? ErrorMode::Exact : ErrorMode::Successive;
        if (fit_k_min > 0) config.fit_k_min = fit_k_min;
        config.threads = threads;

        auto reports = run_convergence_experiment(problem->problem, *kind, config);
        *out = new jm_convergence{std::move(reports)};
        return JM_OK;
    });
}

size_t jm_convergence_block_count(const jm_convergence* report) {
    return report ? report->reports.size() : 0;
}

jm_status jm_convergence_get_block(const jm_convergence* report, size_t index,
                                   jm_convergence_block* out) {
    return guarded([&]() -> jm_status {
        if (report == nullptr || out == nullptr) {
            set_error("null argument");
            return JM_ERR_INVALID_ARGUMENT;
        }
        if (index >= report->reports.size()) {
            set_error("block index out of range");
            return JM_ERR_INVALID_ARGUMENT;
        }
        const ConvergenceReport& r = report->reports[index];
        out->p = r.level_errors.p;
        out->n_levels = r.level_errors.levels.size();
        out->levels = r.level_errors.levels.data();
        out->deltas = r.level_errors.deltas.data();
        out->errors = r.level_errors.errors.data();
        out->std_errors = r.level_errors.std_errors.data();
        out->n_paths = r.level_errors.n_paths;
        out->aborted_paths = r.level_errors.aborted_paths;
        out->fitted_slope = r.fitted_slope;
        out->slope_std_error = r.slope_std_error;
        out->theoretical_rate = r.theoretical_rate;
        out->slope_defined = r.slope_defined ? 1 : 0;
        out->zero_error_levels = r.zero_error_levels;
        return JM_OK;
    });
}

void jm_convergence_free(jm_convergence* report) { delete report; }

jm_status jm_theoretical_rate(double p, double rho1, double rho2, double rho3,
                              const char* variant, double* out) {
    return guarded([&]() -> jm_status {
        if (variant == nullptr || out == nullptr) {
            set_error("null argument");
            return JM_ERR_INVALID_ARGUMENT;
        }
        RateVariant v;
        if (std::strcmp(variant, "jump") == 0) {
            v = RateVariant::Jump;
        } else if (std::strcmp(variant, "jump-free") == 0) {
            v = RateVariant::JumpFree;
        } else if (std::strcmp(variant, "milstein") == 0) {
            v = RateVariant::ClassicalMilstein;
        } else {
            set_error("unknown rate variant '" + std::string(variant) + "'");
            return JM_ERR_INVALID_ARGUMENT;
        }
        *out = theoretical_rate(p, rho1, rho2, rho3, v);
        return JM_OK;
    });
}

jm_status jm_path_dump(double horizon, int level, double lambda, uint64_t master_seed,
                       uint64_t path_index, const char* filename) {
    return guarded([&]() -> jm_status {
        if (filename == nullptr) {
            set_error("filename is null");
            return JM_ERR_INVALID_ARGUMENT;
        }
        const Grid grid = build_grid(horizon, level);
        const PathPrimitive path =
            sample_fine_path(SeedSpec{master_seed, path_index}, grid, lambda);
        try {
            write_path_dump(path, filename);
        } catch (const DataCorruptionError&) {
            throw;
        } catch (const std::runtime_error& e) {
            set_error(e.what());
            return JM_ERR_IO;
        }
        return JM_OK;
    });
}

} // extern "C"
