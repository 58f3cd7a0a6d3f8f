#include "sde_problem.hpp"

#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace jumpmil {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

void require_exponent(double rho, const char* what) {
    if (!(rho > 0.0) || rho > 1.0) {
        throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
    }
}

} // namespace

double l1_apply(const Coefficient& f, const Coefficient& sigma, double t, double y) {
    return sigma.value(t, y) * f.deriv_y(t, y);
}

double lm1_apply(const Coefficient& f, const Coefficient& rho, double t, double y) {
    return f.value(t, y + rho.value(t, y)) - f.value(t, y);
}

JccReport check_jcc(const SdeProblem& problem, int t_samples, int y_samples, double y_lo,
                    double y_hi, double tolerance) {
    if (t_samples < 1 || y_samples < 1) {
        throw std::invalid_argument("check_jcc: sample counts must be >= 1");
    }
    if (!(y_lo < y_hi)) {
        throw std::invalid_argument("check_jcc: empty y range");
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("check_jcc: tolerance must be positive");
    }

    JccReport report;
    const double t_step = t_samples > 1 ? problem.horizon_T / (t_samples - 1) : 0.0;
    const double y_step = y_samples > 1 ? (y_hi - y_lo) / (y_samples - 1) : 0.0;
    for (int it = 0; it < t_samples; ++it) {
        const double t = it * t_step;
        for (int iy = 0; iy < y_samples; ++iy) {
            const double y = y_lo + iy * y_step;
            const double residual = lm1_apply(problem.sigma, problem.rho, t, y) -
                                    l1_apply(problem.rho, problem.sigma, t, y);
            report.max_abs_residual = std::max(report.max_abs_residual, std::abs(residual));
            ++report.sample_count;
        }
    }
    report.passed = report.max_abs_residual <= tolerance;
    return report;
}

JccReport check_jcc(const SdeProblem& problem) {
    return check_jcc(problem, kJccDefaultTSamples, kJccDefaultYSamples, kJccDefaultYLo,
                     kJccDefaultYHi, kJccDefaultTolerance);
}

SdeProblem builtin_example_sde(double M, double rho1, double rho2, double intensity_lambda) {
    if (M == 0.0 || !std::isfinite(M)) {
        throw std::invalid_argument("builtin_example_sde: M must be nonzero");
    }
    require_exponent(rho1, "builtin_example_sde: rho1");
    require_exponent(rho2, "builtin_example_sde: rho2");
    if (!(intensity_lambda >= 0.0)) {
        throw std::invalid_argument("builtin_example_sde: intensity_lambda must be >= 0");
    }

    SdeProblem problem;
    problem.name = "example";
    problem.mu = Coefficient{
        [M, rho1](double t, double y) { return std::sin(M * y * std::pow(1.0 + t, rho1)); },
        [M, rho1](double t, double y) {
            const double scale = M * std::pow(1.0 + t, rho1);
            return scale * std::cos(scale * y);
        },
        rho1};
    problem.sigma = Coefficient{
        [M, rho2](double t, double y) { return std::cos(M * y * std::pow(1.0 + t, rho2)); },
        [M, rho2](double t, double y) {
            const double scale = M * std::pow(1.0 + t, rho2);
            return -scale * std::sin(scale * y);
        },
        rho2};
    problem.rho = Coefficient{
        [M, rho2](double t, double y) { return -y + kPi / (2.0 * M * std::pow(1.0 + t, rho2)); },
        [](double, double) { return -1.0; },
        rho2};
    problem.x0 = 1.0;
    problem.horizon_T = 1.0;
    problem.intensity_lambda = intensity_lambda;

    if (!check_jcc(problem, kJccDefaultTSamples, kJccDefaultYSamples, kJccDefaultYLo,
                   kJccDefaultYHi, 1e-10)
             .passed) {
        throw std::runtime_error("builtin_example_sde: JCC verification failed");
    }
    problem.jcc_verified = true;
    return problem;
}

SdeProblem builtin_linear_jump_diffusion(double a, double b, double c, double x0,
                                         double horizon_T, double intensity_lambda) {
    if (!(horizon_T > 0.0)) {
        throw std::invalid_argument("builtin_linear_jump_diffusion: horizon_T must be positive");
    }
    if (!(intensity_lambda >= 0.0)) {
        throw std::invalid_argument("builtin_linear_jump_diffusion: intensity_lambda must be >= 0");
    }

    SdeProblem problem;
    problem.name = "linear";
    problem.mu = Coefficient{[a](double, double y) { return a * y; },
                             [a](double, double) { return a; }, 1.0};
    problem.sigma = Coefficient{[b](double, double y) { return b * y; },
                                [b](double, double) { return b; }, 1.0};
    problem.rho = Coefficient{[c](double, double y) { return c * y; },
                              [c](double, double) { return c; }, 1.0};
    problem.x0 = x0;
    problem.horizon_T = horizon_T;
    problem.intensity_lambda = intensity_lambda;
    problem.exact_terminal = [a, b, c, x0, horizon_T](double w_terminal,
                                                      std::uint64_t n_terminal) {
        const double continuous =
            x0 * std::exp((a - 0.5 * b * b) * horizon_T + b * w_terminal);
        // (1+c)^{N(T)} with integral exponent; c = -1 absorbs at the first jump.
        return continuous * std::pow(1.0 + c, static_cast<double>(n_terminal));
    };

    // L-1 sigma = b c y = L1 rho holds identically for the linear triple.
    if (!check_jcc(problem, kJccDefaultTSamples, kJccDefaultYSamples, kJccDefaultYLo,
                   kJccDefaultYHi, std::max(1e-10, 1e-12 * std::abs(b * c)))
             .passed) {
        throw std::runtime_error("builtin_linear_jump_diffusion: JCC verification failed");
    }
    problem.jcc_verified = true;
    return problem;
}

SdeProblem builtin_jcc_family(const JccFamilySpec& spec) {
    if (!spec.F || !spec.F_prime || !spec.alpha || !spec.beta || !spec.gamma) {
        throw std::invalid_argument("builtin_jcc_family: all functions must be set");
    }
    require_exponent(spec.sigma_exponent, "builtin_jcc_family: sigma_exponent");
    require_exponent(spec.rho_exponent, "builtin_jcc_family: rho_exponent");
    if (!(spec.horizon_T > 0.0)) {
        throw std::invalid_argument("builtin_jcc_family: horizon_T must be positive");
    }

    SdeProblem problem;
    problem.name = spec.name;
    problem.mu = spec.mu;
    auto F = spec.F;
    auto F_prime = spec.F_prime;
    auto alpha = spec.alpha;
    auto beta = spec.beta;
    auto gamma = spec.gamma;
    problem.sigma = Coefficient{
        [F, alpha, beta](double t, double y) { return F(alpha(t) * y + beta(t)); },
        [F_prime, alpha, beta](double t, double y) {
            const double a = alpha(t);
            return a * F_prime(a * y + beta(t));
        },
        spec.sigma_exponent};
    problem.rho = Coefficient{[gamma](double t, double y) { return -y + gamma(t); },
                              [](double, double) { return -1.0; }, spec.rho_exponent};
    problem.x0 = spec.x0;
    problem.horizon_T = spec.horizon_T;
    problem.intensity_lambda = spec.intensity_lambda;

    const JccReport report = check_jcc(problem);
    if (!report.passed) {
        throw std::runtime_error("builtin_jcc_family: JCC verification failed, max residual " +
                                 std::to_string(report.max_abs_residual));
    }
    problem.jcc_verified = true;
    return problem;
}

SdeProblem builtin_jcc_sine_family(double M, double rho1, double rho2,
                                   double intensity_lambda) {
    if (M == 0.0 || !std::isfinite(M)) {
        throw std::invalid_argument("builtin_jcc_sine_family: M must be nonzero");
    }
    require_exponent(rho1, "builtin_jcc_sine_family: rho1");
    require_exponent(rho2, "builtin_jcc_sine_family: rho2");

    JccFamilySpec spec;
    spec.F = [](double x) { return std::sin(x); };
    spec.F_prime = [](double x) { return std::cos(x); };
    spec.alpha = [M, rho2](double t) { return M * std::pow(1.0 + t, rho2); };
    spec.beta = [](double) { return 0.0; };
    // alpha(t) * gamma(t) = pi and sin(pi) = 0, so the JCC holds.
    spec.gamma = [M, rho2](double t) { return kPi / (M * std::pow(1.0 + t, rho2)); };
    spec.mu = Coefficient{
        [M, rho1](double t, double y) { return std::sin(M * y * std::pow(1.0 + t, rho1)); },
        [M, rho1](double t, double y) {
            const double scale = M * std::pow(1.0 + t, rho1);
            return scale * std::cos(scale * y);
        },
        rho1};
    spec.sigma_exponent = rho2;
    spec.rho_exponent = rho2;
    spec.x0 = 1.0;
    spec.horizon_T = 1.0;
    spec.intensity_lambda = intensity_lambda;
    spec.name = "jcc-family";
    return builtin_jcc_family(spec);
}

namespace {

CoefficientDiagnostics diagnose_coefficient(const Coefficient& coeff, double horizon_T,
                                            const LatticeSpec& lattice) {
    CoefficientDiagnostics diag;
    const int nt = std::max(lattice.t_samples, 2);
    const int ny = std::max(lattice.y_samples, 2);
    const double t_step = horizon_T / (nt - 1);
    const double y_step = (lattice.y_hi - lattice.y_lo) / (ny - 1);

    for (int it = 0; it < nt; ++it) {
        const double t = it * t_step;
        double prev_deriv = 0.0;
        for (int iy = 0; iy < ny; ++iy) {
            const double y = lattice.y_lo + iy * y_step;
            const double deriv = coeff.deriv_y(t, y);
            diag.lipschitz_y = std::max(diag.lipschitz_y, std::abs(deriv));
            if (iy > 0) {
                diag.deriv_lipschitz_y =
                    std::max(diag.deriv_lipschitz_y, std::abs(deriv - prev_deriv) / y_step);
            }
            prev_deriv = deriv;

            if (it > 0) {
                const double s = (it - 1) * t_step;
                const double quotient = std::abs(coeff.value(t, y) - coeff.value(s, y)) /
                                        ((1.0 + std::abs(y)) *
                                         std::pow(t - s, coeff.hoelder_exponent));
                diag.hoelder_quotient_t = std::max(diag.hoelder_quotient_t, quotient);
            }
        }
    }
    return diag;
}

} // namespace

AssumptionReport spot_check_assumptions(const SdeProblem& problem, const LatticeSpec& lattice) {
    if (lattice.t_samples < 1 || lattice.y_samples < 1 || !(lattice.y_lo < lattice.y_hi)) {
        throw std::invalid_argument("spot_check_assumptions: invalid lattice");
    }
    AssumptionReport report;
    report.mu = diagnose_coefficient(problem.mu, problem.horizon_T, lattice);
    report.sigma = diagnose_coefficient(problem.sigma, problem.horizon_T, lattice);
    report.rho = diagnose_coefficient(problem.rho, problem.horizon_T, lattice);
    return report;
}

double max_derivative_mismatch(const Coefficient& coeff, double horizon_T, int points,
                               std::uint64_t seed, double fd_step) {
    CounterRng rng(SeedSpec{seed, 0}, kStreamPath);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = rng.uniform(0.0, horizon_T);
        const double y = rng.uniform(-3.0, 3.0);
        const double central =
            (coeff.value(t, y + fd_step) - coeff.value(t, y - fd_step)) / (2.0 * fd_step);
        const double exact = coeff.deriv_y(t, y);
        const double scale = std::max({1.0, std::abs(exact), std::abs(central)});
        worst = std::max(worst, std::abs(central - exact) / scale);
    }
    return worst;
}

} // namespace jumpmil
