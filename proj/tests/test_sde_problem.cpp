#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "driver_paths.hpp"
#include "schemes.hpp"
#include "sde_problem.hpp"
#include "test_support.hpp"

using namespace jumpmil;

namespace {

Coefficient constant_coeff(double value) {
    return Coefficient{[value](double, double) { return value; },
                       [](double, double) { return 0.0; }, 1.0};
}

Coefficient scaled_identity(double factor) {
    return Coefficient{[factor](double, double y) { return factor * y; },
                       [factor](double, double) { return factor; }, 1.0};
}

} // namespace

TEST_CASE("l1_apply algebra") {
    const Coefficient sigma = scaled_identity(0.3);
    CHECK(l1_apply(constant_coeff(5.0), sigma, 0.2, 1.7) == 0.0);
    CHECK(l1_apply(sigma, constant_coeff(0.0), 0.2, 1.7) == 0.0);
    // sigma = b y applied to itself: b^2 y.
    CHECK(l1_apply(sigma, sigma, 0.0, 2.0) == doctest::Approx(0.09 * 2.0));
}

TEST_CASE("lm1_apply algebra") {
    const Coefficient rho_zero = constant_coeff(0.0);
    const Coefficient f = scaled_identity(2.5);
    CHECK(lm1_apply(f, rho_zero, 0.1, 0.4) == 0.0);
    // f = a y with constant jump r: a r.
    CHECK(lm1_apply(f, constant_coeff(0.2), 0.1, 0.4) == doctest::Approx(2.5 * 0.2));
    // sigma = b y, rho = c y, f = sigma: b c y.
    const Coefficient sigma = scaled_identity(0.3);
    const Coefficient rho = scaled_identity(0.7);
    CHECK(lm1_apply(sigma, rho, 0.0, 2.0) == doctest::Approx(0.3 * 0.7 * 2.0));
}

TEST_CASE("check_jcc on the linear problem has zero residual") {
    const SdeProblem problem = builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 1.0);
    const JccReport report = check_jcc(problem, 21, 101, -5.0, 5.0, 1e-10);
    CHECK(report.passed);
    CHECK(report.max_abs_residual < 1e-12);
    CHECK(report.sample_count == 21 * 101);
}

TEST_CASE("check_jcc accepts the benchmark problem at 1e-10") {
    const SdeProblem problem = builtin_example_sde(100.0, 0.1, 0.6, 100.0);
    const JccReport report =
        check_jcc(problem, kJccDefaultTSamples, kJccDefaultYSamples, -5.0, 5.0, 1e-10);
    CHECK(report.passed);
    CHECK(problem.jcc_verified);
}

TEST_CASE("check_jcc rejects a non-commutative pair") {
    // sigma = cos(y), rho = 1: L1 rho = 0 but L-1 sigma = cos(y+1) - cos(y).
    SdeProblem problem;
    problem.name = "cosine";
    problem.mu = constant_coeff(0.0);
    problem.sigma = Coefficient{[](double, double y) { return std::cos(y); },
                                [](double, double y) { return -std::sin(y); }, 1.0};
    problem.rho = constant_coeff(1.0);
    problem.horizon_T = 1.0;
    const JccReport report = check_jcc(problem, 11, 101, -5.0, 5.0, 1e-9);
    CHECK_FALSE(report.passed);
    CHECK(report.max_abs_residual > 0.1);
}

TEST_CASE("check_jcc argument validation") {
    const SdeProblem problem = builtin_linear_jump_diffusion(0.0, 0.0, 0.0, 1.0, 1.0, 1.0);
    CHECK_THROWS_AS(check_jcc(problem, 0, 10, -1.0, 1.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(check_jcc(problem, 10, 10, 1.0, 1.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(check_jcc(problem, 10, 10, -1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("benchmark problem values") {
    const SdeProblem problem = builtin_example_sde(100.0, 0.1, 0.6, 100.0);
    CHECK(problem.x0 == 1.0);
    CHECK(problem.horizon_T == 1.0);
    CHECK(problem.intensity_lambda == 100.0);
    CHECK(problem.mu.value(0.0, 0.0) == 0.0);       // sin(0)
    CHECK(problem.sigma.value(0.0, 0.0) == 1.0);    // cos(0)
    CHECK(problem.rho.hoelder_exponent == doctest::Approx(0.6));

    // The jump maps every state onto the curve y*(t) = pi/(2M (1+t)^rho2),
    // which is a fixed point of y -> y + rho(t, y).
    for (double t : {0.0, 0.3, 1.0}) {
        const double y_star = std::asin(1.0) / (100.0 * std::pow(1.0 + t, 0.6));
        const double jumped = y_star + problem.rho.value(t, y_star);
        CHECK(jumped == doctest::Approx(y_star).epsilon(1e-12));
    }
    CHECK_THROWS_AS(builtin_example_sde(0.0, 0.1, 0.6, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(builtin_example_sde(100.0, 0.0, 0.6, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(builtin_example_sde(100.0, 0.1, 1.2, 100.0), std::invalid_argument);
}

TEST_CASE("linear problem exact terminal") {
    SUBCASE("all-zero coefficients freeze the state") {
        const SdeProblem p = builtin_linear_jump_diffusion(0.0, 0.0, 0.0, 1.5, 1.0, 1.0);
        CHECK(p.exact_terminal(0.7, 3) == doctest::Approx(1.5));
        CHECK(p.exact_terminal(-2.0, 0) == doctest::Approx(1.5));
    }
    SUBCASE("c = -1 absorbs at the first jump") {
        const SdeProblem p = builtin_linear_jump_diffusion(0.1, 0.2, -1.0, 2.0, 1.0, 1.0);
        CHECK(p.exact_terminal(0.3, 1) == 0.0);
        CHECK(p.exact_terminal(0.3, 5) == 0.0);
        CHECK(p.exact_terminal(0.3, 0) > 0.0);
    }
    SUBCASE("jump factor (1+c)^N") {
        const SdeProblem p = builtin_linear_jump_diffusion(0.0, 0.0, 1.0, 1.5, 1.0, 1.0);
        CHECK(p.exact_terminal(0.0, 2) == doctest::Approx(6.0));
    }
}

TEST_CASE("linear exact terminal agrees with a fine-grid Euler run") {
    // Independent route: Euler at level 16 on the same driving path must sit
    // within the slope-1/2 Euler error band of the closed-form solution.
    const SdeProblem problem = builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 1.0);
    const Grid fine = build_grid(1.0, 16);
    const int n_paths = 100;
    double sq_sum = 0.0;
    for (int i = 0; i < n_paths; ++i) {
        const PathPrimitive path =
            sample_fine_path(SeedSpec{314159, static_cast<std::uint64_t>(i)}, fine, 1.0);
        const Trajectory traj = run_scheme(problem, SchemeKind::EulerMaruyama, path);
        const double exact = problem.exact_terminal(path.terminal_w(), path.terminal_n());
        const double diff = traj.terminal() - exact;
        sq_sum += diff * diff;
    }
    const double rmse = std::sqrt(sq_sum / n_paths);
    CHECK(rmse > 0.0);
    CHECK(rmse < 5e-3);  // a missing Ito correction alone would cost ~2e-2
}

TEST_CASE("jcc family construction") {
    SUBCASE("F identically zero is trivially commutative") {
        JccFamilySpec spec;
        spec.F = [](double) { return 0.0; };
        spec.F_prime = [](double) { return 0.0; };
        spec.alpha = [](double) { return 1.0; };
        spec.beta = [](double) { return 0.0; };
        spec.gamma = [](double) { return 0.0; };
        spec.mu = constant_coeff(0.0);
        const SdeProblem p = builtin_jcc_family(spec);
        CHECK(p.jcc_verified);
        CHECK(p.sigma.value(0.5, 2.0) == 0.0);
    }
    SUBCASE("F identity with gamma = 0") {
        // sigma = y, rho = -y: L-1 sigma = -y = L1 rho.
        JccFamilySpec spec;
        spec.F = [](double x) { return x; };
        spec.F_prime = [](double) { return 1.0; };
        spec.alpha = [](double) { return 1.0; };
        spec.beta = [](double) { return 0.0; };
        spec.gamma = [](double) { return 0.0; };
        spec.mu = constant_coeff(0.0);
        const SdeProblem p = builtin_jcc_family(spec);
        CHECK(p.sigma.value(0.0, 2.0) == 2.0);
        CHECK(p.rho.value(0.0, 2.0) == -2.0);
        CHECK(lm1_apply(p.sigma, p.rho, 0.0, 2.0) == doctest::Approx(-2.0));
        CHECK(l1_apply(p.rho, p.sigma, 0.0, 2.0) == doctest::Approx(-2.0));
    }
    SUBCASE("violating the anchor condition fails construction") {
        JccFamilySpec spec;
        spec.F = [](double x) { return x; };
        spec.F_prime = [](double) { return 1.0; };
        spec.alpha = [](double) { return 1.0; };
        spec.beta = [](double) { return 0.0; };
        spec.gamma = [](double) { return 1.0; };  // alpha*gamma + beta = 1, F(1) != 0
        spec.mu = constant_coeff(0.0);
        CHECK_THROWS_AS(builtin_jcc_family(spec), std::runtime_error);
    }
    SUBCASE("sine family passes and mirrors the benchmark structure") {
        const SdeProblem p = builtin_jcc_sine_family(100.0, 0.1, 0.6, 100.0);
        CHECK(p.jcc_verified);
        CHECK(p.sigma.value(0.0, 0.0) == doctest::Approx(0.0));  // sin(0)
        const JccReport report = check_jcc(p);
        CHECK(report.passed);
    }
}

TEST_CASE("analytic derivatives match central differences") {
    const std::vector<SdeProblem> problems = {
        builtin_example_sde(100.0, 0.1, 0.6, 100.0),
        builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 1.0),
        builtin_jcc_sine_family(100.0, 0.1, 0.6, 100.0),
    };
    for (const SdeProblem& p : problems) {
        CAPTURE(p.name);
        CHECK(max_derivative_mismatch(p.mu, p.horizon_T, 100, 2718) < 1e-6);
        CHECK(max_derivative_mismatch(p.sigma, p.horizon_T, 100, 2719) < 1e-6);
        CHECK(max_derivative_mismatch(p.rho, p.horizon_T, 100, 2720) < 1e-6);
    }
}

TEST_CASE("assumption spot-check") {
    const LatticeSpec lattice{21, 101, -5.0, 5.0};
    SUBCASE("linear problem has exact Lipschitz estimates") {
        const SdeProblem p = builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 1.0);
        const AssumptionReport report = spot_check_assumptions(p, lattice);
        CHECK(report.mu.lipschitz_y == doctest::Approx(0.5));
        CHECK(report.sigma.lipschitz_y == doctest::Approx(0.2));
        CHECK(report.rho.lipschitz_y == doctest::Approx(0.1));
    }
    SUBCASE("constant coefficients have zero time quotients") {
        SdeProblem p;
        p.mu = constant_coeff(1.0);
        p.sigma = constant_coeff(2.0);
        p.rho = constant_coeff(3.0);
        p.horizon_T = 1.0;
        const AssumptionReport report = spot_check_assumptions(p, lattice);
        CHECK(report.mu.hoelder_quotient_t == 0.0);
        CHECK(report.sigma.hoelder_quotient_t == 0.0);
        CHECK(report.rho.hoelder_quotient_t == 0.0);
    }
    SUBCASE("benchmark problem stays finite at M = 100") {
        const SdeProblem p = builtin_example_sde(100.0, 0.1, 0.6, 100.0);
        const AssumptionReport report = spot_check_assumptions(p, lattice);
        // |sigma'_y| <= M (1+T)^rho2, attained up to lattice resolution.
        CHECK(report.sigma.lipschitz_y > 100.0);
        CHECK(report.sigma.lipschitz_y <= 100.0 * std::pow(2.0, 0.6) + 1e-9);
        CHECK(std::isfinite(report.mu.hoelder_quotient_t));
    }
}
