#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <cstdlib>

#include "convergence.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "test_support.hpp"

using namespace jumpmil;

TEST_CASE("successive_error arithmetic") {
    SUBCASE("identical lists give zero with zero standard error") {
        const std::vector<double> a{1.0, 2.0, 3.0};
        const auto [err, se] = successive_error(a, a, 2.0);
        CHECK(err == 0.0);
        CHECK(se == 0.0);
    }
    SUBCASE("diffs {0.1, 0.3} at p = 2") {
        const std::vector<double> fine{0.1, 0.3};
        const std::vector<double> coarse{0.0, 0.0};
        const auto [err, se] = successive_error(fine, coarse, 2.0);
        CHECK(err == doctest::Approx(std::sqrt(0.05)).epsilon(1e-14));
        CHECK(se > 0.0);
    }
    SUBCASE("diffs {0.1, 0.3} at p = 1") {
        const std::vector<double> fine{0.1, 0.3};
        const std::vector<double> coarse{0.0, 0.0};
        const auto [err, se] = successive_error(fine, coarse, 1.0);
        CHECK(err == doctest::Approx(0.2));
    }
    SUBCASE("validation") {
        const std::vector<double> a{1.0, 2.0};
        const std::vector<double> b{1.0};
        CHECK_THROWS_AS(successive_error(a, b, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(successive_error(a, a, 0.5), std::invalid_argument);
    }
}

TEST_CASE("exact_error arithmetic") {
    SUBCASE("numeric equals exact") {
        const std::vector<double> a{0.4, -0.3};
        CHECK(exact_error(a, a, 3.0).first == 0.0);
    }
    SUBCASE("constant offset") {
        const std::vector<double> numeric{0.7, 0.7, 0.7};
        const std::vector<double> exact(3, 0.0);
        CHECK(exact_error(numeric, exact, 2.0).first == doctest::Approx(0.7));
    }
    SUBCASE("single pair at p = 3") {
        const std::vector<double> numeric{1.5};
        const std::vector<double> exact{1.0};
        const auto [err, se] = exact_error(numeric, exact, 3.0);
        CHECK(err == doctest::Approx(0.5));
        CHECK(se == 0.0);
    }
}

TEST_CASE("fit_slope least squares") {
    SUBCASE("exact line of slope 0.6") {
        std::vector<double> x, y;
        for (int k = 4; k <= 10; ++k) {
            x.push_back(-static_cast<double>(k));
            y.push_back(0.6 * x.back() + 1.7);
        }
        const auto [slope, se] = fit_slope(x, y);
        CHECK(slope == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(se == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("constant errors give slope zero") {
        const std::vector<double> x{-4.0, -5.0, -6.0};
        const std::vector<double> y{2.0, 2.0, 2.0};
        CHECK(fit_slope(x, y).first == doctest::Approx(0.0));
    }
    SUBCASE("identity scaling gives slope one") {
        const std::vector<double> x{-4.0, -5.0, -6.0, -7.0};
        CHECK(fit_slope(x, x).first == doctest::Approx(1.0));
    }
    SUBCASE("validation") {
        const std::vector<double> two{-4.0, -5.0};
        CHECK_THROWS_AS(fit_slope(two, two), std::invalid_argument);
        const std::vector<double> x{-4.0, -5.0, -6.0};
        const std::vector<double> bad{1.0, std::nan(""), 2.0};
        CHECK_THROWS_AS(fit_slope(x, bad), std::invalid_argument);
    }
}

TEST_CASE("theoretical rate law") {
    // Benchmark configuration: min{2/p, 0.1 + 1/p, 0.6}.
    CHECK(theoretical_rate(2.0, 0.1, 0.6, 0.6, RateVariant::Jump) == doctest::Approx(0.6));
    CHECK(theoretical_rate(4.0, 0.1, 0.6, 0.6, RateVariant::Jump) == doctest::Approx(0.35));
    CHECK(theoretical_rate(8.0, 0.1, 0.6, 0.6, RateVariant::Jump) == doctest::Approx(0.225));
    CHECK(theoretical_rate(2.0, 1.0, 1.0, 1.0, RateVariant::Jump) == doctest::Approx(1.0));
    // p in [1,2) maps to the p = 2 rate.
    CHECK(theoretical_rate(1.0, 0.1, 0.6, 0.6, RateVariant::Jump) ==
          theoretical_rate(2.0, 0.1, 0.6, 0.6, RateVariant::Jump));
    // Classical Milstein loses the randomization gain on the drift.
    CHECK(theoretical_rate(2.0, 0.1, 0.6, 0.6, RateVariant::ClassicalMilstein) ==
          doctest::Approx(0.1));
    // Jump-free rate min{rho1 + 1/2, rho2}.
    CHECK(theoretical_rate(2.0, 0.1, 0.6, 1.0, RateVariant::JumpFree) == doctest::Approx(0.6));
    CHECK(theoretical_rate(2.0, 0.3, 0.9, 1.0, RateVariant::JumpFree) == doctest::Approx(0.8));

    CHECK_THROWS_AS(theoretical_rate(2.0, 0.0, 0.6, 0.6, RateVariant::Jump),
                    std::invalid_argument);
    CHECK_THROWS_AS(theoretical_rate(2.0, 0.1, 1.2, 0.6, RateVariant::Jump),
                    std::invalid_argument);
    CHECK_THROWS_AS(theoretical_rate(0.5, 0.1, 0.6, 0.6, RateVariant::Jump),
                    std::invalid_argument);
}

TEST_CASE("rate law properties") {
    CounterRng rng(SeedSpec{51, 0}, kStreamPath);
    for (int i = 0; i < 200; ++i) {
        const double r1 = rng.uniform(0.05, 1.0);
        const double r2 = rng.uniform(0.05, 1.0);
        const double r3 = rng.uniform(0.05, 1.0);
        const double p = rng.uniform(1.0, 8.0);
        // symmetric under swapping rho2 and rho3
        CHECK(theoretical_rate(p, r1, r2, r3, RateVariant::Jump) ==
              theoretical_rate(p, r1, r3, r2, RateVariant::Jump));
        // piecewise-linear in 1/p: equals the min of the four candidate lines
        const double pe = std::max(p, 2.0);
        const double expected =
            std::min({2.0 / pe, r1 + 1.0 / pe, r2, r3});
        CHECK(theoretical_rate(p, r1, r2, r3, RateVariant::Jump) == doctest::Approx(expected));
        // non-increasing in p
        CHECK(theoretical_rate(p + 0.5, r1, r2, r3, RateVariant::Jump) <=
              theoretical_rate(p, r1, r2, r3, RateVariant::Jump) + 1e-15);
    }
}

TEST_CASE("experiment report structure") {
    const SdeProblem problem = builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 1.0);

    SUBCASE("successive mode reports k_min+1 .. k_max") {
        ConvergenceConfig config;
        config.p_values = {2.0};
        config.k_min = 3;
        config.k_max = 10;
        config.n_paths = 128;
        config.master_seed = 9;
        const auto reports = run_convergence_experiment(problem, SchemeKind::EulerMaruyama,
                                                        config);
        REQUIRE(reports.size() == 1);
        const LevelErrors& le = reports[0].level_errors;
        REQUIRE(le.levels.size() == 7);
        CHECK(le.levels.front() == 4);
        CHECK(le.levels.back() == 10);
        CHECK(le.deltas.front() == doctest::Approx(std::pow(2.0, -4)));
        CHECK(le.n_paths == 128);
        CHECK(le.aborted_paths == 0);
        CHECK(reports[0].slope_defined);
        CHECK(reports[0].theoretical_rate == doctest::Approx(0.5));
    }
    SUBCASE("exact mode reports k_min .. k_max") {
        ConvergenceConfig config;
        config.p_values = {2.0, 4.0};
        config.k_min = 5;
        config.k_max = 8;
        config.n_paths = 128;
        config.mode = ErrorMode::Exact;
        const auto reports = run_convergence_experiment(problem, SchemeKind::RandomizedMilstein,
                                                        config);
        REQUIRE(reports.size() == 2);
        CHECK(reports[0].level_errors.levels.size() == 4);
        CHECK(reports[0].level_errors.levels.front() == 5);
        CHECK(reports[1].level_errors.p == 4.0);
    }
    SUBCASE("validation") {
        ConvergenceConfig config;
        config.k_min = 0;
        CHECK_THROWS_AS(run_convergence_experiment(problem, SchemeKind::EulerMaruyama, config),
                        std::invalid_argument);
        config.k_min = 3;
        config.k_max = 3;
        CHECK_THROWS_AS(run_convergence_experiment(problem, SchemeKind::EulerMaruyama, config),
                        std::invalid_argument);
        config.k_max = 6;
        config.n_paths = 10;
        CHECK_THROWS_AS(run_convergence_experiment(problem, SchemeKind::EulerMaruyama, config),
                        std::invalid_argument);
        config.n_paths = 128;
        config.mode = ErrorMode::Exact;
        SdeProblem no_exact = problem;
        no_exact.exact_terminal = nullptr;
        CHECK_THROWS_AS(run_convergence_experiment(no_exact, SchemeKind::EulerMaruyama, config),
                        std::invalid_argument);
    }
}

TEST_CASE("zero-coefficient problem is reported as degenerate") {
    const SdeProblem problem = builtin_linear_jump_diffusion(0.0, 0.0, 0.0, 1.0, 1.0, 1.0);
    ConvergenceConfig config;
    config.p_values = {2.0};
    config.k_min = 3;
    config.k_max = 7;
    config.n_paths = 128;
    const auto reports =
        run_convergence_experiment(problem, SchemeKind::RandomizedMilsteinJcc, config);
    REQUIRE(reports.size() == 1);
    for (double err : reports[0].level_errors.errors) CHECK(err == 0.0);
    CHECK_FALSE(reports[0].slope_defined);
    CHECK(reports[0].zero_error_levels == 4);  // levels 4..7
}

TEST_CASE("results are independent of the worker count") {
    const SdeProblem problem = builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 2.0);
    ConvergenceConfig config;
    config.p_values = {2.0};
    config.k_min = 3;
    config.k_max = 8;
    config.n_paths = 256;
    config.threads = 1;
    const auto serial =
        run_convergence_experiment(problem, SchemeKind::RandomizedMilsteinJcc, config);
    config.threads = 8;
    const auto parallel =
        run_convergence_experiment(problem, SchemeKind::RandomizedMilsteinJcc, config);
    CHECK(serial[0].level_errors.errors == parallel[0].level_errors.errors);
    CHECK(serial[0].fitted_slope == parallel[0].fitted_slope);
}

TEST_CASE("breaking the path coupling inflates the estimator") {
    // Negative control: error(k) computed from mismatched paths must be an
    // order of magnitude above the properly coupled estimator.
    const SdeProblem problem = builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 1.0);
    const int k = 7;
    const int n_paths = 1024;
    std::vector<double> fine_terminals(n_paths), coarse_terminals(n_paths);
    for (int i = 0; i < n_paths; ++i) {
        const SeedSpec seed{606, static_cast<std::uint64_t>(i)};
        const PathPrimitive fine = sample_fine_path(seed, build_grid(1.0, k), 1.0);
        fine_terminals[i] =
            run_scheme(problem, SchemeKind::RandomizedMilstein, fine).terminal();
        coarse_terminals[i] =
            run_scheme(problem, SchemeKind::RandomizedMilstein, coarsen(fine, seed)).terminal();
    }
    const double coupled = successive_error(fine_terminals, coarse_terminals, 2.0).first;

    std::vector<double> shuffled(coarse_terminals.begin() + 1, coarse_terminals.end());
    shuffled.push_back(coarse_terminals.front());  // pair path i with path i+1
    const double broken = successive_error(fine_terminals, shuffled, 2.0).first;
    CHECK(broken > 10.0 * coupled);
}

TEST_CASE("thread count resolution honors the environment fallback") {
    setenv("JUMPMIL_THREADS", "3", 1);
    CHECK(resolve_thread_count(0) == 3);
    CHECK(resolve_thread_count(5) == 5);  // explicit request wins
    unsetenv("JUMPMIL_THREADS");
    CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("scheme rate attachment") {
    const SdeProblem with_jumps = builtin_linear_jump_diffusion(0.5, 0.2, 0.1, 1.0, 1.0, 2.0);
    CHECK(scheme_theoretical_rate(with_jumps, SchemeKind::EulerMaruyama, 2.0) == 0.5);
    CHECK(scheme_theoretical_rate(with_jumps, SchemeKind::RandomizedMilstein, 2.0) ==
          doctest::Approx(1.0));
    const SdeProblem jump_free = builtin_linear_jump_diffusion(0.5, 0.2, 0.0, 1.0, 1.0, 0.0);
    CHECK(scheme_theoretical_rate(jump_free, SchemeKind::RandomizedMilstein, 2.0) ==
          doctest::Approx(1.0));  // min{1 + 1/2, 1}
}
