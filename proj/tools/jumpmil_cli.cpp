// Command-line front end for the jumpmil shared library. Talks to the core
// exclusively through the C API in jumpmil/jumpmil.h and emits CSV with a
// '#'-comment configuration header, so a fixed (config, seed) pair yields
// byte-identical output for any worker count.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jumpmil/jumpmil.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int exit_code_for(jm_status status) {
    return status == JM_ERR_INVALID_ARGUMENT ? kExitUsage : kExitNumerical;
}

int fail(jm_status status, const char* what) {
    std::cerr << "jumpmil-cli: " << what << ": " << jm_last_error() << "\n";
    return exit_code_for(status);
}

struct ProblemOptions {
    std::string problem = "example";
    double lambda = 100.0;
    // example / jcc-family parameters
    double M = 100.0;
    double rho1 = 0.1;
    double rho2 = 0.6;
    // linear problem parameters
    double a = 0.5;
    double b = 0.2;
    double c = 0.1;
    double x0 = 1.0;
    double horizon = 1.0;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--problem", problem, "Problem name: example, linear, jcc-family")
            ->check(CLI::IsMember({"example", "linear", "jcc-family"}))
            ->capture_default_str();
        cmd->add_option("--lambda", lambda, "Poisson intensity")->capture_default_str();
        cmd->add_option("--M", M, "Frequency parameter of the trigonometric problems")
            ->capture_default_str();
        cmd->add_option("--rho1", rho1, "Drift time-Hoelder exponent")->capture_default_str();
        cmd->add_option("--rho2", rho2, "Diffusion time-Hoelder exponent")->capture_default_str();
        cmd->add_option("--a", a, "Linear drift coefficient")->capture_default_str();
        cmd->add_option("--b", b, "Linear diffusion coefficient")->capture_default_str();
        cmd->add_option("--c", c, "Linear jump coefficient")->capture_default_str();
        cmd->add_option("--x0", x0, "Initial value of the linear problem")->capture_default_str();
        cmd->add_option("--T", horizon, "Horizon of the linear problem")->capture_default_str();
    }

    jm_status create(jm_problem** out) const {
        if (problem == "linear") {
            return jm_problem_create_linear(a, b, c, x0, horizon, lambda, out);
        }
        if (problem == "jcc-family") {
            return jm_problem_create_jcc_family(M, rho1, rho2, lambda, out);
        }
        return jm_problem_create_example(M, rho1, rho2, lambda, out);
    }

    void echo(std::ostream& out) const {
        out << "# problem=" << problem << "\n";
        out << "# lambda=" << fmt(lambda) << "\n";
        if (problem == "linear") {
            out << "# a=" << fmt(a) << "\n# b=" << fmt(b) << "\n# c=" << fmt(c) << "\n";
            out << "# x0=" << fmt(x0) << "\n# T=" << fmt(horizon) << "\n";
        } else {
            out << "# M=" << fmt(M) << "\n# rho1=" << fmt(rho1) << "\n# rho2=" << fmt(rho2)
                << "\n";
        }
    }
};

struct RunOptions {
    std::vector<std::string> schemes;
    std::vector<double> p_values;
    int k_min = 3;
    int k_max = 10;
    std::uint64_t paths = 4096;
    std::uint64_t seed = 42;
    std::string error_mode = "successive";
    int fit_kmin = 4;
    int threads = 0;
    std::string output = "-";
};

void add_run_flags(CLI::App* cmd, RunOptions& opt, bool with_scheme_and_p) {
    if (with_scheme_and_p) {
        cmd->add_option("--scheme", opt.schemes,
                        "Scheme (repeatable): euler, rand-euler, milstein, rand-milstein, "
                        "rand-milstein-jcc");
        cmd->add_option("--p", opt.p_values, "L^p order (repeatable)");
    }
    cmd->add_option("--kmin", opt.k_min, "Coarsest simulated level")->capture_default_str();
    cmd->add_option("--kmax", opt.k_max, "Finest simulated level")->capture_default_str();
    cmd->add_option("--paths", opt.paths, "Number of Monte Carlo paths")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
    if (with_scheme_and_p) {
        cmd->add_option("--error-mode", opt.error_mode,
                        "successive (coupled refinement) or exact (needs exact solution)")
            ->check(CLI::IsMember({"successive", "exact"}))
            ->capture_default_str();
    }
    cmd->add_option("--fit-kmin", opt.fit_kmin, "Smallest level used in the slope regression")
        ->capture_default_str();
    cmd->add_option("--threads", opt.threads,
                    "Worker threads (0 = JUMPMIL_THREADS env or hardware)")
        ->capture_default_str();
    cmd->add_option("--output", opt.output, "Output file ('-' = stdout)")->capture_default_str();
}

class OutputFile {
public:
    explicit OutputFile(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            ok_ = static_cast<bool>(file_);
        }
    }
    bool ok() const { return ok_; }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
    bool ok_ = true;
};

void echo_run_config(std::ostream& out, const char* subcommand, const ProblemOptions& popt,
                     const RunOptions& opt) {
    out << "# jumpmil-cli " << jm_version() << "\n";
    out << "# subcommand=" << subcommand << "\n";
    popt.echo(out);
    out << "# schemes=";
    for (std::size_t i = 0; i < opt.schemes.size(); ++i) {
        out << (i ? "," : "") << opt.schemes[i];
    }
    out << "\n# p=";
    for (std::size_t i = 0; i < opt.p_values.size(); ++i) {
        out << (i ? "," : "") << fmt(opt.p_values[i]);
    }
    out << "\n";
    out << "# kmin=" << opt.k_min << "\n# kmax=" << opt.k_max << "\n";
    out << "# paths=" << opt.paths << "\n# seed=" << opt.seed << "\n";
    out << "# error_mode=" << opt.error_mode << "\n# fit_kmin=" << opt.fit_kmin << "\n";
}

struct ProblemHandle {
    jm_problem* ptr = nullptr;
    ~ProblemHandle() { jm_problem_free(ptr); }
};

struct ConvergenceHandle {
    jm_convergence* ptr = nullptr;
    ~ConvergenceHandle() { jm_convergence_free(ptr); }
};

// Shared by the convergence, compare-schemes and figure presets.
int run_convergence_command(const char* subcommand, const ProblemOptions& popt,
                            const RunOptions& opt, bool summary_only) {
    ProblemHandle problem;
    jm_status status = popt.create(&problem.ptr);
    if (status != JM_OK) return fail(status, "problem construction failed");

    const int exact_mode = opt.error_mode == "exact" ? 1 : 0;

    std::vector<ConvergenceHandle> runs(opt.schemes.size());
    for (std::size_t s = 0; s < opt.schemes.size(); ++s) {
        status = jm_convergence_run(problem.ptr, opt.schemes[s].c_str(), opt.p_values.data(),
                                    opt.p_values.size(), opt.k_min, opt.k_max, opt.paths,
                                    opt.seed, exact_mode, opt.fit_kmin, opt.threads,
                                    &runs[s].ptr);
        if (status != JM_OK) return fail(status, "convergence run failed");
    }

    OutputFile out(opt.output);
    if (!out.ok()) {
        std::cerr << "jumpmil-cli: cannot open output file '" << opt.output << "'\n";
        return kExitNumerical;
    }
    std::ostream& os = out.stream();
    echo_run_config(os, subcommand, popt, opt);

    const char* problem_name = jm_problem_name(problem.ptr);
    if (!summary_only) {
        os << "problem,scheme,p,k,delta,error,std_error,paths,aborted\n";
        for (std::size_t s = 0; s < opt.schemes.size(); ++s) {
            for (std::size_t bi = 0; bi < jm_convergence_block_count(runs[s].ptr); ++bi) {
                jm_convergence_block block;
                jm_convergence_get_block(runs[s].ptr, bi, &block);
                for (std::size_t i = 0; i < block.n_levels; ++i) {
                    os << problem_name << ',' << opt.schemes[s] << ',' << fmt(block.p) << ','
                       << block.levels[i] << ',' << fmt(block.deltas[i]) << ','
                       << fmt(block.errors[i]) << ',' << fmt(block.std_errors[i]) << ','
                       << block.n_paths << ',' << block.aborted_paths << "\n";
                }
            }
        }
    }

    os << "problem,scheme,p,slope,slope_std_error,theoretical_rate,degenerate\n";
    for (std::size_t s = 0; s < opt.schemes.size(); ++s) {
        for (std::size_t bi = 0; bi < jm_convergence_block_count(runs[s].ptr); ++bi) {
            jm_convergence_block block;
            jm_convergence_get_block(runs[s].ptr, bi, &block);
            if (block.zero_error_levels > 0) {
                std::cerr << "jumpmil-cli: warning: dropped " << block.zero_error_levels
                          << " zero-error level(s) from the fit (scheme " << opt.schemes[s]
                          << ", p=" << fmt(block.p) << ")\n";
            }
            os << problem_name << ',' << opt.schemes[s] << ',' << fmt(block.p) << ','
               << fmt(block.fitted_slope) << ',' << fmt(block.slope_std_error) << ','
               << fmt(block.theoretical_rate) << ',' << (block.slope_defined ? 0 : 1) << "\n";
        }
    }
    os.flush();
    return kExitOk;
}

struct LevyOptions {
    double lambda = 100.0;
    double horizon = 1.0;
    int level = 4;
    std::uint64_t paths = 100000;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string output = "-";
};

int run_levy_command(const LevyOptions& opt) {
    jm_levy_result result;
    const jm_status status = jm_levy_mse_run(opt.lambda, opt.horizon, opt.level, opt.paths,
                                             opt.seed, opt.threads, &result);
    if (status != JM_OK) return fail(status, "levy-mse run failed");

    OutputFile out(opt.output);
    if (!out.ok()) {
        std::cerr << "jumpmil-cli: cannot open output file '" << opt.output << "'\n";
        return kExitNumerical;
    }
    std::ostream& os = out.stream();
    os << "# jumpmil-cli " << jm_version() << "\n";
    os << "# subcommand=levy-mse\n";
    os << "# lambda=" << fmt(opt.lambda) << "\n# T=" << fmt(opt.horizon) << "\n";
    os << "# level=" << opt.level << "\n# paths=" << opt.paths << "\n# seed=" << opt.seed
       << "\n";
    os << "level,n,empirical_mse,theoretical_mse,std_error,paths\n";
    os << opt.level << ',' << result.n << ',' << fmt(result.empirical_mse) << ','
       << fmt(result.theoretical_mse) << ',' << fmt(result.mc_standard_error) << ','
       << result.n_paths << "\n";
    os.flush();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jumpmil: strong approximation of scalar jump-diffusion SDEs"};
    app.require_subcommand(1);

    // convergence
    auto* conv = app.add_subcommand("convergence", "Strong L^p convergence experiment");
    ProblemOptions conv_problem;
    RunOptions conv_run;
    conv_problem.add_flags(conv);
    add_run_flags(conv, conv_run, true);

    // compare-schemes
    auto* compare = app.add_subcommand("compare-schemes",
                                       "Run several schemes on the same coupled paths");
    ProblemOptions cmp_problem;
    RunOptions cmp_run;
    cmp_problem.add_flags(compare);
    add_run_flags(compare, cmp_run, true);

    // levy-mse
    auto* levy = app.add_subcommand("levy-mse",
                                    "Mean-square error of the trapezoidal Levy-area method");
    LevyOptions levy_opt;
    levy->add_option("--lambda", levy_opt.lambda, "Poisson intensity")->capture_default_str();
    levy->add_option("--T", levy_opt.horizon, "Horizon")->capture_default_str();
    levy->add_option("--level", levy_opt.level, "Mesh level (n = 2^level)")
        ->capture_default_str();
    levy->add_option("--paths", levy_opt.paths, "Number of Monte Carlo paths")
        ->capture_default_str();
    levy->add_option("--seed", levy_opt.seed, "Master seed")->capture_default_str();
    levy->add_option("--threads", levy_opt.threads,
                     "Worker threads (0 = JUMPMIL_THREADS env or hardware)")
        ->capture_default_str();
    levy->add_option("--output", levy_opt.output, "Output file ('-' = stdout)")
        ->capture_default_str();

    // path-dump
    auto* dump = app.add_subcommand("path-dump", "Write one path of driving noise (binary)");
    double dump_T = 1.0, dump_lambda = 100.0;
    int dump_level = 4;
    std::uint64_t dump_seed = 42, dump_index = 0;
    std::string dump_output = "path.jmpd";
    dump->add_option("--T", dump_T, "Horizon")->capture_default_str();
    dump->add_option("--level", dump_level, "Grid level (n = 2^level)")->capture_default_str();
    dump->add_option("--lambda", dump_lambda, "Poisson intensity")->capture_default_str();
    dump->add_option("--seed", dump_seed, "Master seed")->capture_default_str();
    dump->add_option("--path-index", dump_index, "Path index within the seed")
        ->capture_default_str();
    dump->add_option("--output", dump_output, "Output file")->capture_default_str();

    // figure presets; default to the window with lambda*delta < 1, where the
    // benchmark problem's rate law is visible
    auto* fig1 = app.add_subcommand(
        "figure1", "Preset: error curves of the benchmark problem for p = 1..4");
    RunOptions fig1_run;
    fig1_run.k_min = 7;
    fig1_run.k_max = 13;
    fig1_run.fit_kmin = 8;
    add_run_flags(fig1, fig1_run, false);
    auto* fig2 = app.add_subcommand(
        "figure2", "Preset: fitted slope vs theoretical rate for p = 1..8");
    RunOptions fig2_run;
    fig2_run.k_min = 7;
    fig2_run.k_max = 13;
    fig2_run.fit_kmin = 8;
    add_run_flags(fig2, fig2_run, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*conv) {
        if (conv_run.schemes.empty()) conv_run.schemes = {"rand-milstein-jcc"};
        if (conv_run.p_values.empty()) conv_run.p_values = {2.0};
        return run_convergence_command("convergence", conv_problem, conv_run, false);
    }
    if (*compare) {
        if (cmp_run.schemes.empty()) {
            cmp_run.schemes = {"euler", "rand-euler", "milstein", "rand-milstein",
                               "rand-milstein-jcc"};
        }
        if (cmp_run.p_values.empty()) cmp_run.p_values = {2.0};
        return run_convergence_command("compare-schemes", cmp_problem, cmp_run, false);
    }
    if (*levy) {
        return run_levy_command(levy_opt);
    }
    if (*dump) {
        const jm_status status =
            jm_path_dump(dump_T, dump_level, dump_lambda, dump_seed, dump_index,
                         dump_output.c_str());
        if (status != JM_OK) return fail(status, "path-dump failed");
        return kExitOk;
    }
    if (*fig1) {
        ProblemOptions preset;  // benchmark configuration of the example problem
        fig1_run.schemes = {"rand-milstein-jcc"};
        fig1_run.p_values = {1.0, 2.0, 3.0, 4.0};
        return run_convergence_command("figure1", preset, fig1_run, false);
    }
    if (*fig2) {
        ProblemOptions preset;
        fig2_run.schemes = {"rand-milstein-jcc"};
        fig2_run.p_values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
        return run_convergence_command("figure2", preset, fig2_run, true);
    }
    return kExitUsage;
}
