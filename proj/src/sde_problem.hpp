#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace jumpmil {

using CoefficientFn = std::function<double(double t, double y)>;

// A coefficient function with its exact spatial derivative and the Hoelder
// exponent of its time regularity.
struct Coefficient {
    CoefficientFn value;
    CoefficientFn deriv_y;
    double hoelder_exponent = 1.0;
};

// Scalar jump-diffusion problem
//   dX = mu(t,X) dt + sigma(t,X) dW + rho(t,X-) dN,  X(0) = x0,
// driven by a standard Wiener process and a Poisson process with the given
// intensity. Immutable after construction; evaluators must be pure.
struct SdeProblem {
    std::string name;
    Coefficient mu;
    Coefficient sigma;
    Coefficient rho;
    double x0 = 0.0;
    double horizon_T = 1.0;
    double intensity_lambda = 0.0;
    // Set by factories whose coefficients passed the jump-commutativity check.
    bool jcc_verified = false;
    // Strong solution at T as a function of (W(T), N(T)); empty if unknown.
    std::function<double(double w_terminal, std::uint64_t n_terminal)> exact_terminal;
};

// L1 f(t,y) = sigma(t,y) * f'_y(t,y)
double l1_apply(const Coefficient& f, const Coefficient& sigma, double t, double y);

// L-1 f(t,y) = f(t, y + rho(t,y)) - f(t,y)
double lm1_apply(const Coefficient& f, const Coefficient& rho, double t, double y);

struct JccReport {
    double max_abs_residual = 0.0;
    std::int64_t sample_count = 0;
    bool passed = false;
};

// Evaluates |L-1 sigma - L1 rho| on a (t_samples x y_samples) lattice over
// [0,T] x [y_lo, y_hi]; passes iff the max residual stays within tolerance.
JccReport check_jcc(const SdeProblem& problem, int t_samples, int y_samples, double y_lo,
                    double y_hi, double tolerance);

inline constexpr int kJccDefaultTSamples = 41;
inline constexpr int kJccDefaultYSamples = 201;
inline constexpr double kJccDefaultYLo = -5.0;
inline constexpr double kJccDefaultYHi = 5.0;
inline constexpr double kJccDefaultTolerance = 1e-9;

JccReport check_jcc(const SdeProblem& problem);

// dX = sin(M X (1+t)^rho1) dt + cos(M X (1+t)^rho2) dW
//        + (-X + pi / (2 M (1+t)^rho2)) dN,  X(0) = 1 on [0, 1].
// The jump coefficient is chosen so the JCC holds; its Hoelder exponent is
// taken equal to rho2.
SdeProblem builtin_example_sde(double M, double rho1, double rho2,
                               double intensity_lambda = 100.0);

// dX = a X dt + b X dW + c X dN with known terminal solution
// x0 * exp((a - b^2/2) T + b W(T)) * (1+c)^{N(T)}.
SdeProblem builtin_linear_jump_diffusion(double a, double b, double c, double x0,
                                         double horizon_T, double intensity_lambda = 1.0);

// sigma(t,y) = F(alpha(t) y + beta(t)), rho(t,y) = -y + gamma(t). The JCC
// holds whenever F(x*) = 0 and alpha(t) gamma(t) + beta(t) = x* for all t;
// construction re-verifies this numerically and throws on failure.
struct JccFamilySpec {
    std::function<double(double)> F;
    std::function<double(double)> F_prime;
    std::function<double(double)> alpha;
    std::function<double(double)> beta;
    std::function<double(double)> gamma;
    Coefficient mu;
    double sigma_exponent = 1.0;
    double rho_exponent = 1.0;
    double x0 = 1.0;
    double horizon_T = 1.0;
    double intensity_lambda = 1.0;
    std::string name = "jcc-family";
};

SdeProblem builtin_jcc_family(const JccFamilySpec& spec);

// The sine instance of the family: F = sin, alpha(t) = M (1+t)^rho2,
// beta = 0, gamma(t) = pi / (M (1+t)^rho2), with the example drift.
SdeProblem builtin_jcc_sine_family(double M, double rho1, double rho2,
                                   double intensity_lambda = 100.0);

struct CoefficientDiagnostics {
    double lipschitz_y = 0.0;         // max |f'_y| over the lattice
    double deriv_lipschitz_y = 0.0;   // max |f'_y(t,y') - f'_y(t,y)| / |y'-y|
    double hoelder_quotient_t = 0.0;  // max |f(t,y)-f(s,y)| / ((1+|y|)|t-s|^rho)
};

struct AssumptionReport {
    CoefficientDiagnostics mu;
    CoefficientDiagnostics sigma;
    CoefficientDiagnostics rho;
};

struct LatticeSpec {
    int t_samples = 21;
    int y_samples = 101;
    double y_lo = -5.0;
    double y_hi = 5.0;
};

// Observed (lattice) estimates of the Lipschitz and Hoelder constants; a
// diagnostic only, not a proof of global validity.
AssumptionReport spot_check_assumptions(const SdeProblem& problem, const LatticeSpec& lattice);

// Max relative mismatch between deriv_y and a central finite difference of
// value over `points` pseudo-random (t, y) samples.
double max_derivative_mismatch(const Coefficient& coeff, double horizon_T, int points,
                               std::uint64_t seed, double fd_step = 1e-5);

} // namespace jumpmil
