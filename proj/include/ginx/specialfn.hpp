#pragma once

// Stable special functions shared by every kernel evaluation: the scaled
// complementary error function, regularized incomplete gamma, truncated
// exponential sums in their several evaluation regimes, the Gaussian pair,
// and the edge scaling constants.

#include <complex>
#include <cstdint>

namespace ginx {
namespace specialfn {

struct ErfcPair {
    double erfc;   // erfc(x)
    double erfcx;  // e^{x^2} erfc(x)
};

// Both erfc(x) and its scaled companion; erfcx stays finite for large
// positive x where erfc underflows.
ErfcPair erfc_pair(double x);

// log(1+u) - u without cancellation near u = 0.
double log1pmx(double u);

struct RegGamma {
    double p;  // P(a,x), lower regularized
    double q;  // Q(a,x), upper regularized
};

// Series for x < a+1, continued fraction otherwise. P + Q == 1 exactly
// (one side computed, the other complemented).
RegGamma reg_gamma(double a, double x);

// log Q(a,x), usable deep in the right tail where Q underflows.
double log_upper_reg_gamma(double a, double x);

// e^{-x} sum_{k<=m} x^k/k!  ==  Q(m+1, x); requires x >= 0.
double trunc_exp_scaled(long long m, double x);

// Same quantity for arbitrary real argument (direct signed summation for
// u < 0).  Only meaningful while the sum stays representable; guarded.
double trunc_exp_signed(long long m, double u);

// sign and log|sum_{k<=m} u^k / k!| for real u (u < 0 allowed).
struct SignedLogSum {
    double sign;
    double log_abs;
};
SignedLogSum trunc_exp_signed_log(long long m, double u);

// e^{-z} sum_{k<=m} z^k/k! by compensated summation of log-space terms;
// direct-sum regime m <= 5000.
std::complex<double> trunc_exp_complex(long long m, std::complex<double> z);

// Scaled form value = factor * exp(log_scale), safe when the plain value
// would overflow (kernel assembly combines log_scale with other exponents).
struct ScaledComplex {
    std::complex<double> factor;
    double log_scale;
};
ScaledComplex trunc_exp_complex_scaled(long long m, std::complex<double> z);

// mu(t) = sqrt(t - log t - 1), t > 0.
double mu(double t);

// Analytic branch of mu in a neighborhood of z = 1 with mu(z) ~ (z-1)/sqrt(2).
std::complex<double> mu_complex(std::complex<double> z);

// erfcx for complex argument with Re(w) >= 0 (series / Laplace continued
// fraction); Re(w) < 0 is reflected and may overflow to inf.
std::complex<double> erfcx_complex(std::complex<double> w);

enum class TruncExpRegime { UniformReal, Saddle, Exterior };

// Regime admissibility constants (unspecified in the asymptotic statements;
// fixed here so the regimes tile the diagnostic domain).
inline constexpr double kSaddleInnerScale = 2.0;    // |z-1| >= this / sqrt(n)
inline constexpr double kSaddleRadius = 0.25;       // |z-1| <= this
inline constexpr double kExteriorAlpha = 0.3;       // |z-1| > n^{-alpha}

// Leading-order approximations of e^{-n z} e_n(n z).  UniformReal needs
// z real >= 0; Saddle needs kSaddleInnerScale/sqrt(n) <= |z-1| <=
// kSaddleRadius, |arg(z-1)| <= 2 pi/3; Exterior needs |z| > 1 and
// |z-1| > n^{-alpha} and approximates e^{-n z} e_{n-1}(n z) (multiply by
// e^{n z} for the raw polynomial).
std::complex<double> asymptotic_trunc_exp(long long n, std::complex<double> z,
                                          TruncExpRegime regime);

// log of the UniformReal approximation for t > 1 (value underflows there
// for large n); log of |value|.
double asymptotic_trunc_exp_log_tail(long long n, double t);

// Complex log of the Saddle approximation (for kernel assembly at large n).
std::complex<double> asymptotic_trunc_exp_log_saddle(long long n,
                                                     std::complex<double> z);

struct GaussianPair {
    double density;  // g(x)
    double cdf;      // G(x)
};
GaussianPair gaussian(double x);

enum class GammaMode { Implicit, Asymptotic };

struct ScalingConstants {
    long long n;
    double gamma_asymptotic;  // log(n / (2 pi (log n)^2)); may be negative
    double gamma_implicit;    // root of g^2 e^g = n / (2 pi)
    double center_complex;    // sqrt(n) + sqrt(gamma/4)
    double scale_complex;     // sqrt(4 gamma)
    double center_real;       // sqrt(n)
    GammaMode mode;

    double gamma() const {
        return mode == GammaMode::Implicit ? gamma_implicit : gamma_asymptotic;
    }
};

// n >= 2; Asymptotic mode additionally requires gamma_asymptotic > 0.
ScalingConstants scaling_constants(long long n,
                                   GammaMode mode = GammaMode::Implicit);

}  // namespace specialfn
}  // namespace ginx
