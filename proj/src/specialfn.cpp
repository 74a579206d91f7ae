#include "ginx/specialfn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ginx {
namespace specialfn {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double x, const char* what) {
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string(what) + " must be finite");
}

// erfcx by Laplace continued fraction (modified Lentz), accurate for x >= 4.
double erfcx_cf(double x) {
    const double tiny = 1e-300;
    // CF: erfcx(x) = (1/sqrt(pi)) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // modified Lentz with b_k = x, a_k = k/2.
    double f = x, c = x, d = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return 1.0 / (kSqrtPi * f);
}

double stirling_correction(double a) {
    // log Gamma(a+1) - [0.5 log(2 pi a) + a log a - a], a >= 30
    const double ia = 1.0 / a;
    const double ia2 = ia * ia;
    return ia * (1.0 / 12.0 +
                 ia2 * (-1.0 / 360.0 +
                        ia2 * (1.0 / 1260.0 + ia2 * (-1.0 / 1680.0))));
}

// log of x^a e^{-x} / Gamma(a+1), stable for a up to 1e12.
double log_dominant(double a, double x) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    if (a < 30.0) return a * std::log(x) - x - std::lgamma(a + 1.0);
    const double u = (x - a) / a;
    return a * log1pmx(u) - 0.5 * std::log(2.0 * kPi * a) -
           stirling_correction(a);
}

// P(a,x) by the lower series; valid for x < a+1.
double reg_gamma_p_series(double a, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 100000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::exp(log_dominant(a, x)) * sum;
}

// h such that Q(a,x) = exp(log_dominant(a,x) + log a) * h; valid x >= a+1.
double reg_gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 2000000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) return h;
    }
    throw std::runtime_error("incomplete gamma continued fraction stalled");
}

void check_gamma_args(double a, double x) {
    if (!std::isfinite(a) || !std::isfinite(x))
        throw std::invalid_argument("reg_gamma: arguments must be finite");
    if (a <= 0.0) throw std::invalid_argument("reg_gamma: a must be positive");
    if (x < 0.0) throw std::invalid_argument("reg_gamma: x must be nonnegative");
}

}  // namespace

ErfcPair erfc_pair(double x) {
    require_finite(x, "erfc_pair: x");
    ErfcPair out{};
    if (x >= 25.0) {
        out.erfcx = erfcx_cf(x);
        out.erfc = 0.0;  // underflows; e^{-x^2} < 1e-271
        const double lx = -x * x + std::log(out.erfcx);
        if (lx > -745.0) out.erfc = std::exp(lx);
    } else if (x >= 0.0) {
        out.erfc = std::erfc(x);
        out.erfcx = std::exp(x * x) * out.erfc;
    } else {
        out.erfc = std::erfc(x);
        const double pos = (-x >= 25.0) ? erfcx_cf(-x)
                                        : std::exp(x * x) * std::erfc(-x);
        out.erfcx = 2.0 * std::exp(x * x) - pos;  // may overflow to inf
    }
    return out;
}

double log1pmx(double u) {
    if (!std::isfinite(u)) throw std::invalid_argument("log1pmx: u not finite");
    if (u <= -1.0) throw std::invalid_argument("log1pmx: u <= -1");
    if (std::fabs(u) > 0.5) return std::log1p(u) - u;
    // log(1+u) - u = -u^2/2 + u^3/3 - ...
    double term = u, sum = 0.0;
    for (int k = 2; k < 200; ++k) {
        term *= -u;
        const double add = term / k;
        sum += add;
        if (std::fabs(add) < (std::fabs(sum) + 1e-300) * kEps) break;
    }
    return sum;
}

RegGamma reg_gamma(double a, double x) {
    check_gamma_args(a, x);
    RegGamma out{};
    if (x == 0.0) {
        out.p = 0.0;
        out.q = 1.0;
        return out;
    }
    if (x < a + 1.0) {
        out.p = reg_gamma_p_series(a, x);
        out.q = 1.0 - out.p;
    } else {
        out.q = std::exp(log_dominant(a, x) + std::log(a)) * reg_gamma_q_cf(a, x);
        out.p = 1.0 - out.q;
    }
    return out;
}

double log_upper_reg_gamma(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        const double p = reg_gamma_p_series(a, x);
        if (p < 1.0) return std::log1p(-p);
        return -std::numeric_limits<double>::infinity();
    }
    return log_dominant(a, x) + std::log(a) + std::log(reg_gamma_q_cf(a, x));
}

double trunc_exp_scaled(long long m, double x) {
    if (m < 0) throw std::invalid_argument("trunc_exp_scaled: m must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("trunc_exp_scaled: x not finite");
    if (x < 0.0)
        throw std::invalid_argument(
            "trunc_exp_scaled: x must be nonnegative (use trunc_exp_complex "
            "for general arguments)");
    return reg_gamma(static_cast<double>(m) + 1.0, x).q;
}

SignedLogSum trunc_exp_signed_log(long long m, double u) {
    if (m < 0) throw std::invalid_argument("trunc_exp_signed: m must be >= 0");
    if (!std::isfinite(u)) throw std::invalid_argument("trunc_exp_signed: u not finite");
    const double au = std::fabs(u);
    // largest term magnitude: k* = min(m, |u|)
    const double ks = std::min(static_cast<double>(m), au);
    const double log_max =
        (ks > 0.0) ? ks * std::log(au) - std::lgamma(ks + 1.0) : 0.0;
    if (log_max > 660.0)
        throw std::runtime_error("trunc_exp_signed: sum not representable");
    // compensated direct summation
    double sum = 0.0, comp = 0.0, term = 1.0;
    for (long long k = 0; k <= m; ++k) {
        if (k > 0) term *= u / static_cast<double>(k);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    SignedLogSum out{};
    out.sign = (sum > 0.0) ? 1.0 : (sum < 0.0 ? -1.0 : 0.0);
    out.log_abs = (sum == 0.0) ? -std::numeric_limits<double>::infinity()
                               : std::log(std::fabs(sum));
    return out;
}

double trunc_exp_signed(long long m, double u) {
    if (u >= 0.0) return trunc_exp_scaled(m, u);
    const SignedLogSum s = trunc_exp_signed_log(m, u);
    const double lv = -u + s.log_abs;
    if (lv > 700.0)
        throw std::runtime_error("trunc_exp_signed: value overflows");
    return s.sign * std::exp(lv);
}

ScaledComplex trunc_exp_complex_scaled(long long m, std::complex<double> z) {
    if (m < 0) throw std::invalid_argument("trunc_exp_complex: m must be >= 0");
    if (m > 5000)
        throw std::invalid_argument(
            "trunc_exp_complex: m exceeds the direct-sum regime (5000); use "
            "asymptotic_trunc_exp");
    ScaledComplex out{};
    if (z == std::complex<double>(0.0, 0.0)) {
        out.factor = 1.0;
        out.log_scale = 0.0;
        return out;
    }
    const std::complex<double> lz = std::log(z);
    // peak of |z|^k/k! at k ~ |z|
    const double az = std::abs(z);
    const double ks = std::min(static_cast<double>(m), az);
    const double scale =
        -z.real() + ((ks > 0.0) ? ks * std::log(az) - std::lgamma(ks + 1.0) : 0.0);
    // term_k = exp(k lz - z - lgamma(k+1) - scale), summed with compensation
    double sre = 0.0, cre = 0.0, sim = 0.0, cim = 0.0;
    std::complex<double> lt = -z - scale;  // k = 0
    double lgam = 0.0;
    for (long long k = 0; k <= m; ++k) {
        if (k > 0) {
            lgam += std::log(static_cast<double>(k));
            lt = static_cast<double>(k) * lz - z - lgam - scale;
        }
        const std::complex<double> term = std::exp(lt);
        double y = term.real() - cre, t = sre + y;
        cre = (t - sre) - y;
        sre = t;
        y = term.imag() - cim;
        t = sim + y;
        cim = (t - sim) - y;
        sim = t;
    }
    out.factor = {sre, sim};
    out.log_scale = scale;
    return out;
}

std::complex<double> trunc_exp_complex(long long m, std::complex<double> z) {
    const ScaledComplex s = trunc_exp_complex_scaled(m, z);
    return s.factor * std::exp(s.log_scale);
}

double mu(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("mu: t must be positive and finite");
    const double v = -log1pmx(t - 1.0);  // t - log t - 1
    return std::sqrt(v > 0.0 ? v : 0.0);
}

std::complex<double> mu_complex(std::complex<double> z) {
    const std::complex<double> w = z - std::log(z) - 1.0;
    std::complex<double> s = std::sqrt(w);
    const std::complex<double> dir = (z - 1.0) / std::sqrt(2.0);
    if ((s * std::conj(dir)).real() < 0.0) s = -s;
    return s;
}

std::complex<double> erfcx_complex(std::complex<double> w) {
    if (w.real() < 0.0) {
        // erfcx(w) = 2 e^{w^2} - erfcx(-w); may overflow
        return 2.0 * std::exp(w * w) - erfcx_complex(-w);
    }
    if (std::abs(w) < 3.0) {
        // erf Maclaurin series
        std::complex<double> t = w, sum = w;
        for (int k = 1; k < 300; ++k) {
            t *= -w * w / static_cast<double>(k);
            const std::complex<double> add = t / static_cast<double>(2 * k + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        const std::complex<double> erfw = (2.0 / kSqrtPi) * sum;
        return std::exp(w * w) * (1.0 - erfw);
    }
    // Laplace continued fraction, backward evaluation
    std::complex<double> f = 0.0;
    for (int k = 60; k >= 1; --k) f = (0.5 * k) / (w + f);
    return 1.0 / (kSqrtPi * (w + f));
}

namespace {

// mu(t)/(t-1) with the removable singularity at t = 1 handled by series.
double mu_ratio(double t) {
    const double u = t - 1.0;
    if (std::fabs(u) >= 0.05) return mu(t) / u;
    // -log1pmx(u)/u^2 = 1/2 - u/3 + u^2/4 - ...
    double c = 0.5, term = 1.0;
    for (int k = 3; k < 40; ++k) {
        term *= -u;
        c += term / k;
    }
    const double s = std::sqrt(c);
    return (u >= 0.0) ? s : -s;  // mu >= 0, so the ratio's sign follows u
}

void check_saddle_domain(long long n, std::complex<double> z) {
    const double d = std::abs(z - 1.0);
    const double lo = kSaddleInnerScale / std::sqrt(static_cast<double>(n));
    if (d < lo)
        throw std::invalid_argument(
            "asymptotic_trunc_exp(saddle): |z-1| below M/sqrt(n)");
    if (d > kSaddleRadius)
        throw std::invalid_argument(
            "asymptotic_trunc_exp(saddle): |z-1| above the saddle radius");
    if (std::fabs(std::arg(z - 1.0)) > 2.0 * kPi / 3.0)
        throw std::invalid_argument(
            "asymptotic_trunc_exp(saddle): |arg(z-1)| above 2*pi/3");
}

}  // namespace

double asymptotic_trunc_exp_log_tail(long long n, double t) {
    if (!(t > 1.0))
        throw std::invalid_argument("asymptotic_trunc_exp_log_tail: needs t > 1");
    const double m = mu(t);
    const double sn = std::sqrt(static_cast<double>(n));
    // (1/sqrt2) (mu t/(t-1)) erfc(sqrt n mu), in logs via erfcx
    const double pref = mu_ratio(t) * t / std::sqrt(2.0);
    const ErfcPair e = erfc_pair(sn * m);
    return std::log(pref) + std::log(e.erfcx) - n * m * m;
}

std::complex<double> asymptotic_trunc_exp_log_saddle(long long n,
                                                     std::complex<double> z) {
    check_saddle_domain(n, z);
    const std::complex<double> m = mu_complex(z);
    const std::complex<double> pref = z * m / (std::sqrt(2.0) * (z - 1.0));
    const std::complex<double> w = std::sqrt(static_cast<double>(n)) * m;
    return std::log(pref * erfcx_complex(w)) - static_cast<double>(n) * m * m;
}

std::complex<double> asymptotic_trunc_exp(long long n, std::complex<double> z,
                                          TruncExpRegime regime) {
    if (n < 1) throw std::invalid_argument("asymptotic_trunc_exp: n must be >= 1");
    switch (regime) {
        case TruncExpRegime::UniformReal: {
            if (z.imag() != 0.0 || z.real() < 0.0)
                throw std::invalid_argument(
                    "asymptotic_trunc_exp(uniform-real): z must be real >= 0");
            const double t = z.real();
            if (t == 0.0) return 1.0;
            const double sn = std::sqrt(static_cast<double>(n));
            const double corr = (1.0 / std::sqrt(2.0)) * mu_ratio(t) * t *
                                erfc_pair(sn * mu(t)).erfc;
            return (t < 1.0 ? 1.0 : 0.0) + corr;
        }
        case TruncExpRegime::Saddle: {
            const std::complex<double> lg = asymptotic_trunc_exp_log_saddle(n, z);
            return std::exp(lg);
        }
        case TruncExpRegime::Exterior: {
            if (std::abs(z) <= 1.0)
                throw std::invalid_argument(
                    "asymptotic_trunc_exp(exterior): |z| must exceed 1");
            const double excl =
                std::pow(static_cast<double>(n), -kExteriorAlpha);
            if (std::abs(z - 1.0) <= excl)
                throw std::invalid_argument(
                    "asymptotic_trunc_exp(exterior): |z-1| within n^{-alpha} "
                    "of the edge");
            // e^{-n z} e_{n-1}(n z) ~ e^{n(1 - z + log z)} / (sqrt(2 pi n)(z-1))
            const std::complex<double> expo =
                static_cast<double>(n) * (1.0 - z + std::log(z));
            return std::exp(expo) /
                   (std::sqrt(2.0 * kPi * static_cast<double>(n)) * (z - 1.0));
        }
    }
    throw std::logic_error("asymptotic_trunc_exp: unknown regime");
}

GaussianPair gaussian(double x) {
    require_finite(x, "gaussian: x");
    GaussianPair out{};
    out.density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    const double e = 0.5 * std::erfc(std::fabs(x) / std::sqrt(2.0));
    out.cdf = (x <= 0.0) ? e : 1.0 - e;
    return out;
}

ScalingConstants scaling_constants(long long n, GammaMode mode) {
    if (n < 2) throw std::invalid_argument("scaling_constants: n must be >= 2");
    ScalingConstants sc{};
    sc.n = n;
    sc.mode = mode;
    const double dn = static_cast<double>(n);
    const double ln = std::log(dn);
    sc.gamma_asymptotic = ln - std::log(2.0 * kPi) - 2.0 * std::log(ln);

    // root of F(g) = 2 log g + g - log(n/(2 pi)), monotone on (0, inf)
    const double target = ln - std::log(2.0 * kPi);
    double lo = 1e-6;
    double hi = ln + 2.0 * std::log(std::max(ln, 1.1)) + 10.0;
    auto F = [target](double g) { return 2.0 * std::log(g) + g - target; };
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) < 0.0 ? lo : hi) = mid;
    }
    double g = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) g -= F(g) / (2.0 / g + 1.0);
    sc.gamma_implicit = g;

    const double gamma = (mode == GammaMode::Implicit) ? sc.gamma_implicit
                                                       : sc.gamma_asymptotic;
    if (!(gamma > 0.0))
        throw std::domain_error(
            "scaling_constants: selected gamma is not positive (asymptotic "
            "gamma turns positive only near n = 165)");
    sc.center_real = std::sqrt(dn);
    sc.center_complex = std::sqrt(dn) + std::sqrt(gamma / 4.0);
    sc.scale_complex = std::sqrt(4.0 * gamma);
    return sc;
}

}  // namespace specialfn
}  // namespace ginx
