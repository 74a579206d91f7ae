#pragma once

// Pointwise kernel evaluations: the limiting real-edge kernel, the finite-n
// real kernels, the complex-plane kernel (diagonal and off-diagonal), the
// bulk approximation, the rank-one pair and its epsilon image, and the odd-n
// consistency machinery.

#include <complex>

#include "ginx/specialfn.hpp"

namespace ginx {
namespace kernels {

// Limiting real-edge kernel in closed form:
// e^{-(x-y)^2/2} erfc((x+y)/sqrt 2) / (2 sqrt(2 pi)).
double limit_kernel_T(double x, double y);

// Finite-n symmetric kernel e^{-(x-y)^2/2}/sqrt(2 pi) * Q(n-1, x y);
// rejects x y < 0.
double finite_kernel_Tn(long long n, double x, double y);

// Same kernel for x y < 0 via direct signed summation; intended for the
// small-n lower-tail integrals (stability guarded internally).
double finite_kernel_Tn_signed(long long n, double x, double y);

// sqrt(n) + x, the single place the edge shift is applied; rejects
// nonpositive results.
double scaled_real_inputs(long long n, double x);

// The rank-one pair psi_n, phi_n (and the epsilon image of psi_n), all in
// log space so evaluation stays finite up to n ~ 1e6.
struct RankOneFunctions {
    long long n;
    double log_kappa;        // log of the phi normalizer
    double log_kappa_prime;  // log of the psi normalizer
    double phi_infinity;     // phi_n(+inf)
    double psi_mass_pos;     // integral of psi_n over (0, inf)

    double psi(double x) const;
    double phi(double x) const;
    // eps psi (x) = (1/2) * total mass  -  mass below x.
    double eps_psi(double x) const;
};
RankOneFunctions rank_one_functions(long long n);  // n >= 3

// Diagonal of the scaled complex kernel at (r, theta), theta in (0, pi).
double complex_diag_Sn(long long n, double r, double theta,
                       const specialfn::ScalingConstants& sc);

// Unscaled complex kernel S_n(z, w); direct-sum regime n <= 2000 and
// Im z, Im w != 0.
std::complex<double> complex_offdiag_Sn(long long n, std::complex<double> z,
                                        std::complex<double> w);

// Bulk approximation S_kappa(r, theta; s, eta).
std::complex<double> s_kappa(double kappa, double r, double s, double theta,
                             double eta);

// |scaled S_n(r,theta; s,eta)| evaluated through the saddle-regime
// asymptotics (valid in the bulk at large n, where the direct sum is out of
// reach); modulus only, since the bulk comparison is conjugation-invariant.
double scaled_offdiag_mag_bulk(long long n, double r, double s, double theta,
                               double eta,
                               const specialfn::ScalingConstants& sc);

// Residuals of the odd-n skew-orthogonal identities.
struct OddIdentityReport {
    double normalizer_ratio;  // (a) s_{2j}/r_j vs 1/(2^{j+1} j!), relative
    double partial_sum;       // (b) epsilon partial-sum identity
    double kernel_routes;     // (c) reduced vs expanded kernel route
};
OddIdentityReport odd_n_identities(int n);  // n odd, 3 <= n <= 201

// Sup-norm decay of the odd-n corrections over the scaled window
// [t, t+window] (kernel difference over its square).
struct OddCorrectionNorms {
    double d_T;
    double d_psi;
    double d_phi;
    double d_phi_vs_eps_psi;
};
OddCorrectionNorms odd_correction_norms(int n, double t, double window);

}  // namespace kernels
}  // namespace ginx
