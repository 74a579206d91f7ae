#pragma once

// Nystrom discretization and everything built on it: Fredholm determinants,
// resolvent solves, the limiting largest-real-eigenvalue law, the finite-n
// even real gap, the trace-based complex gap, Gumbel references, the
// Pfaffian-determinant identity and the Poisson intensity integrals.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ginx/specialfn.hpp"

namespace ginx {
namespace fredholm {

// Raised when a numerical consistency check fails (grid refinement,
// negative determinant, quadrature non-convergence, ill conditioning).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what)
        : std::runtime_error(what) {}
};

struct QuadratureGrid {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

QuadratureGrid gauss_legendre_grid(double a, double b, int m);

struct DiscreteOperator {
    QuadratureGrid grid;
    Eigen::MatrixXd sym;   // sqrt(w_i w_j) K(x_i, x_j)
    Eigen::MatrixXd node;  // K(x_i, x_j) w_j
};

DiscreteOperator discretize(const QuadratureGrid& grid,
                            const std::function<double(double, double)>& K);

// det(I - sym); rejects non-finite operators.
double fredholm_det(const DiscreteOperator& op);

// Solve (I - node) v = rhs; refined to residual <= 1e-10 ||rhs||, reports
// ill conditioning (1-norm condition estimate > 1e12).
std::vector<double> resolvent_solve(const DiscreteOperator& op,
                                    const std::vector<double>& rhs);

enum class GapMethod { Limit, FiniteEven, ComplexTrace, MonteCarlo };
const char* gap_method_name(GapMethod m);

struct GapCurve {
    GapMethod method = GapMethod::Limit;
    long long n = 0;  // 0 for limit laws
    int nodes = 0;
    double L = 0.0;
    double L2 = 0.0;
    std::vector<double> t;
    std::vector<double> probability;
    double truncation_bound = 0.0;
    bool monotone() const;
};

// Scaled limits of the rank-one pair (the centered psi_n and phi_n).
double limit_psi(double x);
double limit_phi(double x);
double limit_phi_infinity();

struct LimitLawResult {
    double value;       // F(t)
    double det;         // det(I - T chi)
    double gamma_t;     // the rank-one factor
    double a_t;
    double b_t;
    double rho1;
    double rho2;
};

LimitLawResult limit_law_real(double t, int m = 64, double L = 12.0,
                              double L2 = 12.0);

struct FiniteGapResult {
    double value;           // P_{R,n}(t)
    double det_kernel;      // det(I - T_n chi)
    double det_rank_one;    // the closed 2x2-style expansion
    double bracket_one;     // 1 - (alpha1, beta1)
    double bracket_two;     // -(alpha1, beta2)
    double rho1;
    double rho2;
    double truncation_bound;  // documented estimate of the neglected tail
};

// Probability of no real eigenvalue above the absolute threshold t, n even.
FiniteGapResult finite_gap_real_even(long long n, double t, int m = 64,
                                     double L = 12.0, double L2 = 12.0);

struct ComplexTraceResult {
    double trace;
    double p_approx;       // exp(-trace)
    double refine_delta;   // |trace - trace at doubled grid|
};

ComplexTraceResult complex_gap_trace(long long n, double t,
                                     const specialfn::ScalingConstants& sc,
                                     int radial = 200, int angular = 64);

enum class GumbelKind { RealGinibreRadius, ComplexGinibreRadius };
double gumbel_reference(double t, GumbelKind which);

// ((theta2 - theta1)/(2 pi)) e^{-t}.
double poisson_region_integral(double t, double theta1, double theta2);

// Pfaffian of an antisymmetric even-dimensional matrix by Householder
// congruence tridiagonalization with pivot-magnitude ordering.
double pfaffian(Eigen::MatrixXd A);

// Block-diagonal symplectic form diag([[0,1],[-1,0]], ...).
Eigen::MatrixXd symplectic_form(int dim);

// |det(I + J K) - Pf(J - K)^2| / max(1, |det(I + J K)|) with the
// block-diagonal J.
double pfaffian_det_identity_check(const Eigen::MatrixXd& K);

}  // namespace fredholm
}  // namespace ginx
