#include "ginx/fredholm.hpp"

#include <cmath>
#include <limits>

#include "ginx/kernels.hpp"

namespace ginx {
namespace fredholm {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<long>(v.size()));
}

// Hager-style 1-norm estimate of ||inv(I - node)||.
double inverse_norm1_estimate(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                              int m) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(m, 1.0 / m);
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        const Eigen::VectorXd y = lu.solve(x);
        est = y.lpNorm<1>();
        Eigen::VectorXd xi(m);
        for (int i = 0; i < m; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
        const Eigen::VectorXd z = lu.transpose().solve(xi);
        int j = 0;
        z.cwiseAbs().maxCoeff(&j);
        if (std::fabs(z[j]) <= z.dot(x)) break;
        x.setZero();
        x[j] = 1.0;
    }
    return est;
}

}  // namespace

QuadratureGrid gauss_legendre_grid(double a, double b, int m) {
    if (!(a < b)) throw std::invalid_argument("gauss_legendre_grid: need a < b");
    if (m < 1) throw std::invalid_argument("gauss_legendre_grid: need m >= 1");
    QuadratureGrid g;
    g.a = a;
    g.b = b;
    g.nodes.resize(m);
    g.weights.resize(m);
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        g.nodes[i] = xm - xl * z;
        g.nodes[m - 1 - i] = xm + xl * z;
        g.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        g.weights[m - 1 - i] = g.weights[i];
    }
    return g;
}

DiscreteOperator discretize(const QuadratureGrid& grid,
                            const std::function<double(double, double)>& K) {
    const int m = grid.size();
    DiscreteOperator op;
    op.grid = grid;
    op.sym.resize(m, m);
    op.node.resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double k = K(grid.nodes[i], grid.nodes[j]);
            op.node(i, j) = k * grid.weights[j];
            op.sym(i, j) = k * std::sqrt(grid.weights[i] * grid.weights[j]);
        }
    }
    return op;
}

double fredholm_det(const DiscreteOperator& op) {
    if (!op.sym.allFinite())
        throw std::invalid_argument("fredholm_det: operator has non-finite entries");
    const int m = op.grid.size();
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - op.sym;
    return Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
}

std::vector<double> resolvent_solve(const DiscreteOperator& op,
                                    const std::vector<double>& rhs) {
    const int m = op.grid.size();
    if (static_cast<int>(rhs.size()) != m)
        throw std::invalid_argument("resolvent_solve: rhs size mismatch");
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - op.node;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd b = to_vec(rhs);
    Eigen::VectorXd v = lu.solve(b);
    Eigen::VectorXd r = b - A * v;
    v += lu.solve(r);  // one refinement step
    r = b - A * v;
    const double rnorm = r.norm();
    const double tol = 1e-10 * (b.norm() + 1e-300);
    if (rnorm > tol) {
        const double cond = A.cwiseAbs().colwise().sum().maxCoeff() *
                            inverse_norm1_estimate(lu, m);
        throw numerical_error(
            "resolvent_solve: residual " + std::to_string(rnorm) +
            " exceeds tolerance; condition estimate " + std::to_string(cond));
    }
    return std::vector<double>(v.data(), v.data() + m);
}

const char* gap_method_name(GapMethod m) {
    switch (m) {
        case GapMethod::Limit: return "limit";
        case GapMethod::FiniteEven: return "finite-even";
        case GapMethod::ComplexTrace: return "complex-trace";
        case GapMethod::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

bool GapCurve::monotone() const {
    for (size_t i = 1; i < probability.size(); ++i)
        if (probability[i] + 1e-12 < probability[i - 1]) return false;
    return true;
}

double limit_psi(double x) {
    return specialfn::gaussian(std::sqrt(2.0) * x).density;
}

double limit_phi(double x) {
    return specialfn::gaussian(std::sqrt(2.0) * x).cdf / std::sqrt(2.0);
}

double limit_phi_infinity() { return 1.0 / std::sqrt(2.0); }

namespace {

struct SolvedGap {
    QuadratureGrid grid;
    Eigen::MatrixXd kernel;  // K(x_i, x_j)
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // of I - K W
    double det_sym;

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd v = lu.solve(rhs);
        return v;
    }
};

SolvedGap build_gap(const QuadratureGrid& grid,
                    const std::function<double(double, double)>& K) {
    SolvedGap s;
    s.grid = grid;
    const int m = grid.size();
    s.kernel.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            s.kernel(i, j) = K(grid.nodes[i], grid.nodes[j]);
    Eigen::MatrixXd node = s.kernel;
    Eigen::MatrixXd sym = s.kernel;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            node(i, j) *= grid.weights[j];
            sym(i, j) *= std::sqrt(grid.weights[i] * grid.weights[j]);
        }
    s.lu.compute(Eigen::MatrixXd::Identity(m, m) - node);
    s.det_sym = Eigen::PartialPivLU<Eigen::MatrixXd>(
                    Eigen::MatrixXd::Identity(m, m) - sym)
                    .determinant();
    return s;
}

}  // namespace

LimitLawResult limit_law_real(double t, int m, double L, double L2) {
    if (!std::isfinite(t)) throw std::invalid_argument("limit_law_real: t not finite");
    if (m < 16) throw std::invalid_argument("limit_law_real: need m >= 16");
    if (L < 8.0) throw std::invalid_argument("limit_law_real: need L >= 8");
    if (L2 < 10.0) throw std::invalid_argument("limit_law_real: need L2 >= 10");

    const auto K = [](double x, double y) { return kernels::limit_kernel_T(x, y); };
    const SolvedGap gap = build_gap(gauss_legendre_grid(t, t + L, m), K);
    const int mm = gap.grid.size();

    Eigen::VectorXd gvec(mm), Gvec(mm), Tt(mm);
    for (int i = 0; i < mm; ++i) {
        const double x = gap.grid.nodes[i];
        gvec[i] = limit_psi(x);
        Gvec[i] = limit_phi(x);
        Tt[i] = K(x, t);
    }
    const Eigen::VectorXd vg = gap.solve(gvec);
    const Eigen::VectorXd vG = gap.solve(Gvec);
    const Eigen::VectorXd uT = gap.solve(Tt);

    double a_t = 0.0, b_row = 0.0;
    for (int i = 0; i < mm; ++i) {
        a_t += gap.grid.weights[i] * Gvec[i] * vg[i];
        b_row += gap.grid.weights[i] * K(t, gap.grid.nodes[i]) * vG[i];
    }
    const double b_t = limit_phi(t) + b_row;

    const QuadratureGrid outer = gauss_legendre_grid(t - L2, t, m);
    double rho1 = 0.0, rho2_res = 0.0;
    for (int i = 0; i < outer.size(); ++i) {
        const double x = outer.nodes[i];
        double row1 = K(x, t), row2 = 0.0;
        for (int j = 0; j < mm; ++j) {
            const double k = K(x, gap.grid.nodes[j]) * gap.grid.weights[j];
            row1 += k * uT[j];
            row2 += k * vg[j];
        }
        rho1 += outer.weights[i] * row1;
        rho2_res += outer.weights[i] * row2;
    }
    const double ginf = limit_phi_infinity();
    const double rho2 = (limit_phi(t) - ginf) + rho2_res;

    LimitLawResult out{};
    out.det = gap.det_sym;
    out.a_t = a_t;
    out.b_t = b_t;
    out.rho1 = rho1;
    out.rho2 = rho2;
    out.gamma_t = (1.0 - a_t) * (1.0 - 0.5 * rho1) + 0.5 * (ginf - b_t) * rho2;
    if (out.det < 0.0 || out.gamma_t < 0.0)
        throw numerical_error(
            "limit_law_real: negative factor (grid too coarse; raise m or L)");
    out.value = std::sqrt(out.det * out.gamma_t);
    return out;
}

FiniteGapResult finite_gap_real_even(long long n, double t, int m, double L,
                                     double L2) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("finite_gap_real_even: n must be even and >= 4");
    if (!std::isfinite(t)) throw std::invalid_argument("finite_gap_real_even: t not finite");
    const double root = std::sqrt(static_cast<double>(n));
    if (t < -root + L2 + 1.0)
        throw std::invalid_argument(
            "finite_gap_real_even: t below the domain guard -sqrt(n)+L2+1 "
            "(lower the truncation length L2)");
    if (t < 1.0)
        throw std::invalid_argument("finite_gap_real_even: threshold must be >= 1");
    if (m < 16) throw std::invalid_argument("finite_gap_real_even: need m >= 16");

    const auto K = [n](double x, double y) {
        return kernels::finite_kernel_Tn(n, x, y);
    };
    const SolvedGap gap = build_gap(gauss_legendre_grid(t, t + L, m), K);
    const int mm = gap.grid.size();
    const kernels::RankOneFunctions fn = kernels::rank_one_functions(n);

    Eigen::VectorXd psiv(mm), phiv(mm), Tt(mm);
    for (int i = 0; i < mm; ++i) {
        const double x = gap.grid.nodes[i];
        psiv[i] = fn.psi(x);
        phiv[i] = fn.phi(x);
        Tt[i] = K(x, t);
    }
    const Eigen::VectorXd vpsi = gap.solve(psiv);
    const Eigen::VectorXd vphi = gap.solve(phiv);
    const Eigen::VectorXd uT = gap.solve(Tt);

    double ab11 = 0.0, row = 0.0;
    for (int i = 0; i < mm; ++i) {
        ab11 += gap.grid.weights[i] * phiv[i] * vpsi[i];
        row += gap.grid.weights[i] * K(t, gap.grid.nodes[i]) * vphi[i];
    }
    const double ab12 = (fn.phi(t) + row) - fn.phi_infinity;

    // lower integrals: extended through the negative axis for small n,
    // positive truncation otherwise
    const bool extended = (n <= 64);
    double lo, truncation_bound = 0.0;
    int m_low;
    if (extended) {
        lo = -(root + 8.0);
        m_low = std::min(4 * m, 512);
    } else {
        lo = std::max(t - L2, 0.5);
        m_low = m;
        truncation_bound = 2.0 * std::pow(static_cast<double>(n), -1.5);
    }
    const QuadratureGrid outer = gauss_legendre_grid(lo, t, m_low);
    auto Ksig = [n, extended](double x, double y) {
        return extended ? kernels::finite_kernel_Tn_signed(n, x, y)
                        : kernels::finite_kernel_Tn(n, x, y);
    };
    double rho1 = 0.0, rho2_res = 0.0;
    for (int i = 0; i < outer.size(); ++i) {
        const double x = outer.nodes[i];
        double row1 = Ksig(x, t), row2 = 0.0;
        for (int j = 0; j < mm; ++j) {
            const double k = Ksig(x, gap.grid.nodes[j]) * gap.grid.weights[j];
            row1 += k * uT[j];
            row2 += k * vpsi[j];
        }
        rho1 += outer.weights[i] * row1;
        rho2_res += outer.weights[i] * row2;
    }
    if (!extended)
        truncation_bound += std::fabs(Ksig(lo, t)) + std::fabs(Ksig(lo, t + 0.5 * L));

    // exact identity part of rho2: integral of psi_n below t (n even)
    const double ident =
        -fn.psi_mass_pos * specialfn::reg_gamma(0.5 * n, 0.5 * t * t).q;
    const double rho2 = ident + rho2_res;

    FiniteGapResult out{};
    out.det_kernel = gap.det_sym;
    out.bracket_one = 1.0 - ab11;
    out.bracket_two = -ab12;
    out.rho1 = rho1;
    out.rho2 = rho2;
    out.det_rank_one = (1.0 - ab11) * (1.0 - 0.5 * rho1) - 0.5 * ab12 * rho2;
    out.truncation_bound = truncation_bound;
    if (out.det_kernel < 0.0 || out.det_rank_one < 0.0)
        throw numerical_error(
            "finite_gap_real_even: negative determinant factor (grid too "
            "coarse; raise m or adjust L)");
    out.value = std::sqrt(out.det_kernel * out.det_rank_one);
    return out;
}

namespace {

double trace_once(long long n, double t, const specialfn::ScalingConstants& sc,
                  int radial, int angular) {
    const QuadratureGrid gr = gauss_legendre_grid(t, t + 40.0, radial);
    const QuadratureGrid gth = gauss_legendre_grid(0.0, kPi, angular);
    double tr = 0.0;
    for (int i = 0; i < radial; ++i) {
        double inner = 0.0;
        for (int j = 0; j < angular; ++j)
            inner += gth.weights[j] *
                     kernels::complex_diag_Sn(n, gr.nodes[i], gth.nodes[j], sc);
        tr += gr.weights[i] * inner;
    }
    return tr;
}

}  // namespace

ComplexTraceResult complex_gap_trace(long long n, double t,
                                     const specialfn::ScalingConstants& sc,
                                     int radial, int angular) {
    if (n < 10) throw std::invalid_argument("complex_gap_trace: n must be >= 10");
    if (radial < 16 || angular < 8)
        throw std::invalid_argument("complex_gap_trace: grid too small");
    const double coarse = trace_once(n, t, sc, radial, angular);
    const double fine = trace_once(n, t, sc, 2 * radial, 2 * angular);
    ComplexTraceResult out{};
    out.trace = fine;
    out.refine_delta = std::fabs(fine - coarse);
    if (out.refine_delta > 1e-4)
        throw numerical_error(
            "complex_gap_trace: quadrature not converged (doubling changed "
            "the trace by " +
            std::to_string(out.refine_delta) + ")");
    out.p_approx = std::exp(-out.trace);
    return out;
}

double gumbel_reference(double t, GumbelKind which) {
    if (!std::isfinite(t)) throw std::invalid_argument("gumbel_reference: t not finite");
    const double e = std::exp(-t);
    return which == GumbelKind::RealGinibreRadius ? std::exp(-0.5 * e)
                                                  : std::exp(-e);
}

double poisson_region_integral(double t, double theta1, double theta2) {
    if (!std::isfinite(t)) throw std::invalid_argument("poisson_region_integral: t not finite");
    if (!(theta1 >= 0.0 && theta1 < theta2 && theta2 <= kPi))
        throw std::invalid_argument(
            "poisson_region_integral: need 0 <= theta1 < theta2 <= pi");
    return (theta2 - theta1) / (2.0 * kPi) * std::exp(-t);
}

}  // namespace fredholm
}  // namespace ginx
