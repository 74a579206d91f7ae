#include <cmath>

#include "ginx/fredholm.hpp"

namespace ginx {
namespace fredholm {

double pfaffian(Eigen::MatrixXd A) {
    const long n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("pfaffian: matrix must be square");
    if (n % 2 != 0)
        throw std::invalid_argument("pfaffian: dimension must be even");
    if (n == 0) return 1.0;
    const double scale = A.cwiseAbs().maxCoeff();
    if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument("pfaffian: matrix is not antisymmetric");

    double sign = 1.0;
    for (long k = 0; k + 2 < n; ++k) {
        // pivot: move the largest |A(j,k)|, j > k, into row k+1
        long piv = k + 1;
        double best = std::fabs(A(k + 1, k));
        for (long j = k + 2; j < n; ++j)
            if (std::fabs(A(j, k)) > best) {
                best = std::fabs(A(j, k));
                piv = j;
            }
        if (best == 0.0) continue;  // column already reduced; Pf factor 0 or set later
        if (piv != k + 1) {
            A.row(piv).swap(A.row(k + 1));
            A.col(piv).swap(A.col(k + 1));
            sign = -sign;
        }
        const long len = n - (k + 1);
        if (len <= 1) continue;
        Eigen::VectorXd v = A.block(k + 1, k, len, 1);
        const double alpha = (v[0] >= 0.0 ? -1.0 : 1.0) * v.norm();
        Eigen::VectorXd u = v;
        u[0] -= alpha;
        const double unorm2 = u.squaredNorm();
        if (unorm2 == 0.0) continue;
        // A <- H A H with H = I - 2 u u^T / |u|^2 acting on the trailing block
        const Eigen::VectorXd w = A.block(k + 1, 0, len, n).transpose() * u;
        A.block(k + 1, 0, len, n) -= (2.0 / unorm2) * u * w.transpose();
        const Eigen::VectorXd w2 = A.block(0, k + 1, n, len) * u;
        A.block(0, k + 1, n, len) -= (2.0 / unorm2) * w2 * u.transpose();
        sign = -sign;  // det(H) = -1
    }
    double pf = sign;
    for (long i = 0; i + 1 < n; i += 2) pf *= A(i, i + 1);
    return pf;
}

Eigen::MatrixXd symplectic_form(int dim) {
    if (dim % 2 != 0)
        throw std::invalid_argument("symplectic_form: dimension must be even");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i + 1 < dim; i += 2) {
        J(i, i + 1) = 1.0;
        J(i + 1, i) = -1.0;
    }
    return J;
}

double pfaffian_det_identity_check(const Eigen::MatrixXd& K) {
    const long dim = K.rows();
    if (K.cols() != dim || dim % 2 != 0)
        throw std::invalid_argument(
            "pfaffian_det_identity_check: need an even-dimensional square matrix");
    const Eigen::MatrixXd J = symplectic_form(static_cast<int>(dim));
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(dim, dim) + J * K;
    const double lhs = Eigen::PartialPivLU<Eigen::MatrixXd>(M).determinant();
    const double pf = pfaffian(J - K);
    return std::fabs(lhs - pf * pf) / std::max(1.0, std::fabs(lhs));
}

}  // namespace fredholm
}  // namespace ginx
