#include "wassbern/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace wassbern::linalg {

namespace {

constexpr double kNegEigRelTol = 1e-10;

bool all_finite(const Eigen::MatrixXd& m) {
    return m.allFinite();
}

}  // namespace

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0) {
        throw InvalidMatrix("SpdMatrix requires a nonempty square matrix");
    }
    if (!all_finite(entries)) {
        throw InvalidMatrix("SpdMatrix entries must be finite");
    }
    entries_ = 0.5 * (entries + entries.transpose());
}

SpdMatrix SpdMatrix::identity(int dim) {
    return SpdMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SpdMatrix SpdMatrix::diagonal(const Eigen::VectorXd& diag) {
    return SpdMatrix(Eigen::MatrixXd(diag.asDiagonal()));
}

EigenDecomposition sym_eigen(const SpdMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.entries());
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigendecomposition failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SpdMatrix psd_sqrt(const SpdMatrix& a) {
    EigenDecomposition ed = sym_eigen(a);
    const double lam_max = ed.eigenvalues.cwiseAbs().maxCoeff();
    const double floor = -kNegEigRelTol * lam_max;
    Eigen::VectorXd sqrt_vals(ed.eigenvalues.size());
    for (int i = 0; i < ed.eigenvalues.size(); ++i) {
        double lam = ed.eigenvalues(i);
        if (lam < floor) {
            throw NotPsd("eigenvalue " + std::to_string(lam) +
                         " below PSD round-off band");
        }
        sqrt_vals(i) = std::sqrt(std::max(lam, 0.0));
    }
    Eigen::MatrixXd r = ed.eigenvectors * sqrt_vals.asDiagonal() *
                        ed.eigenvectors.transpose();
    return SpdMatrix(r);
}

double gaussian_w2_sq(const Eigen::VectorXd& mu1, const SpdMatrix& s1,
                      const Eigen::VectorXd& mu2, const SpdMatrix& s2) {
    const int d = s1.dim();
    if (mu1.size() != d || mu2.size() != d || s2.dim() != d) {
        throw DimMismatch("gaussian_w2_sq: dimension mismatch");
    }
    SpdMatrix root2 = psd_sqrt(s2);
    SpdMatrix inner(root2.entries() * s1.entries() * root2.entries());
    SpdMatrix cross = psd_sqrt(inner);

    double value = (mu1 - mu2).squaredNorm() + s1.entries().trace() +
                   s2.entries().trace() - 2.0 * cross.entries().trace();
    if (value < -1e-9) {
        throw NumericalError("gaussian_w2_sq produced a large negative value");
    }
    return std::max(value, 0.0);
}

double gaussian_w2_sq_isotropic_target(const Eigen::VectorXd& mu1,
                                       const SpdMatrix& s1,
                                       const Eigen::VectorXd& y, double eps) {
    const int d = s1.dim();
    if (mu1.size() != d || y.size() != d) {
        throw DimMismatch("gaussian_w2_sq_isotropic_target: dimension mismatch");
    }
    if (eps <= 0.0) {
        throw DomainError("eps must be positive");
    }
    SpdMatrix root = psd_sqrt(s1);
    double value = (mu1 - y).squaredNorm() + s1.entries().trace() +
                   d * eps - 2.0 * std::sqrt(eps) * root.entries().trace();
    return std::max(value, 0.0);
}

}  // namespace wassbern::linalg
