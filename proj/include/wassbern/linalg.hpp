#ifndef WASSBERN_LINALG_HPP
#define WASSBERN_LINALG_HPP

#include <Eigen/Dense>

#include "wassbern/errors.hpp"

namespace wassbern::linalg {

/**
 * Symmetric positive semidefinite matrix.
 *
 * The constructor symmetrizes its input (0.5 * (A + A^T)) and rejects
 * non-finite entries. Eigenvalue validity is checked where it matters
 * (psd_sqrt): negatives within -1e-10 * |lambda_max| are treated as
 * round-off and clamped to zero, anything below that is an error.
 */
class SpdMatrix {
  public:
    explicit SpdMatrix(const Eigen::MatrixXd& entries);

    static SpdMatrix identity(int dim);
    static SpdMatrix diagonal(const Eigen::VectorXd& diag);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }

    double operator()(int i, int j) const { return entries_(i, j); }

  private:
    Eigen::MatrixXd entries_;
};

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

EigenDecomposition sym_eigen(const SpdMatrix& a);

// Symmetric positive square root via eigendecomposition.
SpdMatrix psd_sqrt(const SpdMatrix& a);

// Closed-form squared 2-Wasserstein distance between Gaussians:
//   ||mu1 - mu2||^2 + Tr(S1 + S2 - 2 (S2^{1/2} S1 S2^{1/2})^{1/2})
// Tiny negative results from round-off are clamped to 0.
double gaussian_w2_sq(const Eigen::VectorXd& mu1, const SpdMatrix& s1,
                      const Eigen::VectorXd& mu2, const SpdMatrix& s2);

// Fast path for an isotropic target N(y, eps*I):
//   ||mu1 - y||^2 + Tr(S1) + d*eps - 2*sqrt(eps)*Tr(S1^{1/2})
double gaussian_w2_sq_isotropic_target(const Eigen::VectorXd& mu1,
                                       const SpdMatrix& s1,
                                       const Eigen::VectorXd& y, double eps);

}  // namespace wassbern::linalg

#endif
