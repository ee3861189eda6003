#ifndef WASSBERN_BASELINES_HPP
#define WASSBERN_BASELINES_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wassbern/datasets.hpp"
#include "wassbern/predictive.hpp"

namespace wassbern::baselines {

/**
 * Per-dimension polynomial least squares on normalized t, fitted via QR.
 * Prediction is Gaussian with the polynomial value as mean and a diagonal
 * covariance from the per-dimension residual variances.
 */
class PolyModel : public PredictiveModel {
  public:
    static PolyModel fit(const datasets::Dataset& data, int degree);

    int degree() const { return degree_; }
    int dim() const override { return static_cast<int>(coeffs_.cols()); }
    const Eigen::MatrixXd& coefficients() const { return coeffs_; }
    const Eigen::VectorXd& residual_variance() const { return resid_var_; }

    GaussianMixtureAt predict(double t) const override;

    std::string to_json() const;
    static PolyModel from_json(const std::string& text);

  private:
    PolyModel(int degree, Eigen::MatrixXd coeffs, Eigen::VectorXd resid_var);

    int degree_;
    Eigen::MatrixXd coeffs_;     // (degree+1) x d
    Eigen::VectorXd resid_var_;  // d
};

struct GprHyper {
    double lengthscale = 0.1;
    double signal_var = 1.0;
    double noise_var = 1e-3;
};

/**
 * Gaussian process regression with a squared-exponential kernel, modeled
 * independently per output dimension with a shared posterior variance
 * (isotropic predictive covariance).
 */
class GprModel : public PredictiveModel {
  public:
    static GprModel fit(const datasets::Dataset& data, const GprHyper& hyper);

    // Log-grid search over (lengthscale, noise_var) maximizing the summed
    // per-dimension marginal likelihood.
    static GprHyper tune(const datasets::Dataset& data);

    int dim() const override { return static_cast<int>(dual_.cols()); }
    const GprHyper& hyper() const { return hyper_; }

    GaussianMixtureAt predict(double t) const override;

    std::string to_json() const;
    static GprModel from_json(const std::string& text);

  private:
    GprModel(GprHyper hyper, Eigen::VectorXd train_ts, Eigen::MatrixXd dual,
             Eigen::MatrixXd chol_lower);

    GprHyper hyper_;
    Eigen::VectorXd train_ts_;
    Eigen::MatrixXd dual_;        // n x d, (K + noise I)^{-1} Y
    Eigen::MatrixXd chol_lower_;  // Cholesky factor of K + noise I
};

}  // namespace wassbern::baselines

#endif
