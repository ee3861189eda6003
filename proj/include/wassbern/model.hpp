#ifndef WASSBERN_MODEL_HPP
#define WASSBERN_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wassbern/datasets.hpp"
#include "wassbern/predictive.hpp"

namespace wassbern::model {

struct ModelConfig {
    int degree = 8;      // Bernstein degree N
    int components = 1;  // K
    int dim = 2;         // d
    double jitter = 1e-4;
    std::uint64_t seed = 0;
};

/// Affine map between raw inputs x and normalized t in [0, 1].
struct Normalization {
    double x_min = 0.0;
    double x_max = 1.0;

    double to_t(double x) const { return (x - x_min) / (x_max - x_min); }
};

/// Unconstrained lower-triangular factor; realized covariance is
/// L*L^T + jitter*I, which is SPD for every parameter value.
struct CovFactorControl {
    Eigen::MatrixXd lower;  // d x d, only the lower triangle is used

    linalg::SpdMatrix realize(double jitter) const;
};

struct ComponentParams {
    std::vector<Eigen::VectorXd> control_means;        // N+1 entries
    std::vector<CovFactorControl> control_cov_factors;  // N+1 entries
};

/**
 * K Gaussian components whose mean/covariance trajectories are Bernstein
 * curves over control points, combined by softmax weights. Immutable in
 * spirit: prediction never mutates; training replaces the parameter vector
 * wholesale through unflatten.
 */
class MixtureModel : public PredictiveModel {
  public:
    MixtureModel(ModelConfig cfg, std::vector<ComponentParams> components,
                 Eigen::VectorXd weight_logits, Normalization norm);

    int degree() const { return cfg_.degree; }
    int components_count() const { return cfg_.components; }
    int dim() const override { return cfg_.dim; }
    double jitter() const { return cfg_.jitter; }
    const ModelConfig& config() const { return cfg_; }
    const Normalization& normalization() const { return norm_; }
    const std::vector<ComponentParams>& component_params() const {
        return components_;
    }
    const Eigen::VectorXd& weight_logits() const { return weight_logits_; }

    Eigen::VectorXd weights() const;  // softmax of logits

    GaussianMixtureAt predict(double t) const override;
    std::vector<Eigen::VectorXd> mean_trajectory(
        const std::vector<double>& ts) const;

    // Flat parameter vector theta. Ordering, component-major:
    //   for each component k: control means (i = 0..N, coordinates in order),
    //   then cov factors (i = 0..N, lower triangle row-major);
    //   then the K weight logits.
    Eigen::VectorXd flatten_params() const;
    static long param_count(const ModelConfig& cfg);
    static MixtureModel unflatten_params(const Eigen::VectorXd& theta,
                                         const ModelConfig& cfg,
                                         const Normalization& norm);

    std::string to_json() const;
    static MixtureModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static MixtureModel load(const std::string& path);

  private:
    ModelConfig cfg_;
    std::vector<ComponentParams> components_;
    Eigen::VectorXd weight_logits_;
    Normalization norm_;
};

// Data-anchored initialization: the i-th control mean is the data point
// whose normalized input is nearest to i/N, plus seeded Gaussian jitter of
// scale 0.05 * per-dimension data range. Factors start at zero (Sigma =
// jitter*I), logits at zero (uniform weights).
MixtureModel init_model(const ModelConfig& cfg, const datasets::Dataset& data);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace wassbern::model

#endif
