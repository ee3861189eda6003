#ifndef WASSBERN_PREDICTIVE_HPP
#define WASSBERN_PREDICTIVE_HPP

#include <vector>

#include <Eigen/Dense>

#include "wassbern/linalg.hpp"

namespace wassbern {

/// Mixture of Gaussians at a fixed input t.
struct GaussianMixtureAt {
    Eigen::VectorXd weights;              // simplex
    std::vector<Eigen::VectorXd> means;   // K entries
    std::vector<linalg::SpdMatrix> covs;  // K entries

    int components() const { return static_cast<int>(means.size()); }

    Eigen::VectorXd mean() const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(means.front().size());
        for (int k = 0; k < components(); ++k) {
            out += weights(k) * means[static_cast<size_t>(k)];
        }
        return out;
    }
};

/// Anything that predicts a Gaussian mixture at each normalized input t.
/// The metrics module is written against this interface so the trained
/// model and both baselines are scored identically.
class PredictiveModel {
  public:
    virtual ~PredictiveModel() = default;
    virtual int dim() const = 0;
    virtual GaussianMixtureAt predict(double t) const = 0;

    Eigen::VectorXd mean(double t) const { return predict(t).mean(); }
};

}  // namespace wassbern

#endif
