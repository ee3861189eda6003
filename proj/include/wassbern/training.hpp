#ifndef WASSBERN_TRAINING_HPP
#define WASSBERN_TRAINING_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "wassbern/datasets.hpp"
#include "wassbern/model.hpp"

namespace wassbern::training {

struct TrainConfig {
    long epochs = 2000;
    long batch_size = 32;
    double learning_rate = 5e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double l2_lambda = 1e-5;   // lambda
    double target_eps = 1e-3;  // epsilon of the point-target N(y, eps*I)
    std::uint64_t seed = 0;
    bool freeze_weights = false;
    bool l2_include_logits = true;

    void validate() const;
};

struct NormalizedInputs {
    Eigen::VectorXd ts;
    double x_min = 0.0;
    double x_max = 1.0;
};

// t_i = (x_i - min) / (max - min)
NormalizedInputs normalize_inputs(const Eigen::VectorXd& xs);

struct TrainPoint {
    double t;
    Eigen::VectorXd y;
};

struct GradDiagnostics {
    long damped_count = 0;  // eigenvalues that hit the damping floor
};

// Empirical risk: mixture-weighted squared W2 against N(y_i, eps*I),
// averaged over the batch, plus l2_lambda * ||theta||^2.
double loss(const model::MixtureModel& m, const std::vector<TrainPoint>& batch,
            const TrainConfig& cfg);

// Analytic gradient of loss with respect to the flattened parameters.
// The trace term flows through Sigma^{1/2}: d Tr(A^{1/2}) / dA = 0.5 A^{-1/2}.
Eigen::VectorXd loss_grad(const model::MixtureModel& m,
                          const std::vector<TrainPoint>& batch,
                          const TrainConfig& cfg,
                          GradDiagnostics* diag = nullptr);

struct AdamState {
    Eigen::VectorXd first_moment;
    Eigen::VectorXd second_moment;
    long step = 0;

    static AdamState zero(long n);
};

// Standard bias-corrected Adam update, in place.
void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad, const TrainConfig& cfg);

struct EpochLogEntry {
    long epoch;
    double full_loss;
    double grad_norm;  // of the last mini-batch gradient in the epoch
    double wall_ms;
};

struct TrainResult {
    model::MixtureModel model;
    std::vector<double> loss_history;  // per-epoch full-data loss
};

// epochs * ceil(n/batch) Adam steps over seeded shuffled mini-batches.
// Deterministic given cfg.seed (also used for model initialization).
TrainResult train(const datasets::Dataset& data,
                  const model::ModelConfig& model_cfg, const TrainConfig& cfg,
                  std::vector<EpochLogEntry>* log = nullptr);

}  // namespace wassbern::training

#endif
