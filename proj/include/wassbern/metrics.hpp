#ifndef WASSBERN_METRICS_HPP
#define WASSBERN_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wassbern/datasets.hpp"
#include "wassbern/predictive.hpp"

namespace wassbern::metrics {

struct MetricsReport {
    double w2_bar = 0.0;
    double energy_distance = 0.0;
    double nll = 0.0;
    double rmse = 0.0;
    double sri = 0.0;
    std::string model_name;
    std::string dataset_name;

    std::string to_json() const;
    std::string csv_header() const;
    std::string to_csv_row() const;
};

// Per point: sqrt of the mixture-weighted squared W2 against N(y_i, eps*I),
// then averaged over points. Matches the data term of the training risk.
double avg_w2(const PredictiveModel& model, const datasets::Dataset& data,
              double eps);

// 2 E||X-Y|| - E||X-X'|| - E||Y-Y'|| with plug-in estimators; within-set
// terms exclude self-pairs and are 0 for singletons. Clamped at 0.
double energy_distance(const std::vector<Eigen::VectorXd>& samples_pred,
                       const std::vector<Eigen::VectorXd>& samples_data);

// One seeded draw from the predicted mixture at each t_i.
std::vector<Eigen::VectorXd> sample_predictions(const PredictiveModel& model,
                                                const Eigen::VectorXd& ts,
                                                std::uint64_t seed);

// Mean Gaussian-mixture negative log-likelihood, log-sum-exp stabilized.
double nll(const PredictiveModel& model, const datasets::Dataset& data);

// Root mean squared error of the mean trajectory.
double rmse(const PredictiveModel& model, const datasets::Dataset& data);

// Curvature energy of the mean trajectory: mean squared norm of discrete
// second differences on a uniform grid, scaled by grid_size^4 so it
// approximates the integral of ||y''||^2. Lower is smoother.
double sri(const PredictiveModel& model, long grid_size);

struct ReportConfig {
    double eps = 1e-3;
    std::uint64_t seed = 0;
    long sri_grid = 1000;
};

MetricsReport compute_report(const PredictiveModel& model,
                             const datasets::Dataset& data,
                             const ReportConfig& cfg,
                             const std::string& model_name);

}  // namespace wassbern::metrics

#endif
