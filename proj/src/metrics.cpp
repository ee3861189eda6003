#include "wassbern/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wassbern/rng.hpp"
#include "wassbern/training.hpp"

namespace wassbern::metrics {

namespace {

Eigen::VectorXd normalized_ts(const datasets::Dataset& data) {
    if (data.n() == 0) {
        throw EmptyData("metrics: empty dataset");
    }
    if (data.n() == 1) {
        return Eigen::VectorXd::Zero(1);
    }
    return training::normalize_inputs(data.xs).ts;
}

double log_gaussian_density(const Eigen::VectorXd& y,
                            const Eigen::VectorXd& mu,
                            const linalg::SpdMatrix& cov) {
    const int d = cov.dim();
    Eigen::LLT<Eigen::MatrixXd> llt(cov.entries());
    if (llt.info() != Eigen::Success) {
        throw NumericalError("nll: covariance not positive definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    double log_det = 0.0;
    for (int j = 0; j < d; ++j) {
        log_det += 2.0 * std::log(l(j, j));
    }
    const Eigen::VectorXd z = llt.matrixL().solve(y - mu);
    return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det +
                   z.squaredNorm());
}

}  // namespace

double avg_w2(const PredictiveModel& model, const datasets::Dataset& data,
              double eps) {
    const Eigen::VectorXd ts = normalized_ts(data);
    double total = 0.0;
    for (long i = 0; i < data.n(); ++i) {
        GaussianMixtureAt mix = model.predict(ts(i));
        const Eigen::VectorXd y = data.ys.row(i).transpose();
        double sq = 0.0;
        for (int k = 0; k < mix.components(); ++k) {
            sq += mix.weights(k) * linalg::gaussian_w2_sq_isotropic_target(
                                       mix.means[k], mix.covs[k], y, eps);
        }
        total += std::sqrt(std::max(sq, 0.0));
    }
    return total / static_cast<double>(data.n());
}

double energy_distance(const std::vector<Eigen::VectorXd>& samples_pred,
                       const std::vector<Eigen::VectorXd>& samples_data) {
    if (samples_pred.empty() || samples_data.empty()) {
        throw EmptyData("energy_distance: empty sample set");
    }
    const auto nx = samples_pred.size();
    const auto ny = samples_data.size();

    double cross = 0.0;
    for (const auto& x : samples_pred) {
        for (const auto& y : samples_data) {
            cross += (x - y).norm();
        }
    }
    cross /= static_cast<double>(nx) * static_cast<double>(ny);

    auto within = [](const std::vector<Eigen::VectorXd>& s) {
        const auto n = s.size();
        if (n < 2) return 0.0;
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                if (i != j) total += (s[i] - s[j]).norm();
            }
        }
        return total / (static_cast<double>(n) * static_cast<double>(n - 1));
    };

    return std::max(2.0 * cross - within(samples_pred) - within(samples_data),
                    0.0);
}

std::vector<Eigen::VectorXd> sample_predictions(const PredictiveModel& model,
                                                const Eigen::VectorXd& ts,
                                                std::uint64_t seed) {
    auto rng = make_rng(seed, /*stream=*/4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<size_t>(ts.size()));
    for (long i = 0; i < ts.size(); ++i) {
        GaussianMixtureAt mix = model.predict(ts(i));
        // pick a component by inverse CDF on the weights
        double u = unif(rng);
        int k = 0;
        double acc = mix.weights(0);
        while (u > acc && k + 1 < mix.components()) {
            ++k;
            acc += mix.weights(k);
        }
        Eigen::LLT<Eigen::MatrixXd> llt(mix.covs[k].entries());
        if (llt.info() != Eigen::Success) {
            throw NumericalError("sample_predictions: covariance not PD");
        }
        Eigen::VectorXd z(model.dim());
        for (int j = 0; j < model.dim(); ++j) z(j) = gauss(rng);
        out.push_back(mix.means[k] + Eigen::MatrixXd(llt.matrixL()) * z);
    }
    return out;
}

double nll(const PredictiveModel& model, const datasets::Dataset& data) {
    const Eigen::VectorXd ts = normalized_ts(data);
    double total = 0.0;
    for (long i = 0; i < data.n(); ++i) {
        GaussianMixtureAt mix = model.predict(ts(i));
        const Eigen::VectorXd y = data.ys.row(i).transpose();
        // log sum_k w_k phi_k via log-sum-exp
        Eigen::VectorXd terms(mix.components());
        for (int k = 0; k < mix.components(); ++k) {
            terms(k) = std::log(std::max(mix.weights(k), 1e-300)) +
                       log_gaussian_density(y, mix.means[k], mix.covs[k]);
        }
        const double peak = terms.maxCoeff();
        const double log_mix =
            peak + std::log((terms.array() - peak).exp().sum());
        if (!std::isfinite(log_mix)) {
            throw NumericalError("nll: non-finite mixture density");
        }
        total -= log_mix;
    }
    return total / static_cast<double>(data.n());
}

double rmse(const PredictiveModel& model, const datasets::Dataset& data) {
    const Eigen::VectorXd ts = normalized_ts(data);
    double total = 0.0;
    for (long i = 0; i < data.n(); ++i) {
        total += (model.mean(ts(i)) - data.ys.row(i).transpose()).squaredNorm();
    }
    return std::sqrt(total / static_cast<double>(data.n()));
}

double sri(const PredictiveModel& model, long grid_size) {
    if (grid_size < 3) {
        throw ConfigError("sri: grid_size must be >= 3");
    }
    std::vector<Eigen::VectorXd> ys;
    ys.reserve(static_cast<size_t>(grid_size));
    for (long j = 0; j < grid_size; ++j) {
        const double t =
            static_cast<double>(j) / static_cast<double>(grid_size - 1);
        ys.push_back(model.mean(t));
    }
    double total = 0.0;
    for (long j = 1; j + 1 < grid_size; ++j) {
        total += (ys[j + 1] - 2.0 * ys[j] + ys[j - 1]).squaredNorm();
    }
    const double mean_sq = total / static_cast<double>(grid_size - 2);
    const double g = static_cast<double>(grid_size);
    return mean_sq * g * g * g * g;
}

MetricsReport compute_report(const PredictiveModel& model,
                             const datasets::Dataset& data,
                             const ReportConfig& cfg,
                             const std::string& model_name) {
    MetricsReport rep;
    rep.model_name = model_name;
    rep.dataset_name = data.name;
    rep.w2_bar = avg_w2(model, data, cfg.eps);

    const Eigen::VectorXd ts = normalized_ts(data);
    std::vector<Eigen::VectorXd> data_samples;
    data_samples.reserve(static_cast<size_t>(data.n()));
    for (long i = 0; i < data.n(); ++i) {
        data_samples.push_back(data.ys.row(i).transpose());
    }
    rep.energy_distance =
        energy_distance(sample_predictions(model, ts, cfg.seed), data_samples);
    rep.nll = nll(model, data);
    rep.rmse = rmse(model, data);
    rep.sri = sri(model, cfg.sri_grid);
    return rep;
}

std::string MetricsReport::to_json() const {
    nlohmann::json doc = {
        {"model", model_name},       {"dataset", dataset_name},
        {"w2_bar", w2_bar},          {"energy_distance", energy_distance},
        {"nll", nll},                {"rmse", rmse},
        {"sri", sri},
    };
    return doc.dump(2);
}

std::string MetricsReport::csv_header() const {
    return "model,dataset,w2_bar,energy_distance,nll,rmse,sri";
}

std::string MetricsReport::to_csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g",
                  model_name.c_str(), dataset_name.c_str(), w2_bar,
                  energy_distance, nll, rmse, sri);
    return buf;
}

}  // namespace wassbern::metrics
