#include "wassbern/model.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wassbern/bernstein.hpp"
#include "wassbern/rng.hpp"

namespace wassbern::model {

using nlohmann::json;

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
    Eigen::VectorXd e = shifted.array().exp();
    return e / e.sum();
}

linalg::SpdMatrix CovFactorControl::realize(double jitter) const {
    const auto d = lower.rows();
    Eigen::MatrixXd tri = lower.triangularView<Eigen::Lower>();
    Eigen::MatrixXd sigma = tri * tri.transpose() +
                            jitter * Eigen::MatrixXd::Identity(d, d);
    return linalg::SpdMatrix(sigma);
}

MixtureModel::MixtureModel(ModelConfig cfg,
                           std::vector<ComponentParams> components,
                           Eigen::VectorXd weight_logits, Normalization norm)
    : cfg_(cfg),
      components_(std::move(components)),
      weight_logits_(std::move(weight_logits)),
      norm_(norm) {
    if (static_cast<int>(components_.size()) != cfg_.components ||
        weight_logits_.size() != cfg_.components) {
        throw DimMismatch("MixtureModel: component count mismatch");
    }
    for (const auto& comp : components_) {
        if (static_cast<int>(comp.control_means.size()) != cfg_.degree + 1 ||
            static_cast<int>(comp.control_cov_factors.size()) !=
                cfg_.degree + 1) {
            throw DimMismatch("MixtureModel: expected N+1 controls");
        }
    }
}

Eigen::VectorXd MixtureModel::weights() const {
    return softmax(weight_logits_);
}

GaussianMixtureAt MixtureModel::predict(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("predict: t must lie in [0, 1]");
    }
    GaussianMixtureAt out;
    out.weights = weights();
    out.means.reserve(static_cast<size_t>(cfg_.components));
    out.covs.reserve(static_cast<size_t>(cfg_.components));
    for (const auto& comp : components_) {
        out.means.push_back(bernstein::mean_at(comp.control_means, t));
        std::vector<linalg::SpdMatrix> covs;
        covs.reserve(comp.control_cov_factors.size());
        for (const auto& f : comp.control_cov_factors) {
            covs.push_back(f.realize(cfg_.jitter));
        }
        out.covs.push_back(bernstein::cov_at(covs, t));
    }
    return out;
}

std::vector<Eigen::VectorXd> MixtureModel::mean_trajectory(
    const std::vector<double>& ts) const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(ts.size());
    for (double t : ts) {
        out.push_back(mean(t));
    }
    return out;
}

long MixtureModel::param_count(const ModelConfig& cfg) {
    const long k = cfg.components;
    const long m = cfg.degree + 1;
    const long d = cfg.dim;
    return k * m * d + k * m * d * (d + 1) / 2 + k;
}

Eigen::VectorXd MixtureModel::flatten_params() const {
    Eigen::VectorXd theta(param_count(cfg_));
    long p = 0;
    for (const auto& comp : components_) {
        for (const auto& mu : comp.control_means) {
            for (long j = 0; j < mu.size(); ++j) theta(p++) = mu(j);
        }
        for (const auto& f : comp.control_cov_factors) {
            for (int r = 0; r < cfg_.dim; ++r) {
                for (int c = 0; c <= r; ++c) theta(p++) = f.lower(r, c);
            }
        }
    }
    for (long k = 0; k < weight_logits_.size(); ++k) {
        theta(p++) = weight_logits_(k);
    }
    return theta;
}

MixtureModel MixtureModel::unflatten_params(const Eigen::VectorXd& theta,
                                            const ModelConfig& cfg,
                                            const Normalization& norm) {
    if (theta.size() != param_count(cfg)) {
        throw DimMismatch("unflatten_params: expected length " +
                          std::to_string(param_count(cfg)) + ", got " +
                          std::to_string(theta.size()));
    }
    std::vector<ComponentParams> components(static_cast<size_t>(cfg.components));
    long p = 0;
    for (auto& comp : components) {
        comp.control_means.resize(static_cast<size_t>(cfg.degree + 1));
        comp.control_cov_factors.resize(static_cast<size_t>(cfg.degree + 1));
        for (auto& mu : comp.control_means) {
            mu.resize(cfg.dim);
            for (int j = 0; j < cfg.dim; ++j) mu(j) = theta(p++);
        }
        for (auto& f : comp.control_cov_factors) {
            f.lower = Eigen::MatrixXd::Zero(cfg.dim, cfg.dim);
            for (int r = 0; r < cfg.dim; ++r) {
                for (int c = 0; c <= r; ++c) f.lower(r, c) = theta(p++);
            }
        }
    }
    Eigen::VectorXd logits(cfg.components);
    for (int k = 0; k < cfg.components; ++k) logits(k) = theta(p++);
    return MixtureModel(cfg, std::move(components), std::move(logits), norm);
}

std::string MixtureModel::to_json() const {
    Eigen::VectorXd theta = flatten_params();
    const long k = cfg_.components;
    const long m = cfg_.degree + 1;
    const long d = cfg_.dim;
    const long means_per_comp = m * d;
    const long facs_per_comp = m * d * (d + 1) / 2;

    std::vector<double> means, factors, logits;
    long p = 0;
    for (long kk = 0; kk < k; ++kk) {
        for (long i = 0; i < means_per_comp; ++i) means.push_back(theta(p++));
        for (long i = 0; i < facs_per_comp; ++i) factors.push_back(theta(p++));
    }
    for (long kk = 0; kk < k; ++kk) logits.push_back(theta(p++));

    json doc = {
        {"degree", cfg_.degree},
        {"K", cfg_.components},
        {"dim", cfg_.dim},
        {"jitter", cfg_.jitter},
        {"control_means", means},
        {"cov_factors", factors},
        {"weight_logits", logits},
        {"normalization", {{"x_min", norm_.x_min}, {"x_max", norm_.x_max}}},
    };
    return doc.dump(2);
}

MixtureModel MixtureModel::from_json(const std::string& text) {
    json doc = json::parse(text);
    ModelConfig cfg;
    cfg.degree = doc.at("degree").get<int>();
    cfg.components = doc.at("K").get<int>();
    cfg.dim = doc.at("dim").get<int>();
    cfg.jitter = doc.at("jitter").get<double>();
    Normalization norm;
    norm.x_min = doc.at("normalization").at("x_min").get<double>();
    norm.x_max = doc.at("normalization").at("x_max").get<double>();

    auto means = doc.at("control_means").get<std::vector<double>>();
    auto factors = doc.at("cov_factors").get<std::vector<double>>();
    auto logits = doc.at("weight_logits").get<std::vector<double>>();

    const long k = cfg.components;
    const long means_per_comp = (cfg.degree + 1) * cfg.dim;
    const long facs_per_comp =
        (cfg.degree + 1) * cfg.dim * (cfg.dim + 1) / 2;
    if (static_cast<long>(means.size()) != k * means_per_comp ||
        static_cast<long>(factors.size()) != k * facs_per_comp ||
        static_cast<long>(logits.size()) != k) {
        throw DimMismatch("model JSON: array lengths inconsistent with config");
    }

    Eigen::VectorXd theta(param_count(cfg));
    long p = 0;
    for (long kk = 0; kk < k; ++kk) {
        for (long i = 0; i < means_per_comp; ++i)
            theta(p++) = means[static_cast<size_t>(kk * means_per_comp + i)];
        for (long i = 0; i < facs_per_comp; ++i)
            theta(p++) = factors[static_cast<size_t>(kk * facs_per_comp + i)];
    }
    for (long kk = 0; kk < k; ++kk) theta(p++) = logits[static_cast<size_t>(kk)];
    return unflatten_params(theta, cfg, norm);
}

void MixtureModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << to_json() << "\n";
}

MixtureModel MixtureModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path + "' for reading");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

MixtureModel init_model(const ModelConfig& cfg, const datasets::Dataset& data) {
    if (data.n() == 0) {
        throw EmptyData("init_model: empty dataset");
    }
    if (cfg.degree < 1 || cfg.components < 1 || cfg.dim < 1) {
        throw ConfigError("init_model: degree, components, dim must be >= 1");
    }
    if (data.dim() != cfg.dim) {
        throw DimMismatch("init_model: dataset dimension != model dimension");
    }
    const double x_min = data.xs.minCoeff();
    const double x_max = data.xs.maxCoeff();
    if (!(x_max > x_min)) {
        throw DegenerateInput("init_model: constant inputs");
    }
    Normalization norm{x_min, x_max};

    Eigen::VectorXd range(cfg.dim);
    for (int j = 0; j < cfg.dim; ++j) {
        range(j) = data.ys.col(j).maxCoeff() - data.ys.col(j).minCoeff();
    }

    auto rng = make_rng(cfg.seed, /*stream=*/2);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<ComponentParams> components(static_cast<size_t>(cfg.components));
    for (auto& comp : components) {
        comp.control_means.resize(static_cast<size_t>(cfg.degree + 1));
        comp.control_cov_factors.resize(static_cast<size_t>(cfg.degree + 1));
        for (int i = 0; i <= cfg.degree; ++i) {
            const double target =
                static_cast<double>(i) / static_cast<double>(cfg.degree);
            long best = 0;
            double best_dist = std::abs(norm.to_t(data.xs(0)) - target);
            for (long r = 1; r < data.n(); ++r) {
                double dist = std::abs(norm.to_t(data.xs(r)) - target);
                if (dist < best_dist) {
                    best = r;
                    best_dist = dist;
                }
            }
            Eigen::VectorXd mu = data.ys.row(best).transpose();
            for (int j = 0; j < cfg.dim; ++j) {
                mu(j) += 0.05 * range(j) * gauss(rng);
            }
            comp.control_means[static_cast<size_t>(i)] = mu;
            comp.control_cov_factors[static_cast<size_t>(i)].lower =
                Eigen::MatrixXd::Zero(cfg.dim, cfg.dim);
        }
    }
    return MixtureModel(cfg, std::move(components),
                        Eigen::VectorXd::Zero(cfg.components), norm);
}

}  // namespace wassbern::model
