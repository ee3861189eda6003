#include "wassbern/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "wassbern/bernstein.hpp"
#include "wassbern/rng.hpp"

namespace wassbern::training {

namespace {

constexpr double kEigDampFloor = 1e-10;

struct LossTerms {
    double value = 0.0;
    Eigen::VectorXd grad;  // empty unless requested
};

// Evaluates the data term (and optionally its gradient) of the empirical
// risk. Works on the structured parameters directly so realized control
// covariances are formed once per call rather than once per point.
LossTerms data_term(const model::MixtureModel& m,
                    const std::vector<TrainPoint>& batch,
                    const TrainConfig& cfg, bool want_grad,
                    GradDiagnostics* diag) {
    const auto& comps = m.component_params();
    const int n_comp = m.components_count();
    const int degree = m.degree();
    const int d = m.dim();
    const double eps = cfg.target_eps;
    const double sqrt_eps = std::sqrt(eps);
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    const Eigen::VectorXd w = m.weights();

    // realized control covariance factors (lower triangles) and matrices
    std::vector<std::vector<Eigen::MatrixXd>> tri(
        static_cast<size_t>(n_comp));
    std::vector<std::vector<Eigen::MatrixXd>> sigma_controls(
        static_cast<size_t>(n_comp));
    for (int k = 0; k < n_comp; ++k) {
        tri[k].reserve(static_cast<size_t>(degree + 1));
        sigma_controls[k].reserve(static_cast<size_t>(degree + 1));
        for (int i = 0; i <= degree; ++i) {
            Eigen::MatrixXd l =
                comps[k].control_cov_factors[i].lower.triangularView<
                    Eigen::Lower>();
            tri[k].push_back(l);
            sigma_controls[k].push_back(
                l * l.transpose() +
                m.jitter() * Eigen::MatrixXd::Identity(d, d));
        }
    }

    // gradient accumulators in structured form
    std::vector<std::vector<Eigen::VectorXd>> g_mu;
    std::vector<std::vector<Eigen::MatrixXd>> g_sigma;
    Eigen::VectorXd comp_avg_dist = Eigen::VectorXd::Zero(n_comp);
    if (want_grad) {
        g_mu.assign(n_comp, std::vector<Eigen::VectorXd>(
                                degree + 1, Eigen::VectorXd::Zero(d)));
        g_sigma.assign(n_comp, std::vector<Eigen::MatrixXd>(
                                   degree + 1, Eigen::MatrixXd::Zero(d, d)));
    }

    double total = 0.0;
    for (const TrainPoint& pt : batch) {
        if (!(pt.t >= 0.0 && pt.t <= 1.0)) {
            throw DomainError("loss: t must lie in [0, 1]");
        }
        const Eigen::VectorXd b = bernstein::basis_eval(degree, pt.t);
        for (int k = 0; k < n_comp; ++k) {
            Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
            Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(d, d);
            for (int i = 0; i <= degree; ++i) {
                mu += b(i) * comps[k].control_means[i];
                sig += b(i) * sigma_controls[k][i];
            }

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sig);
            if (es.info() != Eigen::Success) {
                throw NumericalError("loss: eigendecomposition failed");
            }
            double tr_sqrt = 0.0;
            Eigen::VectorXd inv_sqrt_vals(d);
            for (int j = 0; j < d; ++j) {
                double lam = es.eigenvalues()(j);
                double lam_damped = std::max(lam, kEigDampFloor);
                if (lam < kEigDampFloor && diag != nullptr) {
                    ++diag->damped_count;
                }
                tr_sqrt += std::sqrt(lam_damped);
                inv_sqrt_vals(j) = 1.0 / std::sqrt(lam_damped);
            }

            const Eigen::VectorXd diff = mu - pt.y;
            double dist = diff.squaredNorm() + sig.trace() + d * eps -
                          2.0 * sqrt_eps * tr_sqrt;
            dist = std::max(dist, 0.0);
            total += w(k) * inv_n * dist;
            comp_avg_dist(k) += inv_n * dist;

            if (want_grad) {
                // d dist / d Sigma = I - sqrt(eps) * Sigma^{-1/2}
                Eigen::MatrixXd g_sig =
                    Eigen::MatrixXd::Identity(d, d) -
                    sqrt_eps * (es.eigenvectors() *
                                inv_sqrt_vals.asDiagonal() *
                                es.eigenvectors().transpose());
                const double scale = w(k) * inv_n;
                for (int i = 0; i <= degree; ++i) {
                    g_mu[k][i] += scale * b(i) * 2.0 * diff;
                    g_sigma[k][i] += scale * b(i) * g_sig;
                }
            }
        }
    }

    LossTerms out;
    out.value = total;
    if (want_grad) {
        out.grad.resize(model::MixtureModel::param_count(m.config()));
        long p = 0;
        for (int k = 0; k < n_comp; ++k) {
            for (int i = 0; i <= degree; ++i) {
                for (int j = 0; j < d; ++j) out.grad(p++) = g_mu[k][i](j);
            }
            for (int i = 0; i <= degree; ++i) {
                // Sigma = L L^T + jitter I with symmetric upstream G:
                // d/dL = 2 G L, restricted to the lower triangle
                Eigen::MatrixXd g_l = 2.0 * g_sigma[k][i] * tri[k][i];
                for (int r = 0; r < d; ++r) {
                    for (int c = 0; c <= r; ++c) out.grad(p++) = g_l(r, c);
                }
            }
        }
        // softmax chain for the weight logits
        const double mixture_avg = w.dot(comp_avg_dist);
        for (int k = 0; k < n_comp; ++k) {
            out.grad(p++) = w(k) * (comp_avg_dist(k) - mixture_avg);
        }
    }
    return out;
}

Eigen::VectorXd l2_mask(const model::MixtureModel& m, const TrainConfig& cfg) {
    Eigen::VectorXd mask = Eigen::VectorXd::Ones(
        model::MixtureModel::param_count(m.config()));
    if (!cfg.l2_include_logits) {
        mask.tail(m.components_count()).setZero();
    }
    return mask;
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
        !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
        throw ConfigError("Adam betas must lie in (0, 1)");
    }
    if (adam_eps <= 0.0) throw ConfigError("adam_eps must be > 0");
    if (l2_lambda < 0.0) throw ConfigError("l2_lambda must be >= 0");
    if (target_eps <= 0.0) throw ConfigError("target_eps must be > 0");
}

NormalizedInputs normalize_inputs(const Eigen::VectorXd& xs) {
    if (xs.size() < 2) {
        throw TooFewPoints("normalize_inputs: need at least 2 points");
    }
    const double x_min = xs.minCoeff();
    const double x_max = xs.maxCoeff();
    if (!(x_max > x_min)) {
        throw DegenerateInput("normalize_inputs: constant inputs");
    }
    NormalizedInputs out;
    out.x_min = x_min;
    out.x_max = x_max;
    out.ts = (xs.array() - x_min) / (x_max - x_min);
    return out;
}

double loss(const model::MixtureModel& m, const std::vector<TrainPoint>& batch,
            const TrainConfig& cfg) {
    if (batch.empty()) {
        throw EmptyData("loss: empty batch");
    }
    LossTerms terms = data_term(m, batch, cfg, /*want_grad=*/false, nullptr);
    Eigen::VectorXd theta = m.flatten_params();
    Eigen::VectorXd mask = l2_mask(m, cfg);
    return terms.value +
           cfg.l2_lambda * (theta.array() * mask.array()).matrix().squaredNorm();
}

Eigen::VectorXd loss_grad(const model::MixtureModel& m,
                          const std::vector<TrainPoint>& batch,
                          const TrainConfig& cfg, GradDiagnostics* diag) {
    if (batch.empty()) {
        throw EmptyData("loss_grad: empty batch");
    }
    LossTerms terms = data_term(m, batch, cfg, /*want_grad=*/true, diag);
    Eigen::VectorXd theta = m.flatten_params();
    Eigen::VectorXd mask = l2_mask(m, cfg);
    return terms.grad +
           (2.0 * cfg.l2_lambda) * (theta.array() * mask.array()).matrix();
}

AdamState AdamState::zero(long n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
}

void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad, const TrainConfig& cfg) {
    if (state.first_moment.size() != params.size() ||
        grad.size() != params.size()) {
        throw DimMismatch("adam_step: length mismatch");
    }
    state.step += 1;
    state.first_moment = cfg.adam_beta1 * state.first_moment +
                         (1.0 - cfg.adam_beta1) * grad;
    state.second_moment =
        cfg.adam_beta2 * state.second_moment +
        (1.0 - cfg.adam_beta2) * grad.array().square().matrix();
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, state.step);
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, state.step);
    Eigen::ArrayXd m_hat = state.first_moment.array() / c1;
    Eigen::ArrayXd v_hat = state.second_moment.array() / c2;
    params.array() -=
        cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.adam_eps);
}

TrainResult train(const datasets::Dataset& data,
                  const model::ModelConfig& model_cfg, const TrainConfig& cfg,
                  std::vector<EpochLogEntry>* log) {
    cfg.validate();
    if (data.n() == 0) {
        throw EmptyData("train: empty dataset");
    }
    NormalizedInputs norm = normalize_inputs(data.xs);

    std::vector<TrainPoint> all(static_cast<size_t>(data.n()));
    for (long i = 0; i < data.n(); ++i) {
        all[static_cast<size_t>(i)] = {norm.ts(i),
                                       data.ys.row(i).transpose()};
    }

    model::ModelConfig mc = model_cfg;
    mc.seed = cfg.seed;
    model::MixtureModel m = model::init_model(mc, data);
    Eigen::VectorXd theta = m.flatten_params();
    AdamState state = AdamState::zero(theta.size());
    auto rng = make_rng(cfg.seed, /*stream=*/3);

    std::vector<size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result{std::move(m), {}};
    result.loss_history.reserve(static_cast<size_t>(cfg.epochs));

    const auto t0 = std::chrono::steady_clock::now();
    for (long epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double last_grad_norm = 0.0;
        for (size_t start = 0; start < order.size();
             start += static_cast<size_t>(cfg.batch_size)) {
            const size_t stop = std::min(
                order.size(), start + static_cast<size_t>(cfg.batch_size));
            std::vector<TrainPoint> batch;
            batch.reserve(stop - start);
            for (size_t j = start; j < stop; ++j) {
                batch.push_back(all[order[j]]);
            }
            Eigen::VectorXd grad = loss_grad(result.model, batch, cfg);
            if (cfg.freeze_weights) {
                grad.tail(result.model.components_count()).setZero();
            }
            last_grad_norm = grad.norm();
            adam_step(state, theta, grad, cfg);
            result.model = model::MixtureModel::unflatten_params(
                theta, mc, result.model.normalization());
        }
        const double full_loss = loss(result.model, all, cfg);
        result.loss_history.push_back(full_loss);
        if (log != nullptr) {
            const double wall_ms =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
            log->push_back({epoch, full_loss, last_grad_norm, wall_ms});
        }
    }
    return result;
}

}  // namespace wassbern::training
