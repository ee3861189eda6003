// Acceptance suite. Each criterion prints exactly one pass/fail line and
// the binary exits nonzero if any criterion fails or overruns its budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wassbern/baselines.hpp"
#include "wassbern/bernstein.hpp"
#include "wassbern/datasets.hpp"
#include "wassbern/linalg.hpp"
#include "wassbern/metrics.hpp"
#include "wassbern/model.hpp"
#include "wassbern/rng.hpp"
#include "wassbern/training.hpp"

using namespace wassbern;
using model::MixtureModel;
using model::ModelConfig;
using training::TrainConfig;
using training::TrainPoint;

namespace {

int g_failed = 0;

void run_criterion(const std::string& name, double budget_seconds,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > budget_seconds) {
        ok = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "over budget (%.0f s)", budget_seconds);
        detail = detail.empty() ? buf : detail + "; " + buf;
    }
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] %s (%.2f s)%s%s",
                  ok ? "PASS" : "FAIL", name.c_str(), elapsed,
                  detail.empty() ? "" : " - ", detail.c_str());
    std::cout << line << "\n";
    if (!ok) ++g_failed;
}

MixtureModel random_model(const ModelConfig& cfg, std::uint64_t seed) {
    auto rng = make_rng(seed, 77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd theta(MixtureModel::param_count(cfg));
    for (long i = 0; i < theta.size(); ++i) theta(i) = gauss(rng);
    return MixtureModel::unflatten_params(theta, cfg, {0.0, 1.0});
}

std::vector<TrainPoint> random_batch(int n, int d, std::uint64_t seed) {
    auto rng = make_rng(seed, 78);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<TrainPoint> batch;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd y(d);
        for (int j = 0; j < d; ++j) y(j) = gauss(rng);
        batch.push_back({unif(rng), y});
    }
    return batch;
}

Eigen::VectorXd fd_gradient(const MixtureModel& m,
                            const std::vector<TrainPoint>& batch,
                            const TrainConfig& cfg, double h = 1e-5) {
    Eigen::VectorXd theta = m.flatten_params();
    Eigen::VectorXd grad(theta.size());
    for (long i = 0; i < theta.size(); ++i) {
        Eigen::VectorXd up = theta, dn = theta;
        up(i) += h;
        dn(i) -= h;
        const double lu = training::loss(
            MixtureModel::unflatten_params(up, m.config(), m.normalization()),
            batch, cfg);
        const double ld = training::loss(
            MixtureModel::unflatten_params(dn, m.config(), m.normalization()),
            batch, cfg);
        grad(i) = (lu - ld) / (2.0 * h);
    }
    return grad;
}

// smallest eigenvalue gap across all predicted covariances on the batch
double min_eigen_gap(const MixtureModel& m,
                     const std::vector<TrainPoint>& batch) {
    double gap = 1e300;
    for (const auto& pt : batch) {
        const auto mix = m.predict(pt.t);
        for (const auto& cov : mix.covs) {
            const auto eig = linalg::sym_eigen(cov);
            for (long i = 0; i + 1 < eig.eigenvalues.size(); ++i) {
                gap = std::min(gap,
                               eig.eigenvalues(i + 1) - eig.eigenvalues(i));
            }
        }
    }
    return gap;
}

// fixed mean curve with a fixed covariance, for metric oracles
class CurveModel : public PredictiveModel {
  public:
    CurveModel(std::function<Eigen::VectorXd(double)> curve,
               linalg::SpdMatrix cov)
        : curve_(std::move(curve)), cov_(std::move(cov)) {}

    int dim() const override { return cov_.dim(); }

    GaussianMixtureAt predict(double t) const override {
        GaussianMixtureAt mix;
        mix.weights = Eigen::VectorXd::Ones(1);
        mix.means = {curve_(t)};
        mix.covs = {cov_};
        return mix;
    }

  private:
    std::function<Eigen::VectorXd(double)> curve_;
    linalg::SpdMatrix cov_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

datasets::Dataset line_dataset(long n) {
    datasets::Dataset ds;
    ds.name = "line";
    ds.xs.resize(n);
    ds.ys.resize(n, 2);
    for (long i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        ds.xs(i) = s;
        ds.ys(i, 0) = s;
        ds.ys(i, 1) = 0.5 - s;
    }
    return ds;
}

bool w2_closed_form_oracles(std::string& detail) {
    auto rng = make_rng(424201);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> sigma(0.1, 3.0);
    std::uniform_int_distribution<int> dims(2, 5);

    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        // 1-D scalar formula
        const double m1 = gauss(rng), m2 = gauss(rng);
        const double s1 = sigma(rng), s2 = sigma(rng);
        Eigen::VectorXd mu1(1), mu2(1);
        mu1 << m1;
        mu2 << m2;
        const double got = linalg::gaussian_w2_sq(
            mu1, linalg::SpdMatrix(Eigen::MatrixXd::Constant(1, 1, s1 * s1)),
            mu2, linalg::SpdMatrix(Eigen::MatrixXd::Constant(1, 1, s2 * s2)));
        const double want = (m1 - m2) * (m1 - m2) + (s1 - s2) * (s1 - s2);
        worst = std::max(worst, std::abs(got - want) / want);

        // commuting diagonal covariances: per-axis sum of scalar distances
        const int d = dims(rng);
        Eigen::VectorXd a(d), b(d), u1(d), u2(d);
        for (int i = 0; i < d; ++i) {
            a(i) = sigma(rng);
            b(i) = sigma(rng);
            u1(i) = gauss(rng);
            u2(i) = gauss(rng);
        }
        const double got_d = linalg::gaussian_w2_sq(
            u1, linalg::SpdMatrix::diagonal(a.array().square()), u2,
            linalg::SpdMatrix::diagonal(b.array().square()));
        double want_d = (u1 - u2).squaredNorm();
        for (int i = 0; i < d; ++i) {
            want_d += (a(i) - b(i)) * (a(i) - b(i));
        }
        worst = std::max(worst, std::abs(got_d - want_d) / want_d);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst rel err %.2e", worst);
    detail = buf;
    return worst < 1e-9;
}

bool isotropic_equivalence(std::string& detail) {
    auto rng = make_rng(424202);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> eps_dist(1e-4, 1.0);
    std::uniform_int_distribution<int> dims(1, 5);

    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = dims(rng);
        Eigen::VectorXd mu(d), y(d);
        Eigen::MatrixXd a(d, d);
        for (int i = 0; i < d; ++i) {
            mu(i) = gauss(rng);
            y(i) = gauss(rng);
            for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
        }
        const linalg::SpdMatrix cov(a * a.transpose() +
                                    0.05 * Eigen::MatrixXd::Identity(d, d));
        const double eps = eps_dist(rng);
        const double fast =
            linalg::gaussian_w2_sq_isotropic_target(mu, cov, y, eps);
        const double general = linalg::gaussian_w2_sq(
            mu, cov, y,
            linalg::SpdMatrix(eps * Eigen::MatrixXd::Identity(d, d)));
        worst = std::max(worst, std::abs(fast - general) /
                                    std::max(1.0, std::abs(general)));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst err %.2e", worst);
    detail = buf;
    return worst < 1e-9;
}

bool bernstein_suite(std::string& detail) {
    auto rng = make_rng(424203);
    std::uniform_int_distribution<int> degrees(0, 15);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // partition of unity on 10^4 random (degree, t) pairs
    for (int trial = 0; trial < 10000; ++trial) {
        const auto w = bernstein::basis_eval(degrees(rng), unif(rng));
        if (std::abs(w.sum() - 1.0) >= 1e-12 || w.minCoeff() < 0.0) {
            detail = "partition of unity violated";
            return false;
        }
    }

    // endpoint interpolation
    for (int n = 0; n <= 15; ++n) {
        const auto w0 = bernstein::basis_eval(n, 0.0);
        const auto w1 = bernstein::basis_eval(n, 1.0);
        if (std::abs(w0(0) - 1.0) >= 1e-14 || std::abs(w1(n) - 1.0) >= 1e-14 ||
            (n > 0 && (w0.tail(n).cwiseAbs().maxCoeff() >= 1e-14 ||
                       w1.head(n).cwiseAbs().maxCoeff() >= 1e-14))) {
            detail = "endpoint interpolation violated";
            return false;
        }
    }

    // convex hull: curve stays inside the coordinate-wise control-point box
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = degrees(rng);
        std::vector<Eigen::VectorXd> controls;
        Eigen::Vector2d lo = Eigen::Vector2d::Constant(1e300);
        Eigen::Vector2d hi = Eigen::Vector2d::Constant(-1e300);
        for (int i = 0; i <= n; ++i) {
            Eigen::VectorXd c(2);
            c << gauss(rng), gauss(rng);
            controls.push_back(c);
            lo = lo.cwiseMin(c.head<2>());
            hi = hi.cwiseMax(c.head<2>());
        }
        const auto p = bernstein::mean_at(controls, unif(rng));
        for (int j = 0; j < 2; ++j) {
            if (p(j) < lo(j) - 1e-12 || p(j) > hi(j) + 1e-12) {
                detail = "convex hull violated";
                return false;
            }
        }
    }
    return true;
}

bool gradient_oracle(std::string& detail) {
    TrainConfig tc;
    tc.l2_lambda = 1e-5;
    double worst = 0.0;
    int checked = 0;
    for (std::uint64_t trial = 0; checked < 100 && trial < 400; ++trial) {
        ModelConfig cfg;
        cfg.degree = 2 + static_cast<int>(trial % 4);
        cfg.components = 1 + static_cast<int>(trial % 2);
        cfg.dim = 2 + static_cast<int>(trial % 2);
        MixtureModel m = random_model(cfg, 1000 + trial);
        auto batch = random_batch(4, cfg.dim, 2000 + trial);
        if (min_eigen_gap(m, batch) <= 1e-6) continue;

        const Eigen::VectorXd g = training::loss_grad(m, batch, tc);
        const Eigen::VectorXd fd = fd_gradient(m, batch, tc);
        for (long i = 0; i < g.size(); ++i) {
            const double scale =
                std::max({std::abs(g(i)), std::abs(fd(i)), 1e-6});
            worst = std::max(worst, std::abs(g(i) - fd(i)) / scale);
        }
        ++checked;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d pairs, worst rel err %.2e", checked,
                  worst);
    detail = buf;
    return checked >= 100 && worst < 1e-4;
}

bool psd_safety(std::string& detail) {
    auto rng = make_rng(424205);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst_margin = 1e300;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        ModelConfig cfg;
        cfg.degree = 1 + static_cast<int>(trial % 6);
        cfg.components = 1 + static_cast<int>(trial % 3);
        cfg.dim = 2 + static_cast<int>(trial % 2);
        MixtureModel m = random_model(cfg, 3000 + trial);
        for (int j = 0; j < 100; ++j) {
            const auto mix = m.predict(unif(rng));
            for (const auto& cov : mix.covs) {
                const double lmin =
                    linalg::sym_eigen(cov).eigenvalues.minCoeff();
                worst_margin = std::min(worst_margin, lmin - cfg.jitter);
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst margin %.2e", worst_margin);
    detail = buf;
    return worst_margin >= -1e-12;
}

bool trainer_sanity(std::string& detail) {
    const auto data = line_dataset(200);
    ModelConfig mc;
    mc.degree = 1;
    mc.components = 1;
    TrainConfig tc;
    tc.epochs = 500;
    tc.seed = 11;
    const auto r1 = training::train(data, mc, tc);
    const auto r2 = training::train(data, mc, tc);
    const double err = metrics::rmse(r1.model, data);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "rmse %.2e", err);
    detail = buf;
    if (r1.model.to_json() != r2.model.to_json()) {
        detail += "; nondeterministic";
        return false;
    }
    return err < 1e-2;
}

bool ellipse_benchmark(std::string& detail) {
    datasets::GeneratorSpec spec;
    spec.family = datasets::Family::ellipse;
    const auto data = datasets::generate(spec);
    const ModelConfig mc;  // N = 8, K = 1
    const TrainConfig tc;  // defaults
    const auto result = training::train(data, mc, tc);
    const double err = metrics::rmse(result.model, data);
    const double w2 = metrics::avg_w2(result.model, data, tc.target_eps);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "rmse %.4f, avg_w2 %.4f", err, w2);
    detail = buf;
    return err < 0.10 && w2 < 0.30;
}

bool lissajous_ordering(std::string& detail) {
    datasets::GeneratorSpec spec;
    spec.family = datasets::Family::lissajous;
    const auto data = datasets::generate(spec);

    ModelConfig mc;
    mc.degree = 50;
    TrainConfig tc;
    tc.epochs = 40000;
    tc.batch_size = 400;
    tc.learning_rate = 1e-2;
    tc.l2_lambda = 0.0;
    const auto result = training::train(data, mc, tc);

    const double ours = metrics::rmse(result.model, data);
    const double poly =
        metrics::rmse(baselines::PolyModel::fit(data, 10), data);
    const double gpr =
        metrics::rmse(baselines::GprModel::fit(data, {}), data);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "rmse ours %.4f, poly-10 %.4f, gpr %.4f",
                  ours, poly, gpr);
    detail = buf;
    return ours < poly && ours < gpr;
}

bool metrics_oracles(std::string& detail) {
    // energy distance vs an independent double loop
    auto rng = make_rng(424209);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> xs, ys;
    for (int i = 0; i < 40; ++i) {
        Eigen::VectorXd x(2), y(2);
        x << gauss(rng), gauss(rng);
        y << gauss(rng) + 1.0, gauss(rng);
        xs.push_back(x);
        ys.push_back(y);
    }
    double cross = 0.0, within_x = 0.0, within_y = 0.0;
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 40; ++j) {
            cross += (xs[i] - ys[j]).norm();
            if (i != j) {
                within_x += (xs[i] - xs[j]).norm();
                within_y += (ys[i] - ys[j]).norm();
            }
        }
    }
    const double brute = 2.0 * cross / 1600.0 - within_x / (40.0 * 39.0) -
                         within_y / (40.0 * 39.0);
    if (std::abs(metrics::energy_distance(xs, ys) - brute) >= 1e-12) {
        detail = "energy distance mismatch";
        return false;
    }

    // standard normal at its mode: nll = 0.5 * log(2 pi)
    CurveModel unit([](double) { return Eigen::VectorXd::Zero(1).eval(); },
                    linalg::SpdMatrix::identity(1));
    datasets::Dataset at_mode;
    at_mode.xs = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0);
    at_mode.ys = Eigen::MatrixXd::Zero(5, 1);
    const double want_nll = 0.5 * std::log(2.0 * std::numbers::pi);
    if (std::abs(metrics::nll(unit, at_mode) - want_nll) >= 1e-12) {
        detail = "nll at mode mismatch";
        return false;
    }

    // straight line has no curvature
    CurveModel line(
        [](double t) {
            Eigen::VectorXd y(2);
            y << 2.0 * t - 1.0, 0.5 * t;
            return y;
        },
        linalg::SpdMatrix::identity(2));
    if (metrics::sri(line, 1000) >= 1e-10) {
        detail = "sri of a line not ~0";
        return false;
    }

    // (t^2, 0) has integral of ||y''||^2 equal to 4
    CurveModel parabola(
        [](double t) {
            Eigen::VectorXd y(2);
            y << t * t, 0.0;
            return y;
        },
        linalg::SpdMatrix::identity(2));
    const double s = metrics::sri(parabola, 1000);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "sri(t^2) = %.4f", s);
    detail = buf;
    return std::abs(s - 4.0) < 0.04;
}

bool determinism(std::string& detail) {
    const std::string dir = "/tmp/wassbern_acceptance";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) {
        detail = "mkdir failed";
        return false;
    }

    datasets::GeneratorSpec spec;
    spec.family = datasets::Family::spiral;
    spec.n_points = 150;
    spec.seed = 9;
    for (int run = 0; run < 2; ++run) {
        const auto data = datasets::generate(spec);
        datasets::save_csv(data, dir + "/d" + std::to_string(run) + ".csv");
    }
    if (slurp(dir + "/d0.csv") != slurp(dir + "/d1.csv")) {
        detail = "dataset CSVs differ";
        return false;
    }

    const auto data = datasets::generate(spec);
    ModelConfig mc;
    mc.degree = 5;
    TrainConfig tc;
    tc.epochs = 60;
    tc.seed = 9;
    std::string model_json[2], report_json[2];
    for (int run = 0; run < 2; ++run) {
        const auto result = training::train(data, mc, tc);
        model_json[run] = result.model.to_json();
        metrics::ReportConfig rc;
        rc.seed = 9;
        report_json[run] =
            metrics::compute_report(result.model, data, rc, "model").to_json();
    }
    if (model_json[0] != model_json[1]) {
        detail = "model JSONs differ";
        return false;
    }
    if (report_json[0] != report_json[1]) {
        detail = "metric reports differ";
        return false;
    }
    return true;
}

}  // namespace

int main() {
    run_criterion("closed-form W2 oracle suite", 1.0, w2_closed_form_oracles);
    run_criterion("isotropic-target equivalence", 1.0, isotropic_equivalence);
    run_criterion("bernstein basis suite", 30.0, bernstein_suite);
    run_criterion("gradient vs finite differences", 30.0, gradient_oracle);
    run_criterion("predicted covariances stay PSD", 120.0, psd_safety);
    run_criterion("trainer sanity on a noiseless line", 30.0, trainer_sanity);
    run_criterion("ellipse benchmark", 300.0, ellipse_benchmark);
    run_criterion("lissajous ordering vs baselines", 600.0, lissajous_ordering);
    run_criterion("metrics oracles", 30.0, metrics_oracles);
    run_criterion("seeded determinism", 60.0, determinism);

    if (g_failed == 0) {
        std::cout << "acceptance: all criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failed << " criterion(s) failed\n";
    return 1;
}
