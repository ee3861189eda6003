#include "wassbern/baselines.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "wassbern/training.hpp"

namespace wassbern::baselines {

using nlohmann::json;

namespace {

constexpr double kVarFloor = 1e-8;

Eigen::MatrixXd vandermonde(const Eigen::VectorXd& ts, int degree) {
    Eigen::MatrixXd v(ts.size(), degree + 1);
    for (long i = 0; i < ts.size(); ++i) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            v(i, j) = p;
            p *= ts(i);
        }
    }
    return v;
}

Eigen::MatrixXd se_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          const GprHyper& hyper) {
    Eigen::MatrixXd k(a.size(), b.size());
    const double inv2l2 = 1.0 / (2.0 * hyper.lengthscale * hyper.lengthscale);
    for (long i = 0; i < a.size(); ++i) {
        for (long j = 0; j < b.size(); ++j) {
            const double d = a(i) - b(j);
            k(i, j) = hyper.signal_var * std::exp(-d * d * inv2l2);
        }
    }
    return k;
}

}  // namespace

PolyModel::PolyModel(int degree, Eigen::MatrixXd coeffs,
                     Eigen::VectorXd resid_var)
    : degree_(degree),
      coeffs_(std::move(coeffs)),
      resid_var_(std::move(resid_var)) {}

PolyModel PolyModel::fit(const datasets::Dataset& data, int degree) {
    if (degree < 0) {
        throw ConfigError("poly_fit: degree must be >= 0");
    }
    if (data.n() < degree + 1) {
        throw TooFewPoints("poly_fit: need at least degree+1 points");
    }
    const Eigen::VectorXd ts = training::normalize_inputs(data.xs).ts;
    const Eigen::MatrixXd v = vandermonde(ts, degree);

    Eigen::MatrixXd coeffs(degree + 1, data.dim());
    Eigen::VectorXd resid_var(data.dim());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    for (int j = 0; j < data.dim(); ++j) {
        coeffs.col(j) = qr.solve(data.ys.col(j));
        const double sse = (v * coeffs.col(j) - data.ys.col(j)).squaredNorm();
        const long dof = data.n() - degree - 1;
        resid_var(j) = dof > 0 ? sse / static_cast<double>(dof) : 0.0;
    }
    return PolyModel(degree, std::move(coeffs), std::move(resid_var));
}

GaussianMixtureAt PolyModel::predict(double t) const {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim());
    double p = 1.0;
    for (int j = 0; j <= degree_; ++j) {
        mu += p * coeffs_.row(j).transpose();
        p *= t;
    }
    // jitter keeps a zero-residual fit usable in NLL
    Eigen::VectorXd var = resid_var_.array().max(kVarFloor);

    GaussianMixtureAt out;
    out.weights = Eigen::VectorXd::Ones(1);
    out.means.push_back(std::move(mu));
    out.covs.push_back(linalg::SpdMatrix::diagonal(var));
    return out;
}

std::string PolyModel::to_json() const {
    std::vector<double> coeffs(coeffs_.data(), coeffs_.data() + coeffs_.size());
    std::vector<double> rv(resid_var_.data(),
                           resid_var_.data() + resid_var_.size());
    json doc = {{"type", "poly"},
                {"degree", degree_},
                {"dim", dim()},
                {"coefficients", coeffs},  // column-major, dimension-major
                {"residual_variance", rv}};
    return doc.dump(2);
}

PolyModel PolyModel::from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.at("type") != "poly") {
        throw ConfigError("not a poly model JSON");
    }
    const int degree = doc.at("degree").get<int>();
    const int d = doc.at("dim").get<int>();
    auto coeffs = doc.at("coefficients").get<std::vector<double>>();
    auto rv = doc.at("residual_variance").get<std::vector<double>>();
    if (static_cast<long>(coeffs.size()) != static_cast<long>(degree + 1) * d ||
        static_cast<int>(rv.size()) != d) {
        throw DimMismatch("poly model JSON: array lengths inconsistent");
    }
    Eigen::MatrixXd c =
        Eigen::Map<Eigen::MatrixXd>(coeffs.data(), degree + 1, d);
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(rv.data(), d);
    return PolyModel(degree, std::move(c), std::move(v));
}

GprModel::GprModel(GprHyper hyper, Eigen::VectorXd train_ts,
                   Eigen::MatrixXd dual, Eigen::MatrixXd chol_lower)
    : hyper_(hyper),
      train_ts_(std::move(train_ts)),
      dual_(std::move(dual)),
      chol_lower_(std::move(chol_lower)) {}

GprModel GprModel::fit(const datasets::Dataset& data, const GprHyper& hyper) {
    if (data.n() < 2) {
        throw TooFewPoints("gpr_fit: need at least 2 points");
    }
    if (hyper.lengthscale <= 0.0 || hyper.signal_var <= 0.0 ||
        hyper.noise_var <= 0.0) {
        throw ConfigError("gpr_fit: hyperparameters must be positive");
    }
    const Eigen::VectorXd ts = training::normalize_inputs(data.xs).ts;
    Eigen::MatrixXd k = se_kernel(ts, ts, hyper);
    k.diagonal().array() += hyper.noise_var;

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("gpr_fit: kernel matrix not positive definite");
    }
    Eigen::MatrixXd dual(data.n(), data.dim());
    for (int j = 0; j < data.dim(); ++j) {
        dual.col(j) = llt.solve(data.ys.col(j));
    }
    return GprModel(hyper, ts, std::move(dual),
                    Eigen::MatrixXd(llt.matrixL()));
}

GprHyper GprModel::tune(const datasets::Dataset& data) {
    const Eigen::VectorXd ts = training::normalize_inputs(data.xs).ts;
    double best_ml = -std::numeric_limits<double>::infinity();
    GprHyper best;
    for (double ell : {0.01, 0.03, 0.1, 0.3, 1.0}) {
        for (double nv : {1e-4, 1e-3, 1e-2, 1e-1}) {
            GprHyper h{ell, 1.0, nv};
            Eigen::MatrixXd k = se_kernel(ts, ts, h);
            k.diagonal().array() += h.noise_var;
            Eigen::LLT<Eigen::MatrixXd> llt(k);
            if (llt.info() != Eigen::Success) continue;
            double log_det = 0.0;
            Eigen::MatrixXd l = llt.matrixL();
            for (long i = 0; i < l.rows(); ++i) {
                log_det += 2.0 * std::log(l(i, i));
            }
            double ml = 0.0;
            for (int j = 0; j < data.dim(); ++j) {
                const Eigen::VectorXd alpha = llt.solve(data.ys.col(j));
                ml += -0.5 * data.ys.col(j).dot(alpha) - 0.5 * log_det;
            }
            if (ml > best_ml) {
                best_ml = ml;
                best = h;
            }
        }
    }
    return best;
}

GaussianMixtureAt GprModel::predict(double t) const {
    Eigen::VectorXd ks(train_ts_.size());
    const double inv2l2 =
        1.0 / (2.0 * hyper_.lengthscale * hyper_.lengthscale);
    for (long i = 0; i < train_ts_.size(); ++i) {
        const double d = t - train_ts_(i);
        ks(i) = hyper_.signal_var * std::exp(-d * d * inv2l2);
    }
    Eigen::VectorXd mu = dual_.transpose() * ks;
    const Eigen::VectorXd v =
        chol_lower_.triangularView<Eigen::Lower>().solve(ks);
    const double var =
        std::max(hyper_.signal_var - v.squaredNorm(), 1e-12);

    GaussianMixtureAt out;
    out.weights = Eigen::VectorXd::Ones(1);
    out.means.push_back(std::move(mu));
    out.covs.push_back(linalg::SpdMatrix(
        var * Eigen::MatrixXd::Identity(dim(), dim())));
    return out;
}

std::string GprModel::to_json() const {
    std::vector<double> ts(train_ts_.data(),
                           train_ts_.data() + train_ts_.size());
    std::vector<double> dual(dual_.data(), dual_.data() + dual_.size());
    std::vector<double> chol(chol_lower_.data(),
                             chol_lower_.data() + chol_lower_.size());
    json doc = {{"type", "gpr"},
                {"lengthscale", hyper_.lengthscale},
                {"signal_var", hyper_.signal_var},
                {"noise_var", hyper_.noise_var},
                {"dim", dim()},
                {"train_ts", ts},
                {"dual", dual},
                {"chol_lower", chol}};
    return doc.dump(2);
}

GprModel GprModel::from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.at("type") != "gpr") {
        throw ConfigError("not a gpr model JSON");
    }
    GprHyper hyper;
    hyper.lengthscale = doc.at("lengthscale").get<double>();
    hyper.signal_var = doc.at("signal_var").get<double>();
    hyper.noise_var = doc.at("noise_var").get<double>();
    const int d = doc.at("dim").get<int>();
    auto ts = doc.at("train_ts").get<std::vector<double>>();
    auto dual = doc.at("dual").get<std::vector<double>>();
    auto chol = doc.at("chol_lower").get<std::vector<double>>();
    const long n = static_cast<long>(ts.size());
    if (static_cast<long>(dual.size()) != n * d ||
        static_cast<long>(chol.size()) != n * n) {
        throw DimMismatch("gpr model JSON: array lengths inconsistent");
    }
    return GprModel(hyper, Eigen::Map<Eigen::VectorXd>(ts.data(), n),
                    Eigen::Map<Eigen::MatrixXd>(dual.data(), n, d),
                    Eigen::Map<Eigen::MatrixXd>(chol.data(), n, n));
}

}  // namespace wassbern::baselines
