#include "wassbern/bernstein.hpp"

#include <cmath>
#include <cstdint>

namespace wassbern::bernstein {

namespace {

// Pascal row, exact integer arithmetic (fits uint64 for N <= 60).
std::vector<std::uint64_t> binomial_row(int n) {
    std::vector<std::uint64_t> row(static_cast<size_t>(n) + 1, 1);
    for (int i = 1; i <= n; ++i) {
        for (int j = i - 1; j >= 1; --j) {
            row[j] += row[j - 1];
        }
    }
    return row;
}

}  // namespace

Eigen::VectorXd basis_eval(int degree, double t) {
    if (degree < 0 || degree > kMaxDegree) {
        throw ConfigError("Bernstein degree must be in [0, 60]");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("Bernstein parameter t must lie in [0, 1]");
    }
    const auto binom = binomial_row(degree);
    const double u = 1.0 - t;
    Eigen::VectorXd w(degree + 1);
    // powers accumulated incrementally; endpoints come out exact
    double tp = 1.0;
    for (int i = 0; i <= degree; ++i) {
        w(i) = static_cast<double>(binom[static_cast<size_t>(i)]) * tp *
               std::pow(u, degree - i);
        tp *= t;
    }
    return w;
}

Eigen::VectorXd mean_at(const std::vector<Eigen::VectorXd>& controls, double t) {
    if (controls.empty()) {
        throw EmptyData("mean_at: no control points");
    }
    const int n = static_cast<int>(controls.size()) - 1;
    const auto d = controls.front().size();
    Eigen::VectorXd w = basis_eval(n, t);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
    for (int i = 0; i <= n; ++i) {
        if (controls[static_cast<size_t>(i)].size() != d) {
            throw DimMismatch("mean_at: inconsistent control dimensions");
        }
        out += w(i) * controls[static_cast<size_t>(i)];
    }
    return out;
}

linalg::SpdMatrix cov_at(const std::vector<linalg::SpdMatrix>& controls,
                         double t) {
    if (controls.empty()) {
        throw EmptyData("cov_at: no control matrices");
    }
    const int n = static_cast<int>(controls.size()) - 1;
    const int d = controls.front().dim();
    Eigen::VectorXd w = basis_eval(n, t);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i <= n; ++i) {
        if (controls[static_cast<size_t>(i)].dim() != d) {
            throw DimMismatch("cov_at: inconsistent control dimensions");
        }
        out += w(i) * controls[static_cast<size_t>(i)].entries();
    }
    return linalg::SpdMatrix(out);
}

}  // namespace wassbern::bernstein
