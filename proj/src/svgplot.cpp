#include "wassbern/svgplot.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace wassbern::svgplot {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Mapper {
    double x_lo, x_hi, y_lo, y_hi;
    int width, height;
    static constexpr double kMargin = 40.0;

    double sx(double x) const {
        return kMargin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * kMargin);
    }
    double sy(double y) const {
        // SVG y axis points down
        return height - kMargin -
               (y - y_lo) / (y_hi - y_lo) * (height - 2 * kMargin);
    }
    double scale_x() const { return (width - 2 * kMargin) / (x_hi - x_lo); }
    double scale_y() const { return (height - 2 * kMargin) / (y_hi - y_lo); }
};

const char* kCurveColors[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                              "#17becf", "#8c564b"};

}  // namespace

void plot_2d(const PredictiveModel& model, const datasets::Dataset& data,
             int axis_x, int axis_y, const PlotConfig& cfg,
             const std::string& path) {
    if (cfg.grid < 2) {
        throw ConfigError("plot: grid must be >= 2");
    }
    const long g = cfg.grid;
    std::vector<GaussianMixtureAt> mixes;
    mixes.reserve(static_cast<size_t>(g));
    for (long j = 0; j < g; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(g - 1);
        mixes.push_back(model.predict(t));
    }
    const int n_comp = mixes.front().components();

    double x_lo = data.ys.col(axis_x).minCoeff();
    double x_hi = data.ys.col(axis_x).maxCoeff();
    double y_lo = data.ys.col(axis_y).minCoeff();
    double y_hi = data.ys.col(axis_y).maxCoeff();
    for (const auto& mix : mixes) {
        for (const auto& mu : mix.means) {
            x_lo = std::min(x_lo, mu(axis_x));
            x_hi = std::max(x_hi, mu(axis_x));
            y_lo = std::min(y_lo, mu(axis_y));
            y_hi = std::max(y_hi, mu(axis_y));
        }
    }
    const double pad_x = 0.05 * (x_hi - x_lo + 1e-12);
    const double pad_y = 0.05 * (y_hi - y_lo + 1e-12);
    Mapper map{x_lo - pad_x, x_hi + pad_x, y_lo - pad_y, y_hi + pad_y,
               cfg.width, cfg.height};

    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cfg.width
        << "\" height=\"" << cfg.height << "\" viewBox=\"0 0 " << cfg.width
        << " " << cfg.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // data scatter
    for (long i = 0; i < data.n(); ++i) {
        out << "<circle cx=\"" << num(map.sx(data.ys(i, axis_x))) << "\" cy=\""
            << num(map.sy(data.ys(i, axis_y)))
            << "\" r=\"2\" fill=\"#1f77b4\" fill-opacity=\"0.5\"/>\n";
    }

    // 1-sigma covariance ellipses
    for (int k = 0; k < n_comp; ++k) {
        const char* color = kCurveColors[k % 6];
        for (long j = 0; j < g; j += cfg.ellipse_every) {
            const auto& mix = mixes[static_cast<size_t>(j)];
            Eigen::Matrix2d cov;
            cov << mix.covs[k](axis_x, axis_x), mix.covs[k](axis_x, axis_y),
                mix.covs[k](axis_y, axis_x), mix.covs[k](axis_y, axis_y);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
            const double r1 = std::sqrt(std::max(es.eigenvalues()(1), 0.0));
            const double r2 = std::sqrt(std::max(es.eigenvalues()(0), 0.0));
            const double angle =
                std::atan2(es.eigenvectors()(1, 1), es.eigenvectors()(0, 1)) *
                180.0 / std::numbers::pi;
            const double cx = map.sx(mix.means[k](axis_x));
            const double cy = map.sy(mix.means[k](axis_y));
            out << "<ellipse cx=\"0\" cy=\"0\" rx=\""
                << num(r1 * map.scale_x()) << "\" ry=\""
                << num(r2 * map.scale_y()) << "\" fill=\"none\" stroke=\""
                << color << "\" stroke-opacity=\"0.35\" transform=\"translate("
                << num(cx) << " " << num(cy) << ") rotate(" << num(-angle)
                << ")\"/>\n";
        }
    }

    // one path per component mean curve
    for (int k = 0; k < n_comp; ++k) {
        out << "<path fill=\"none\" stroke=\"" << kCurveColors[k % 6]
            << "\" stroke-width=\"2\" d=\"";
        for (long j = 0; j < g; ++j) {
            const auto& mu = mixes[static_cast<size_t>(j)].means[k];
            out << (j == 0 ? "M" : " L") << num(map.sx(mu(axis_x))) << " "
                << num(map.sy(mu(axis_y)));
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

std::vector<std::string> plot(const PredictiveModel& model,
                              const datasets::Dataset& data,
                              const PlotConfig& cfg, const std::string& stem) {
    std::vector<std::string> written;
    if (data.dim() == 2) {
        std::string path = stem + ".svg";
        plot_2d(model, data, 0, 1, cfg, path);
        written.push_back(path);
    } else if (data.dim() == 3) {
        const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
        const char* names[] = {"_xy.svg", "_xz.svg", "_yz.svg"};
        for (int i = 0; i < 3; ++i) {
            std::string path = stem + names[i];
            plot_2d(model, data, pairs[i].first, pairs[i].second, cfg, path);
            written.push_back(path);
        }
    } else {
        throw ConfigError("plot supports 2D and 3D data only");
    }
    return written;
}

}  // namespace wassbern::svgplot
