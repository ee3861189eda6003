#include "wassbern/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "wassbern/rng.hpp"

namespace wassbern::datasets {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Family family_from_string(const std::string& name) {
    if (name == "spiral") return Family::spiral;
    if (name == "ellipse") return Family::ellipse;
    if (name == "figure_eight") return Family::figure_eight;
    if (name == "lissajous") return Family::lissajous;
    if (name == "torus_knot") return Family::torus_knot;
    throw ConfigError("unknown dataset family '" + name +
                      "'; valid: spiral, ellipse, figure_eight, lissajous, "
                      "torus_knot");
}

std::string family_to_string(Family family) {
    switch (family) {
        case Family::spiral: return "spiral";
        case Family::ellipse: return "ellipse";
        case Family::figure_eight: return "figure_eight";
        case Family::lissajous: return "lissajous";
        case Family::torus_knot: return "torus_knot";
    }
    throw ConfigError("invalid family enum value");
}

std::vector<std::string> family_names() {
    return {"spiral", "ellipse", "figure_eight", "lissajous", "torus_knot"};
}

int family_dim(Family family) {
    return family == Family::torus_knot ? 3 : 2;
}

Eigen::VectorXd curve_point(Family family, double s) {
    Eigen::VectorXd y(family_dim(family));
    switch (family) {
        case Family::spiral: {
            // two full turns with radius growing 0.2 -> 1.0
            const double r = 0.2 + 0.8 * s;
            const double phi = 2.0 * kTwoPi * s;
            y << r * std::cos(phi), r * std::sin(phi);
            break;
        }
        case Family::ellipse: {
            const double phi = kTwoPi * s;
            y << std::cos(phi), 0.5 * std::sin(phi);
            break;
        }
        case Family::figure_eight: {
            // Gerono lemniscate; s=0 and s=0.5 both hit the crossing (0,0)
            const double phi = kTwoPi * s;
            y << std::sin(phi), std::sin(phi) * std::cos(phi);
            break;
        }
        case Family::lissajous: {
            const double phi = kTwoPi * s;
            y << std::sin(3.0 * phi + std::numbers::pi / 2.0),
                std::sin(2.0 * phi);
            break;
        }
        case Family::torus_knot: {
            const double p = 2.0, q = 3.0, big_r = 1.0, small_r = 0.35;
            const double phi = kTwoPi * s;
            const double ring = big_r + small_r * std::cos(q * phi);
            y << ring * std::cos(p * phi), ring * std::sin(p * phi),
                small_r * std::sin(q * phi);
            break;
        }
    }
    return y;
}

Dataset generate(const GeneratorSpec& spec) {
    if (spec.n_points < 2) {
        throw ConfigError("n_points must be >= 2");
    }
    if (spec.noise_sigma < 0.0) {
        throw ConfigError("noise_sigma must be nonnegative");
    }
    const long n = spec.n_points;
    const int d = family_dim(spec.family);

    Dataset ds;
    ds.name = family_to_string(spec.family);
    ds.noise_sigma = spec.noise_sigma;
    ds.seed = spec.seed;
    ds.xs.resize(n);
    ds.ys.resize(n, d);

    auto rng = make_rng(spec.seed, /*stream=*/1);
    std::normal_distribution<double> noise(0.0, 1.0);

    for (long i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        ds.xs(i) = s;
        Eigen::VectorXd y = curve_point(spec.family, s);
        for (int j = 0; j < d; ++j) {
            ds.ys(i, j) = y(j) + spec.noise_sigma * noise(rng);
        }
    }
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << "x";
    for (int j = 0; j < ds.dim(); ++j) {
        out << ",y" << (j + 1);
    }
    out << "\n";
    char buf[64];
    for (long i = 0; i < ds.n(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", ds.xs(i));
        out << buf;
        for (int j = 0; j < ds.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.ys(i, j));
            out << "," << buf;
        }
        out << "\n";
    }
    if (!out) {
        throw ConfigError("write to '" + path + "' failed");
    }
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path + "' for reading");
    }
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) {
        throw EmptyData("empty CSV file '" + path + "'");
    }
    ++line_no;
    long cols = 1 + static_cast<long>(std::count(line.begin(), line.end(), ','));
    if (cols < 2) {
        throw ParseError("CSV header needs at least x and one y column", line_no);
    }
    const int d = static_cast<int>(cols - 1);

    std::vector<double> xs;
    std::vector<double> ys;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) {
            try {
                size_t pos = 0;
                double v = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                vals.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("non-numeric cell '" + cell + "'", line_no);
            }
        }
        if (static_cast<long>(vals.size()) != cols) {
            throw ParseError("expected " + std::to_string(cols) +
                                 " columns, got " + std::to_string(vals.size()),
                             line_no);
        }
        xs.push_back(vals[0]);
        ys.insert(ys.end(), vals.begin() + 1, vals.end());
    }
    if (xs.empty()) {
        throw EmptyData("CSV file '" + path + "' has no data rows");
    }

    Dataset ds;
    ds.name = path;
    const long n = static_cast<long>(xs.size());
    ds.xs = Eigen::Map<Eigen::VectorXd>(xs.data(), n);
    ds.ys.resize(n, d);
    for (long i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            ds.ys(i, j) = ys[static_cast<size_t>(i * d + j)];
        }
    }
    return ds;
}

}  // namespace wassbern::datasets
