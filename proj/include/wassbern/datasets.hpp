#ifndef WASSBERN_DATASETS_HPP
#define WASSBERN_DATASETS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wassbern/errors.hpp"

namespace wassbern::datasets {

struct Dataset {
    Eigen::VectorXd xs;   // strictly increasing for generated data
    Eigen::MatrixXd ys;   // n x d
    std::string name;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    long n() const { return xs.size(); }
    int dim() const { return static_cast<int>(ys.cols()); }
};

enum class Family { spiral, ellipse, figure_eight, lissajous, torus_knot };

Family family_from_string(const std::string& name);
std::string family_to_string(Family family);
std::vector<std::string> family_names();

struct GeneratorSpec {
    Family family = Family::ellipse;
    long n_points = 400;
    double noise_sigma = 0.03;
    std::uint64_t seed = 0;
};

// Clean parametric value of a family at curve parameter s in [0, 1].
Eigen::VectorXd curve_point(Family family, double s);
int family_dim(Family family);

// n equally spaced xs on [0, 1]; ys = curve + seeded isotropic Gaussian noise.
Dataset generate(const GeneratorSpec& spec);

// CSV with header `x,y1,...,yd`, 17 significant digits; lossless round trip.
void save_csv(const Dataset& ds, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace wassbern::datasets

#endif
