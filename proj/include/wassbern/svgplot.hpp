#ifndef WASSBERN_SVGPLOT_HPP
#define WASSBERN_SVGPLOT_HPP

#include <string>
#include <vector>

#include "wassbern/datasets.hpp"
#include "wassbern/predictive.hpp"

namespace wassbern::svgplot {

struct PlotConfig {
    long grid = 200;       // mean-curve resolution
    long ellipse_every = 20;  // draw a 1-sigma ellipse every this many grid steps
    int width = 800;
    int height = 600;
};

// 2D: scatter + one path per component mean curve + 1-sigma covariance
// ellipses. Output is deterministic (no timestamps or ids).
void plot_2d(const PredictiveModel& model, const datasets::Dataset& data,
             int axis_x, int axis_y, const PlotConfig& cfg,
             const std::string& path);

// 3D datasets: three axis-pair projections (xy, xz, yz). Returns the paths
// written, `stem` + "_xy.svg" etc. For 2D data a single file `stem`.svg.
std::vector<std::string> plot(const PredictiveModel& model,
                              const datasets::Dataset& data,
                              const PlotConfig& cfg, const std::string& stem);

}  // namespace wassbern::svgplot

#endif
