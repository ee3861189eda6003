#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wassbern/baselines.hpp"
#include "wassbern/bernstein.hpp"
#include "wassbern/datasets.hpp"
#include "wassbern/linalg.hpp"
#include "wassbern/metrics.hpp"
#include "wassbern/model.hpp"
#include "wassbern/training.hpp"

namespace py = pybind11;
using namespace wassbern;

namespace {

datasets::Dataset make_dataset(const Eigen::VectorXd& xs,
                               const Eigen::MatrixXd& ys,
                               const std::string& name) {
    if (xs.size() != ys.rows()) {
        throw DimMismatch("xs length must match ys rows");
    }
    datasets::Dataset ds;
    ds.xs = xs;
    ds.ys = ys;
    ds.name = name;
    return ds;
}

py::dict report_to_dict(const metrics::MetricsReport& rep) {
    py::dict d;
    d["w2_bar"] = rep.w2_bar;
    d["energy_distance"] = rep.energy_distance;
    d["nll"] = rep.nll;
    d["rmse"] = rep.rmse;
    d["sri"] = rep.sri;
    d["model"] = rep.model_name;
    d["dataset"] = rep.dataset_name;
    return d;
}

}  // namespace

PYBIND11_MODULE(_wassbern, m) {
    m.doc() = "Wasserstein regression over Bernstein-parameterized Gaussian "
              "mixture trajectories";

    py::register_exception<Error>(m, "WassbernError");

    // linalg
    m.def(
        "gaussian_w2_sq",
        [](const Eigen::VectorXd& mu1, const Eigen::MatrixXd& s1,
           const Eigen::VectorXd& mu2, const Eigen::MatrixXd& s2) {
            return linalg::gaussian_w2_sq(mu1, linalg::SpdMatrix(s1), mu2,
                                          linalg::SpdMatrix(s2));
        },
        py::arg("mu1"), py::arg("cov1"), py::arg("mu2"), py::arg("cov2"),
        "Closed-form squared W2 distance between two Gaussians");
    m.def(
        "gaussian_w2_sq_isotropic_target",
        [](const Eigen::VectorXd& mu, const Eigen::MatrixXd& s,
           const Eigen::VectorXd& y, double eps) {
            return linalg::gaussian_w2_sq_isotropic_target(
                mu, linalg::SpdMatrix(s), y, eps);
        },
        py::arg("mu"), py::arg("cov"), py::arg("y"), py::arg("eps"));
    m.def(
        "psd_sqrt",
        [](const Eigen::MatrixXd& a) {
            return linalg::psd_sqrt(linalg::SpdMatrix(a)).entries();
        },
        py::arg("a"), "Symmetric positive square root");

    // bernstein
    m.def("bernstein_basis", &bernstein::basis_eval, py::arg("degree"),
          py::arg("t"), "Degree-N Bernstein basis weights at t");

    // datasets
    m.def(
        "generate",
        [](const std::string& family, long n, double noise,
           std::uint64_t seed) {
            datasets::GeneratorSpec spec;
            spec.family = datasets::family_from_string(family);
            spec.n_points = n;
            spec.noise_sigma = noise;
            spec.seed = seed;
            datasets::Dataset ds = datasets::generate(spec);
            return py::make_tuple(ds.xs, ds.ys);
        },
        py::arg("family"), py::arg("n") = 400, py::arg("noise") = 0.03,
        py::arg("seed") = 0,
        "Generate a synthetic trajectory dataset; returns (xs, ys)");
    m.def("dataset_families", &datasets::family_names);

    // predictive models
    py::class_<GaussianMixtureAt>(m, "GaussianMixtureAt")
        .def_readonly("weights", &GaussianMixtureAt::weights)
        .def_property_readonly(
            "means",
            [](const GaussianMixtureAt& g) { return g.means; })
        .def_property_readonly(
            "covs",
            [](const GaussianMixtureAt& g) {
                std::vector<Eigen::MatrixXd> out;
                for (const auto& c : g.covs) out.push_back(c.entries());
                return out;
            })
        .def("mean", &GaussianMixtureAt::mean);

    py::class_<PredictiveModel>(m, "PredictiveModel")
        .def("dim", &PredictiveModel::dim)
        .def("predict", &PredictiveModel::predict, py::arg("t"))
        .def("mean", &PredictiveModel::mean, py::arg("t"));

    py::class_<model::MixtureModel, PredictiveModel>(m, "MixtureModel")
        .def_property_readonly("degree", &model::MixtureModel::degree)
        .def_property_readonly("components",
                               &model::MixtureModel::components_count)
        .def("weights", &model::MixtureModel::weights)
        .def("flatten_params", &model::MixtureModel::flatten_params)
        .def("mean_trajectory", &model::MixtureModel::mean_trajectory,
             py::arg("ts"))
        .def("to_json", &model::MixtureModel::to_json)
        .def_static("from_json", &model::MixtureModel::from_json)
        .def("save", &model::MixtureModel::save, py::arg("path"))
        .def_static("load", &model::MixtureModel::load, py::arg("path"));

    py::class_<baselines::PolyModel, PredictiveModel>(m, "PolyModel")
        .def_static(
            "fit",
            [](const Eigen::VectorXd& xs, const Eigen::MatrixXd& ys,
               int degree) {
                return baselines::PolyModel::fit(make_dataset(xs, ys, "data"),
                                                 degree);
            },
            py::arg("xs"), py::arg("ys"), py::arg("degree") = 10)
        .def("to_json", &baselines::PolyModel::to_json)
        .def_static("from_json", &baselines::PolyModel::from_json);

    py::class_<baselines::GprModel, PredictiveModel>(m, "GprModel")
        .def_static(
            "fit",
            [](const Eigen::VectorXd& xs, const Eigen::MatrixXd& ys,
               double lengthscale, double signal_var, double noise_var) {
                return baselines::GprModel::fit(
                    make_dataset(xs, ys, "data"),
                    {lengthscale, signal_var, noise_var});
            },
            py::arg("xs"), py::arg("ys"), py::arg("lengthscale") = 0.1,
            py::arg("signal_var") = 1.0, py::arg("noise_var") = 1e-3)
        .def("to_json", &baselines::GprModel::to_json)
        .def_static("from_json", &baselines::GprModel::from_json);

    // training
    m.def(
        "train",
        [](const Eigen::VectorXd& xs, const Eigen::MatrixXd& ys, int degree,
           int components, double jitter, long epochs, long batch, double lr,
           double eps, double l2_lambda, std::uint64_t seed,
           bool freeze_weights) {
            datasets::Dataset ds = make_dataset(xs, ys, "data");
            model::ModelConfig mc;
            mc.degree = degree;
            mc.components = components;
            mc.dim = ds.dim();
            mc.jitter = jitter;
            training::TrainConfig tc;
            tc.epochs = epochs;
            tc.batch_size = batch;
            tc.learning_rate = lr;
            tc.target_eps = eps;
            tc.l2_lambda = l2_lambda;
            tc.seed = seed;
            tc.freeze_weights = freeze_weights;
            auto result = training::train(ds, mc, tc);
            return py::make_tuple(std::move(result.model),
                                  result.loss_history);
        },
        py::arg("xs"), py::arg("ys"), py::arg("degree") = 8,
        py::arg("components") = 1, py::arg("jitter") = 1e-4,
        py::arg("epochs") = 2000, py::arg("batch") = 32, py::arg("lr") = 5e-3,
        py::arg("eps") = 1e-3, py::arg("l2_lambda") = 1e-5, py::arg("seed") = 0,
        py::arg("freeze_weights") = false,
        "Train the mixture model; returns (model, per-epoch loss history)");

    // metrics
    m.def(
        "evaluate",
        [](const PredictiveModel& model, const Eigen::VectorXd& xs,
           const Eigen::MatrixXd& ys, double eps, std::uint64_t seed,
           long sri_grid) {
            datasets::Dataset ds = make_dataset(xs, ys, "data");
            metrics::ReportConfig rc{eps, seed, sri_grid};
            return report_to_dict(
                metrics::compute_report(model, ds, rc, "model"));
        },
        py::arg("model"), py::arg("xs"), py::arg("ys"), py::arg("eps") = 1e-3,
        py::arg("seed") = 0, py::arg("sri_grid") = 1000,
        "Five-metric evaluation report as a dict");
    m.def(
        "energy_distance",
        [](const std::vector<Eigen::VectorXd>& a,
           const std::vector<Eigen::VectorXd>& b) {
            return metrics::energy_distance(a, b);
        },
        py::arg("samples_a"), py::arg("samples_b"));
}
