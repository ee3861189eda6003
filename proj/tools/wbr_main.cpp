// wbr: generate synthetic trajectory datasets, train the Bernstein-Wasserstein
// mixture model, evaluate and compare models, and emit SVG plots.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wassbern/baselines.hpp"
#include "wassbern/datasets.hpp"
#include "wassbern/metrics.hpp"
#include "wassbern/model.hpp"
#include "wassbern/svgplot.hpp"
#include "wassbern/training.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;
using namespace wassbern;

struct Manifest {
    std::string command;
    json config;
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();

    void write(const std::string& path) const {
        json doc = {
            {"command", command},
            {"config", config},
            {"seed", seed},
            {"inputs", inputs},
            {"outputs", outputs},
            {"tool_version", kVersion},
            {"wall_ms",
             std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - start)
                 .count()},
        };
        std::ofstream out(path);
        if (!out) {
            throw ConfigError("cannot write manifest '" + path + "'");
        }
        out << doc.dump(2) << "\n";
    }
};

datasets::Dataset load_dataset(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) {
        throw ConfigError("dataset file not found: " + path);
    }
    return datasets::load_csv(path);
}

struct NamedModel {
    std::unique_ptr<PredictiveModel> model;
    std::string name;
};

// `spec` is "poly", "gpr", or a path to a model JSON file.
NamedModel resolve_model(const std::string& spec,
                         const datasets::Dataset& data, int poly_degree,
                         const baselines::GprHyper& gpr_hyper, bool tune_gpr) {
    if (spec == "poly") {
        return {std::make_unique<baselines::PolyModel>(
                    baselines::PolyModel::fit(data, poly_degree)),
                "poly-" + std::to_string(poly_degree)};
    }
    if (spec == "gpr") {
        baselines::GprHyper hyper =
            tune_gpr ? baselines::GprModel::tune(data) : gpr_hyper;
        return {std::make_unique<baselines::GprModel>(
                    baselines::GprModel::fit(data, hyper)),
                "gpr"};
    }
    std::ifstream in(spec);
    if (!in) {
        throw ConfigError("model file not found: " + spec);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json doc = json::parse(text);
    if (doc.contains("type")) {
        const std::string type = doc.at("type").get<std::string>();
        if (type == "poly") {
            return {std::make_unique<baselines::PolyModel>(
                        baselines::PolyModel::from_json(text)),
                    "poly"};
        }
        if (type == "gpr") {
            return {std::make_unique<baselines::GprModel>(
                        baselines::GprModel::from_json(text)),
                    "gpr"};
        }
        throw ConfigError("unknown model type '" + type + "' in " + spec);
    }
    return {std::make_unique<model::MixtureModel>(
                model::MixtureModel::from_json(text)),
            "wasserstein"};
}

int run(int argc, char** argv) {
    CLI::App app{"Wasserstein regression over Bernstein-parameterized "
                 "Gaussian mixture trajectories"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "root random seed")
        ->envname("WBR_SEED")
        ->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
    std::string family = "ellipse";
    datasets::GeneratorSpec gen_spec;
    std::string gen_out = "dataset.csv";
    gen->add_option("--family", family,
                    "spiral|ellipse|figure_eight|lissajous|torus_knot")
        ->capture_default_str();
    gen->add_option("--n", gen_spec.n_points, "number of points")
        ->capture_default_str();
    gen->add_option("--noise", gen_spec.noise_sigma, "noise sigma")
        ->capture_default_str();
    gen->add_option("--out,-o", gen_out, "output CSV path")
        ->capture_default_str();

    // train
    auto* train = app.add_subcommand("train", "train the mixture model");
    std::string train_data;
    std::string train_out = "model.json";
    model::ModelConfig mc;
    training::TrainConfig tc;
    train->add_option("--data", train_data, "training dataset CSV")
        ->required();
    train->add_option("--degree-bernstein", mc.degree, "Bernstein degree N")
        ->capture_default_str();
    train->add_option("--components", mc.components, "mixture size K")
        ->capture_default_str();
    train->add_option("--jitter", mc.jitter, "covariance jitter delta")
        ->capture_default_str();
    train->add_option("--eps", tc.target_eps, "target epsilon")
        ->capture_default_str();
    train->add_option("--lambda", tc.l2_lambda, "L2 coefficient")
        ->capture_default_str();
    train->add_option("--lr", tc.learning_rate, "Adam learning rate")
        ->capture_default_str();
    train->add_option("--batch", tc.batch_size, "mini-batch size")
        ->capture_default_str();
    train->add_option("--epochs", tc.epochs, "training epochs")
        ->capture_default_str();
    train->add_flag("--freeze-weights", tc.freeze_weights,
                    "keep mixture weights uniform");
    train->add_option("--out,-o", train_out, "output model JSON path")
        ->capture_default_str();

    // shared eval/compare/plot options
    std::string eval_data;
    std::vector<std::string> model_specs;
    int poly_degree = 10;
    baselines::GprHyper gpr_hyper;
    bool tune_gpr = false;
    double metric_eps = 1e-3;
    long sri_grid = 1000;
    std::string eval_out;

    auto add_model_opts = [&](CLI::App* cmd, bool many) {
        auto* opt = cmd->add_option(
            "--model", model_specs,
            "model: path to model JSON, or 'poly' / 'gpr' to fit a baseline");
        opt->required();
        if (!many) opt->expected(1);
        cmd->add_option("--degree", poly_degree,
                        "polynomial baseline degree")
            ->capture_default_str();
        cmd->add_option("--gpr-lengthscale", gpr_hyper.lengthscale, "")
            ->capture_default_str();
        cmd->add_option("--gpr-signal-var", gpr_hyper.signal_var, "")
            ->capture_default_str();
        cmd->add_option("--gpr-noise-var", gpr_hyper.noise_var, "")
            ->capture_default_str();
        cmd->add_flag("--tune-gpr", tune_gpr,
                      "grid-search GPR hyperparameters by marginal likelihood");
    };

    auto* eval = app.add_subcommand("eval", "compute the five metrics");
    eval->add_option("--data", eval_data, "dataset CSV")->required();
    add_model_opts(eval, false);
    eval->add_option("--eps", metric_eps, "W2 target epsilon")
        ->capture_default_str();
    eval->add_option("--grid", sri_grid, "SRI grid size")
        ->capture_default_str();
    eval->add_option("--out,-o", eval_out, "also append a CSV row here");

    auto* compare =
        app.add_subcommand("compare", "markdown table of models x metrics");
    std::vector<std::string> compare_data;
    compare->add_option("--data", compare_data, "dataset CSV (repeatable)")
        ->required();
    add_model_opts(compare, true);
    compare->add_option("--eps", metric_eps, "W2 target epsilon")
        ->capture_default_str();
    compare->add_option("--grid", sri_grid, "SRI grid size")
        ->capture_default_str();
    compare->add_option("--out,-o", eval_out, "write the table here");

    auto* plot = app.add_subcommand("plot", "emit SVG plot(s)");
    std::string plot_data, plot_out = "plot";
    long plot_grid = 200;
    plot->add_option("--data", plot_data, "dataset CSV")->required();
    add_model_opts(plot, false);
    plot->add_option("--grid", plot_grid, "curve resolution")
        ->capture_default_str();
    plot->add_option("--out,-o", plot_out, "output stem (files get .svg)")
        ->capture_default_str();

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();  // lets --seed appear after the subcommand
    }

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        Manifest man;
        man.command = "generate";
        gen_spec.family = datasets::family_from_string(family);
        gen_spec.seed = seed;
        datasets::Dataset ds = datasets::generate(gen_spec);
        datasets::save_csv(ds, gen_out);
        man.seed = seed;
        man.config = {{"family", family},
                      {"n", gen_spec.n_points},
                      {"noise", gen_spec.noise_sigma}};
        man.outputs = {gen_out};
        man.write(gen_out + ".manifest.json");
        std::cerr << "wrote " << gen_out << " (" << ds.n() << " rows)\n";
        return 0;
    }

    if (train->parsed()) {
        Manifest man;
        man.command = "train";
        tc.seed = seed;
        tc.validate();
        datasets::Dataset ds = load_dataset(train_data);
        mc.dim = ds.dim();
        std::vector<training::EpochLogEntry> log;
        auto result = training::train(ds, mc, tc, &log);
        result.model.save(train_out);

        const std::string log_path = train_out + ".loss.csv";
        std::ofstream log_out(log_path);
        log_out << "epoch,loss,grad_norm,wall_ms\n";
        char buf[160];
        for (const auto& e : log) {
            std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.3f\n", e.epoch,
                          e.full_loss, e.grad_norm, e.wall_ms);
            log_out << buf;
        }
        man.seed = seed;
        man.config = {{"degree_bernstein", mc.degree},
                      {"components", mc.components},
                      {"jitter", mc.jitter},
                      {"eps", tc.target_eps},
                      {"lambda", tc.l2_lambda},
                      {"lr", tc.learning_rate},
                      {"batch", tc.batch_size},
                      {"epochs", tc.epochs},
                      {"freeze_weights", tc.freeze_weights}};
        man.inputs = {train_data};
        man.outputs = {train_out, log_path};
        man.write(train_out + ".manifest.json");
        if (!result.loss_history.empty()) {
            std::cerr << "final loss " << result.loss_history.back() << "\n";
        }
        return 0;
    }

    if (eval->parsed()) {
        datasets::Dataset ds = load_dataset(eval_data);
        NamedModel nm = resolve_model(model_specs.front(), ds, poly_degree,
                                      gpr_hyper, tune_gpr);
        metrics::ReportConfig rc{metric_eps, seed, sri_grid};
        auto rep = metrics::compute_report(*nm.model, ds, rc, nm.name);
        std::cout << rep.to_json() << "\n";
        if (!eval_out.empty()) {
            const bool fresh = !std::ifstream(eval_out).good();
            std::ofstream out(eval_out, std::ios::app);
            if (fresh) out << rep.csv_header() << "\n";
            out << rep.to_csv_row() << "\n";
        }
        return 0;
    }

    if (compare->parsed()) {
        std::ostringstream table;
        table << "| Dataset | Model | W2bar | ED | NLL | RMSE | SRI |\n";
        table << "|---|---|---|---|---|---|---|\n";
        for (const auto& data_path : compare_data) {
            datasets::Dataset ds = load_dataset(data_path);
            for (const auto& spec : model_specs) {
                NamedModel nm =
                    resolve_model(spec, ds, poly_degree, gpr_hyper, tune_gpr);
                metrics::ReportConfig rc{metric_eps, seed, sri_grid};
                auto rep = metrics::compute_report(*nm.model, ds, rc, nm.name);
                char buf[256];
                std::snprintf(buf, sizeof(buf),
                              "| %s | %s | %.4f | %.4f | %.4f | %.4f | %.4f "
                              "|\n",
                              ds.name.c_str(), nm.name.c_str(), rep.w2_bar,
                              rep.energy_distance, rep.nll, rep.rmse, rep.sri);
                table << buf;
            }
        }
        if (eval_out.empty()) {
            std::cout << table.str();
        } else {
            std::ofstream out(eval_out);
            out << table.str();
        }
        return 0;
    }

    if (plot->parsed()) {
        Manifest man;
        man.command = "plot";
        datasets::Dataset ds = load_dataset(plot_data);
        NamedModel nm = resolve_model(model_specs.front(), ds, poly_degree,
                                      gpr_hyper, tune_gpr);
        svgplot::PlotConfig pc;
        pc.grid = plot_grid;
        auto written = svgplot::plot(*nm.model, ds, pc, plot_out);
        man.seed = seed;
        man.config = {{"grid", plot_grid}, {"model", model_specs.front()}};
        man.inputs = {plot_data};
        man.outputs = written;
        man.write(plot_out + ".manifest.json");
        for (const auto& p : written) std::cerr << "wrote " << p << "\n";
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EmptyData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TooFewPoints& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
