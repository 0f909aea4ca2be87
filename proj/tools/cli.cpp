// compclass command-line front end.
//
// Exit codes: 0 success, 2 input or validation error, 3 infeasible design.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "compclass/allocation.hpp"
#include "compclass/config.hpp"
#include "compclass/error_analysis.hpp"
#include "compclass/io.hpp"
#include "compclass/kernel_design.hpp"
#include "compclass/simulation.hpp"
#include "compclass/source_model.hpp"

using namespace compclass;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        std::istringstream cs(cell);
        T v{};
        if (!(cs >> v) || !(cs >> std::ws).eof())
            throw ValidationError(std::string(what) + ": cannot parse '" + cell + "'");
        out.push_back(v);
    }
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    return out;
}

void warn_unequal_ranks(const SourceModel& model) {
    if (model.equal_ranks()) return;
    std::cerr << "warning: class ranks differ (";
    for (int i = 0; i < model.classes(); ++i) std::cerr << (i ? "," : "") << model.rank(i);
    std::cerr << "); rank-based predictions use the modal rank " << model.class_rank() << "\n";
}

json report_json(const SourceModel& model, const MeasurementKernel& kernel) {
    const auto rep = exponent_report(model, kernel.matrix);
    json pairs = json::array();
    for (const auto& p : rep.pairs) {
        pairs.push_back({{"i", p.first + 1},
                         {"j", p.second + 1},
                         {"r_i", p.rank_first},
                         {"r_j", p.rank_second},
                         {"r_ij", p.rank_joint},
                         {"d", p.exponent()}});
    }
    json minimizing = json::array();
    for (const auto& [i, j] : rep.minimizing_pairs) minimizing.push_back({i + 1, j + 1});
    return {{"design", std::string(to_string(kernel.tag))},
            {"measurements", kernel.measurements()},
            {"pairs", pairs},
            {"d", rep.exponent},
            {"g", rep.constant},
            {"minimizing_pairs", minimizing},
            {"verdict", std::string(to_string(low_noise_behavior(model, kernel.matrix)))}};
}

// Flags shared across subcommands; unset ones stay empty.
struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<long> trials;
    std::optional<std::string> noise_db;
    std::string design;
    std::optional<int> m;
    std::optional<double> d0;
    std::string measurements;
    std::string model;
    std::string kernel;
    std::string dataset;
    std::string test_out;
    std::optional<int> classes;
    std::optional<int> dim;
    std::optional<int> rank;
    std::optional<double> split;
    std::optional<double> eig_low;
    std::optional<double> eig_high;
    std::optional<double> eig_fixed;
    double ridge = 0.0;
    std::optional<std::uint64_t> design_seed;
    int threads = 0;
};

template <class T>
T require(const std::optional<T>& v, const char* flag) {
    if (!v) throw ValidationError(std::string("missing ") + flag);
    return *v;
}

int cmd_synth_gen(const Flags& f) {
    json source;
    if (!f.config.empty()) {
        const auto cfg = read_json_file(f.config);
        if (!cfg.contains("model") || !cfg["model"].contains("synthetic"))
            throw ValidationError("config has no model.synthetic section");
        source = cfg["model"]["synthetic"];
    } else {
        source["spectrum"] = {{"kind", "uniform"}, {"low", 0.5}, {"high", 1.5}};
    }
    if (f.dim) source["dim"] = *f.dim;
    if (f.classes) source["classes"] = *f.classes;
    if (f.rank) source["rank"] = *f.rank;
    if (f.seed) source["seed"] = *f.seed;
    if (f.eig_fixed) source["spectrum"] = {{"kind", "fixed"}, {"value", *f.eig_fixed}};
    if (f.eig_low || f.eig_high)
        source["spectrum"] = {{"kind", "uniform"}, {"low", f.eig_low.value_or(0.5)}, {"high", f.eig_high.value_or(1.5)}};
    if (!source.contains("seed")) throw ValidationError("missing --seed");

    const auto parsed = std::get<SyntheticSource>(parse_config({{"model", {{"synthetic", source}}},
                                                                {"design", {{"kind", "random"}, {"seed", 0}}},
                                                                {"noise_db", {0.0}},
                                                                {"trials", 1},
                                                                {"seed", 0}})
                                                       .model);
    const json effective = {{"synth_gen", source}};
    const Provenance prov{config_hash(effective), parsed.seed};
    const auto model = build_model(parsed);

    if (f.out.empty()) throw ValidationError("missing --out");
    auto out = open_output(f.out);
    write_model(out, model, prov);

    int rmin = 0, rmax = 0;
    const auto geo = geometry_summary(model);
    for (std::size_t k = 0; k < geo.size(); ++k) {
        rmin = k ? std::min(rmin, geo[k].separation) : geo[k].separation;
        rmax = k ? std::max(rmax, geo[k].separation) : geo[k].separation;
    }
    std::cout << json{{"model", f.out},
                      {"classes", model.classes()},
                      {"dim", model.ambient_dim()},
                      {"class_rank", model.class_rank()},
                      {"separation_min", rmin},
                      {"separation_max", rmax},
                      {"config_hash", prov.config_hash},
                      {"seed", prov.seed}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_design(const Flags& f) {
    json model_src, design;
    if (!f.config.empty()) {
        const auto cfg = read_json_file(f.config);
        if (cfg.contains("model")) model_src = cfg["model"];
        if (cfg.contains("design")) design = cfg["design"];
    }
    if (!f.model.empty()) model_src = {{"file", f.model}};
    if (model_src.is_null()) throw ValidationError("missing --model");
    if (!f.design.empty()) design = {{"kind", f.design}};
    if (f.m) design["m"] = *f.m;
    if (f.d0) design["d0"] = *f.d0;
    if (f.seed) design["seed"] = *f.seed;
    if (design.is_null()) throw ValidationError("missing --design");

    const auto cfg = parse_config({{"model", model_src}, {"design", design}, {"noise_db", {0.0}}, {"trials", 1}, {"seed", 0}});
    const json effective = {{"design", {{"model", model_src}, {"design", design}}}};
    const Provenance prov{config_hash(effective), cfg.design.seed};

    const auto model = build_model(cfg.model);
    warn_unequal_ranks(model);
    const auto kernel = build_kernel(model, cfg.design);
    if (!f.out.empty()) {
        auto out = open_output(f.out);
        write_kernel(out, kernel, prov);
    }
    auto report = report_json(model, kernel);
    report["config_hash"] = prov.config_hash;
    report["seed"] = prov.seed;
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const Flags& f) {
    json cfg = f.config.empty() ? json::object() : read_json_file(f.config);
    if (!f.model.empty()) cfg["model"] = {{"file", f.model}};
    if (!f.dataset.empty()) {
        cfg["model"] = {{"dataset",
                         {{"path", f.dataset},
                          {"classes", require(f.classes, "--classes")},
                          {"split", f.split.value_or(0.5)},
                          {"split_seed", require(f.design_seed ? f.design_seed : f.seed, "--seed")},
                          {"ridge", f.ridge}}}};
    }
    if (!f.kernel.empty()) cfg["design"] = {{"file", f.kernel}};
    if (!f.design.empty()) cfg["design"] = {{"kind", f.design}};
    if (f.m) cfg["design"]["m"] = *f.m;
    if (f.d0) cfg["design"]["d0"] = *f.d0;
    if (f.design_seed) cfg["design"]["seed"] = *f.design_seed;
    if (f.seed) {
        cfg["seed"] = *f.seed;
        if (cfg.contains("design") && !cfg["design"].contains("seed") && !cfg["design"].contains("file"))
            cfg["design"]["seed"] = *f.seed;
    }
    if (f.trials) cfg["trials"] = *f.trials;
    if (f.noise_db) cfg["noise_db"] = parse_list<double>(*f.noise_db, "--noise-db");
    if (!f.measurements.empty()) cfg["measurements"] = parse_list<int>(f.measurements, "--measurements");
    if (!f.out.empty()) cfg["out"] = f.out;

    const auto config = parse_config(cfg);
    const json effective = to_json(config);
    const Provenance prov{config_hash(effective), config.seed};

    const auto model = build_model(config.model);
    warn_unequal_ranks(model);

    SweepResult result;
    json kernel_info;
    if (config.axis() == SweepAxis::noise_db) {
        const auto kernel = build_kernel(model, config.design);
        result = sweep_noise(model, kernel.matrix, config.noise_db, config.trials, config.seed, f.threads);
        kernel_info = report_json(model, kernel);
    } else {
        result = sweep_measurements(model, config.design.tag, config.measurements,
                                    noise_db_to_variance(config.noise_db.front()), config.trials, config.seed,
                                    f.threads);
        kernel_info = {{"design", std::string(to_string(config.design.tag))},
                       {"kernel_seeds", "mix_seed(seed, M)"}};
    }

    const json sidecar = {{"config", effective},
                          {"config_hash", prov.config_hash},
                          {"seed", config.seed},
                          {"trials", config.trials},
                          {"axis", std::string(to_string(result.axis))},
                          {"rows", result.points.size()},
                          {"kernel", kernel_info}};
    if (config.out.empty()) {
        write_sweep_csv(std::cout, result, prov);
    } else {
        auto out = open_output(config.out);
        write_sweep_csv(out, result, prov);
        auto side = open_output(config.out + ".json");
        side << sidecar.dump(2) << "\n";
    }
    return 0;
}

int cmd_fit(const Flags& f) {
    if (f.dataset.empty()) throw ValidationError("missing --dataset");
    if (f.out.empty()) throw ValidationError("missing --out");
    const int classes = require(f.classes, "--classes");
    const double split = require(f.split, "--split");
    const auto seed = require(f.seed, "--seed");
    const std::string test_out = f.test_out.empty() ? f.out + ".test.csv" : f.test_out;

    const json effective = {{"fit",
                             {{"dataset", f.dataset},
                              {"classes", classes},
                              {"split", split},
                              {"split_seed", seed},
                              {"ridge", f.ridge}}}};
    const Provenance prov{config_hash(effective), seed};

    const auto parts = stratified_split(load_dataset(f.dataset), classes, split, seed);
    const auto model = fit_ml(parts.train, classes, f.ridge);
    warn_unequal_ranks(model);

    auto out = open_output(f.out);
    write_model(out, model, prov);
    auto test = open_output(test_out);
    write_dataset(test, parts.test, &prov);

    std::cout << json{{"model", f.out},
                      {"test_set", test_out},
                      {"train_counts", parts.train.class_counts(classes)},
                      {"test_counts", parts.test.class_counts(classes)},
                      {"priors", model.priors()},
                      {"ranks", model.ranks()},
                      {"config_hash", prov.config_hash},
                      {"seed", seed}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_solve_ip(const Flags& f) {
    AllocationProblem problem{require(f.classes, "--classes"), require(f.dim, "--dim"), require(f.rank, "--rank"),
                              f.d0.value_or(0.0)};
    const auto sol = solve_measurement_allocation(problem);
    std::cout << json{{"classes", problem.classes},
                      {"dim", problem.ambient_dim},
                      {"rank", problem.class_rank},
                      {"d0", problem.target},
                      {"per_class", sol.per_class},
                      {"total", sol.total}}
                     .dump(2)
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressive classification of low-rank Gaussian sources"};
    app.require_subcommand(1);
    Flags f;

    auto* synth = app.add_subcommand("synth-gen", "Generate a random low-rank Gaussian source model");
    auto* design = app.add_subcommand("design", "Build a measurement kernel and report its decay exponent");
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo misclassification curve versus noise or M");
    auto* fit = app.add_subcommand("fit", "Fit a source model to a labeled dataset");
    auto* ip = app.add_subcommand("solve-ip", "Solve the measurement allocation integer program");

    for (auto* sub : {synth, design, sweep, fit, ip}) {
        sub->add_option("--config", f.config, "JSON experiment config");
        sub->add_option("--seed", f.seed, "Seed (model, design, split or Monte Carlo, by subcommand)");
        sub->add_option("--out", f.out, "Output path");
        sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    }
    for (auto* sub : {synth, ip, sweep, fit}) sub->add_option("--classes", f.classes, "Number of classes L");
    for (auto* sub : {synth, ip}) {
        sub->add_option("--dim", f.dim, "Ambient dimension N");
        sub->add_option("--rank", f.rank, "Class covariance rank");
    }
    synth->add_option("--eig-low", f.eig_low, "Lower end of the uniform eigenvalue law");
    synth->add_option("--eig-high", f.eig_high, "Upper end of the uniform eigenvalue law");
    synth->add_option("--eig-fixed", f.eig_fixed, "Use a constant nonzero eigenvalue");
    for (auto* sub : {design, sweep}) {
        sub->add_option("--model", f.model, "Model file");
        sub->add_option("--design", f.design, "random|prop3|prop4|prop5");
        sub->add_option("--m", f.m, "Number of measurements");
        sub->add_option("--d0", f.d0, "Target decay exponent");
    }
    ip->add_option("--d0", f.d0, "Target decay exponent");
    sweep->add_option("--kernel", f.kernel, "Kernel file");
    sweep->add_option("--trials", f.trials, "Monte Carlo trials per point");
    sweep->add_option("--noise-db", f.noise_db, "Comma-separated noise levels in dB");
    sweep->add_option("--measurements", f.measurements, "Comma-separated measurement counts");
    sweep->add_option("--design-seed", f.design_seed, "Kernel (or split) seed; defaults to --seed");
    for (auto* sub : {sweep, fit}) {
        sub->add_option("--dataset", f.dataset, "Labeled CSV dataset");
        sub->add_option("--split", f.split, "Training fraction in (0, 1)");
        sub->add_option("--ridge", f.ridge, "Diagonal loading added to fitted covariances");
    }
    fit->add_option("--test-out", f.test_out, "Held-out rows (default <out>.test.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*synth) return cmd_synth_gen(f);
        if (*design) return cmd_design(f);
        if (*sweep) return cmd_sweep(f);
        if (*fit) return cmd_fit(f);
        if (*ip) return cmd_solve_ip(f);
    } catch (const InfeasibleDesign& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
