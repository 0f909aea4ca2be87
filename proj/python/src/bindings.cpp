#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "compclass/allocation.hpp"
#include "compclass/classifier.hpp"
#include "compclass/error_analysis.hpp"
#include "compclass/io.hpp"
#include "compclass/kernel_design.hpp"
#include "compclass/simulation.hpp"

namespace py = pybind11;
using namespace compclass;

namespace {

SourceModel synthetic(int n, int classes, int r, std::uint64_t seed, double low, double high) {
    Rng rng(seed);
    return make_synthetic_model(n, classes, r, EigenSpectrum::uniform(low, high), rng);
}

py::dict report_dict(const ExponentReport& r) {
    py::list pairs;
    for (const auto& g : r.pairs) {
        py::dict d;
        d["pair"] = py::make_tuple(g.first, g.second);
        d["ranks"] = py::make_tuple(g.rank_first, g.rank_second, g.rank_joint);
        d["d"] = g.exponent();
        pairs.append(d);
    }
    py::dict out;
    out["d"] = r.exponent;
    out["g"] = r.constant;
    out["minimizing_pairs"] = r.minimizing_pairs;
    out["pairs"] = pairs;
    return out;
}

py::dict sweep_dict(const SweepResult& s) {
    py::dict out;
    std::vector<double> axis, pe, se, bound, d;
    for (const auto& p : s.points) {
        axis.push_back(p.axis);
        pe.push_back(p.pe);
        se.push_back(p.se);
        bound.push_back(p.bound);
        d.push_back(p.exponent);
    }
    out["axis"] = axis;
    out["pe"] = pe;
    out["se"] = se;
    out["bound"] = bound;
    out["d"] = d;
    out["trials"] = s.trials;
    return out;
}

} // namespace

PYBIND11_MODULE(_compclass, m) {
    m.doc() = "Compressive classification of low-rank Gaussian mixtures";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InfeasibleDesign>(m, "InfeasibleDesign", PyExc_RuntimeError);

    py::class_<SourceModel>(m, "SourceModel")
        .def(py::init<std::vector<double>, std::vector<Matrix>>(), py::arg("priors"), py::arg("covariances"))
        .def_property_readonly("classes", &SourceModel::classes)
        .def_property_readonly("dimension", &SourceModel::ambient_dim)
        .def_property_readonly("priors", &SourceModel::priors)
        .def_property_readonly("ranks", &SourceModel::ranks)
        .def("covariance", &SourceModel::covariance, py::arg("cls"))
        .def("to_text", [](const SourceModel& s) {
            std::ostringstream out;
            write_model(out, s, Provenance{});
            return out.str();
        })
        .def_static("from_text", [](const std::string& text) {
            std::istringstream in(text);
            return read_model(in);
        });

    py::class_<MeasurementKernel>(m, "MeasurementKernel")
        .def_readonly("matrix", &MeasurementKernel::matrix)
        .def_readonly("seed", &MeasurementKernel::seed)
        .def_property_readonly("design", [](const MeasurementKernel& k) { return std::string(to_string(k.tag)); })
        .def_property_readonly("measurements", &MeasurementKernel::measurements);

    m.def("synthetic_model", &synthetic, py::arg("dim"), py::arg("classes"), py::arg("rank"), py::arg("seed"),
          py::arg("eig_low") = 0.5, py::arg("eig_high") = 1.5);
    m.def("random_kernel", &random_kernel, py::arg("m"), py::arg("dim"), py::arg("seed"));
    m.def("design_single_measurement", [](const SourceModel& s, std::uint64_t seed) {
        return design_single_measurement(s, seed);
    }, py::arg("model"), py::arg("seed"));
    m.def("design_two_class", [](const SourceModel& s, double d0, std::uint64_t seed) {
        return design_two_class(s, d0, seed);
    }, py::arg("model"), py::arg("d0"), py::arg("seed"));
    m.def("design_one_vs_all", [](const SourceModel& s, int count, std::uint64_t seed) {
        return design_one_vs_all(s, count, seed);
    }, py::arg("model"), py::arg("m"), py::arg("seed"));
    m.def("design_from_allocation", [](const SourceModel& s, const std::vector<int>& counts, std::uint64_t seed) {
        return design_from_allocation(s, counts, seed);
    }, py::arg("model"), py::arg("counts"), py::arg("seed"));

    m.def("solve_allocation", [](int classes, int dim, int rank, double d0) {
        const auto a = solve_measurement_allocation({classes, dim, rank, d0});
        return py::make_tuple(a.total, a.per_class);
    }, py::arg("classes"), py::arg("dim"), py::arg("rank"), py::arg("d0") = 0.0);

    m.def("pairwise_exponent", [](const Matrix& k, const Matrix& a, const Matrix& b) {
        return pairwise_exponent(k, a, b);
    }, py::arg("kernel"), py::arg("cov_i"), py::arg("cov_j"));
    m.def("union_bound", [](const SourceModel& s, const Matrix& k, double sigma2) {
        return union_bhattacharyya_bound(s, k, sigma2).value;
    }, py::arg("model"), py::arg("kernel"), py::arg("sigma2"));
    m.def("exponent_report", [](const SourceModel& s, const Matrix& k) {
        return report_dict(exponent_report(s, k));
    }, py::arg("model"), py::arg("kernel"));

    m.def("noise_db_to_variance", &noise_db_to_variance, py::arg("db"));
    m.def("estimate_pe", [](const SourceModel& s, const Matrix& k, double sigma2, long trials, std::uint64_t seed,
                            int threads) {
        const auto e = estimate_pe(s, k, sigma2, trials, seed, threads);
        return py::make_tuple(e.pe, e.se);
    }, py::arg("model"), py::arg("kernel"), py::arg("sigma2"), py::arg("trials"), py::arg("seed"),
       py::arg("threads") = 1);
    m.def("sweep_noise", [](const SourceModel& s, const Matrix& k, const std::vector<double>& db, long trials,
                            std::uint64_t seed, int threads) {
        return sweep_dict(sweep_noise(s, k, db, trials, seed, threads));
    }, py::arg("model"), py::arg("kernel"), py::arg("noise_db"), py::arg("trials"), py::arg("seed"),
       py::arg("threads") = 1);
    m.def("transition", [](const SourceModel& s, const std::string& design, int max_m, std::uint64_t seed) {
        const auto t = find_transition(s, parse_design_tag(design), max_m, TransitionCriterion::exponent_positive(),
                                       1e-6, 0, seed);
        return t.found ? py::object(py::int_(t.measurements)) : py::object(py::none());
    }, py::arg("model"), py::arg("design"), py::arg("max_m"), py::arg("seed"));

    py::class_<MapClassifier>(m, "MapClassifier")
        .def(py::init([](const SourceModel& s, const Matrix& k, double sigma2) {
            return MapClassifier(s, k, sigma2);
        }), py::arg("model"), py::arg("kernel"), py::arg("sigma2"))
        .def("classify", &MapClassifier::classify, py::arg("y"))
        .def("log_likelihood", &MapClassifier::log_likelihood, py::arg("y"), py::arg("cls"));
}
