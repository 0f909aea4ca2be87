#include "compclass/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "compclass/io.hpp"

namespace compclass {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(std::string(where) + ": missing key '" + key + "'");
    return j.at(key);
}

template <class T>
T get(const json& j, const char* key, const char* where) {
    const auto& v = need(j, key, where);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string(where) + ": key '" + key + "' has the wrong type");
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const char* where) {
    return j.contains(key) ? get<T>(j, key, where) : fallback;
}

// Seeds must be written out; a negative or fractional number is rejected.
std::uint64_t get_seed(const json& j, const char* key, const char* where) {
    const auto& v = need(j, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ValidationError(std::string(where) + ": '" + key + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

EigenSpectrum parse_spectrum(const json& j) {
    const auto kind = get<std::string>(j, "kind", "spectrum");
    EigenSpectrum s;
    if (kind == "fixed") {
        s = EigenSpectrum::fixed(get<double>(j, "value", "spectrum"));
    } else if (kind == "uniform") {
        s = EigenSpectrum::uniform(get<double>(j, "low", "spectrum"), get<double>(j, "high", "spectrum"));
    } else {
        throw ValidationError("spectrum: kind must be 'fixed' or 'uniform'");
    }
    s.validate();
    return s;
}

json spectrum_json(const EigenSpectrum& s) {
    if (s.kind == EigenSpectrum::Kind::fixed) return {{"kind", "fixed"}, {"value", s.low}};
    return {{"kind", "uniform"}, {"low", s.low}, {"high", s.high}};
}

ModelSource parse_model(const json& j) {
    if (!j.is_object() || j.size() != 1)
        throw ValidationError("model: exactly one of 'synthetic', 'dataset', 'file' is required");
    if (j.contains("synthetic")) {
        const auto& s = j.at("synthetic");
        SyntheticSource out;
        out.dim = get<int>(s, "dim", "model.synthetic");
        out.classes = get<int>(s, "classes", "model.synthetic");
        out.rank = get<int>(s, "rank", "model.synthetic");
        out.seed = get_seed(s, "seed", "model.synthetic");
        out.spectrum = s.contains("spectrum") ? parse_spectrum(s.at("spectrum")) : EigenSpectrum{};
        if (out.classes < 1) throw ValidationError("model.synthetic: classes must be >= 1");
        if (out.rank < 1 || out.rank >= out.dim)
            throw ValidationError("model.synthetic: rank must satisfy 1 <= rank < dim");
        return out;
    }
    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        DatasetSource out;
        out.path = get<std::string>(d, "path", "model.dataset");
        out.classes = get<int>(d, "classes", "model.dataset");
        out.split = get<double>(d, "split", "model.dataset");
        out.split_seed = get_seed(d, "split_seed", "model.dataset");
        out.ridge = get_or<double>(d, "ridge", 0.0, "model.dataset");
        if (out.classes < 1) throw ValidationError("model.dataset: classes must be >= 1");
        if (!(out.split > 0.0 && out.split < 1.0)) throw ValidationError("model.dataset: split must lie in (0, 1)");
        if (!(out.ridge >= 0.0)) throw ValidationError("model.dataset: ridge must be >= 0");
        return out;
    }
    if (j.contains("file")) return ModelFileSource{get<std::string>(j, "file", "model")};
    throw ValidationError("model: exactly one of 'synthetic', 'dataset', 'file' is required");
}

DesignSpec parse_design(const json& j) {
    DesignSpec d;
    if (j.contains("file")) {
        d.kernel_file = get<std::string>(j, "file", "design");
        d.tag = DesignTag::custom;
        return d;
    }
    try {
        d.tag = parse_design_tag(get<std::string>(j, "kind", "design"));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("design: ") + e.what());
    }
    d.seed = get_seed(j, "seed", "design");
    d.measurements = get_or<int>(j, "m", 0, "design");
    d.d0 = get_or<double>(j, "d0", 0.0, "design");
    if (!(std::isfinite(d.d0) && d.d0 >= 0.0)) throw ValidationError("design: d0 must be finite and >= 0");
    return d;
}

json design_json(const DesignSpec& d) {
    if (d.kernel_file) return {{"file", *d.kernel_file}};
    json out = {{"kind", std::string(to_string(d.tag))}, {"seed", d.seed}};
    if (d.tag == DesignTag::random || d.tag == DesignTag::prop5) out["m"] = d.measurements;
    if (d.tag == DesignTag::prop4) out["d0"] = d.d0;
    return out;
}

} // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    ExperimentConfig c;
    c.model = parse_model(need(j, "model", "config"));
    c.design = parse_design(need(j, "design", "config"));
    c.noise_db = get<std::vector<double>>(j, "noise_db", "config");
    c.measurements = get_or<std::vector<int>>(j, "measurements", {}, "config");
    c.trials = get<long>(j, "trials", "config");
    c.seed = get_seed(j, "seed", "config");
    c.out = get_or<std::string>(j, "out", "", "config");

    if (c.noise_db.empty()) throw ValidationError("config: noise grid is empty");
    for (double db : c.noise_db)
        if (!std::isfinite(db)) throw ValidationError("config: noise levels must be finite");
    if (c.trials < 1) throw ValidationError("config: trials must be >= 1");
    if (!c.measurements.empty()) {
        if (c.noise_db.size() != 1) throw ValidationError("config: a measurement sweep takes exactly one noise level");
        for (int m : c.measurements)
            if (m < 1) throw ValidationError("config: measurement counts must be >= 1");
        if (c.design.tag != DesignTag::random && c.design.tag != DesignTag::prop5)
            throw ValidationError("config: a measurement sweep needs design kind random or prop5");
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json model = std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SyntheticSource>) {
                return {{"synthetic",
                         {{"dim", s.dim},
                          {"classes", s.classes},
                          {"rank", s.rank},
                          {"seed", s.seed},
                          {"spectrum", spectrum_json(s.spectrum)}}}};
            } else if constexpr (std::is_same_v<T, DatasetSource>) {
                return {{"dataset",
                         {{"path", s.path},
                          {"classes", s.classes},
                          {"split", s.split},
                          {"split_seed", s.split_seed},
                          {"ridge", s.ridge}}}};
            } else {
                return {{"file", s.path}};
            }
        },
        c.model);
    json out = {{"model", model},   {"design", design_json(c.design)}, {"noise_db", c.noise_db},
                {"trials", c.trials}, {"seed", c.seed},                  {"out", c.out}};
    if (!c.measurements.empty()) out["measurements"] = c.measurements;
    return out;
}

std::string config_hash(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("'" + path + "': " + e.what());
    }
}

SourceModel build_model(const ModelSource& source, RankTolerance tol) {
    return std::visit(
        [&](const auto& s) -> SourceModel {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SyntheticSource>) {
                Rng rng(s.seed);
                return make_synthetic_model(s.dim, s.classes, s.rank, s.spectrum, rng, tol);
            } else if constexpr (std::is_same_v<T, DatasetSource>) {
                const auto split = stratified_split(load_dataset(s.path), s.classes, s.split, s.split_seed);
                return fit_ml(split.train, s.classes, s.ridge, tol);
            } else {
                return load_model(s.path, tol);
            }
        },
        source);
}

MeasurementKernel build_kernel(const SourceModel& model, const DesignSpec& design, RankTolerance tol) {
    if (design.kernel_file) {
        auto k = load_kernel(*design.kernel_file);
        if (k.ambient_dim() != model.ambient_dim())
            throw ValidationError("kernel has " + std::to_string(k.ambient_dim()) + " columns, model dimension is " +
                                  std::to_string(model.ambient_dim()));
        return k;
    }
    switch (design.tag) {
    case DesignTag::prop3:
        return design_single_measurement(model, design.seed, tol);
    case DesignTag::prop4:
        return design_two_class(model, design.d0, design.seed, tol);
    case DesignTag::random:
    case DesignTag::prop5:
        if (design.measurements < 1) throw ValidationError("design: m must be >= 1");
        return make_kernel(model, design.tag, design.measurements, design.seed, tol);
    case DesignTag::custom:
        break;
    }
    throw ValidationError("design: custom kernels must come from a file");
}

} // namespace compclass
