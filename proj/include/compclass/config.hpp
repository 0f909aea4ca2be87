#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "compclass/kernel_design.hpp"
#include "compclass/simulation.hpp"
#include "compclass/source_model.hpp"

namespace compclass {

struct SyntheticSource {
    int dim = 0;
    int classes = 0;
    int rank = 0;
    EigenSpectrum spectrum;
    std::uint64_t seed = 0;
};

struct DatasetSource {
    std::string path;
    int classes = 0;
    double split = 0.5; // training fraction
    std::uint64_t split_seed = 0;
    double ridge = 0.0;
};

struct ModelFileSource {
    std::string path;
};

using ModelSource = std::variant<SyntheticSource, DatasetSource, ModelFileSource>;

// Either a constructed design or a kernel file.
struct DesignSpec {
    DesignTag tag = DesignTag::prop5;
    int measurements = 0; // random, prop5
    double d0 = 0.0;      // prop4
    std::uint64_t seed = 0;
    std::optional<std::string> kernel_file;
};

// JSON layout:
// {
//   "model":  {"synthetic": {"dim", "classes", "rank", "seed", "spectrum": {"kind", "low", "high"}}}
//           | {"dataset": {"path", "classes", "split", "split_seed", "ridge"}}
//           | {"file": "<model file>"},
//   "design": {"kind": "random|prop3|prop4|prop5", "m", "d0", "seed"} | {"file": "<kernel file>"},
//   "noise_db": [..],           // one entry for a measurement sweep
//   "measurements": [..],       // optional; switches to a measurement sweep
//   "trials": n, "seed": s, "out": "<csv path>"
// }
struct ExperimentConfig {
    ModelSource model;
    DesignSpec design;
    std::vector<double> noise_db;
    std::vector<int> measurements;
    long trials = 10000;
    std::uint64_t seed = 0;
    std::string out;

    SweepAxis axis() const { return measurements.empty() ? SweepAxis::noise_db : SweepAxis::measurements; }
};

// Throws ValidationError on missing keys, wrong types or out-of-range values.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

// FNV-1a 64 of the canonical (sorted-key) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);

SourceModel build_model(const ModelSource& source, RankTolerance tol = {});
MeasurementKernel build_kernel(const SourceModel& model, const DesignSpec& design, RankTolerance tol = {});

} // namespace compclass
