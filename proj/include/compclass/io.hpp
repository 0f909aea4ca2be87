#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "compclass/kernel_design.hpp"
#include "compclass/simulation.hpp"
#include "compclass/source_model.hpp"

namespace compclass {

// Stamped into every file the CLI writes.
struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
};

// Shortest text that round-trips: 17 significant digits.
std::string format_real(double value);

// Plain-text model file:
//   # compclass source-model
//   # config_hash=<hex> seed=<u64>
//   classes <L>
//   dimension <N>
//   priors p_1 ... p_L
//   covariance 1
//   <N rows of N reals>
//   ...
void write_model(std::ostream& out, const SourceModel& model, const Provenance& prov);
SourceModel read_model(std::istream& in, RankTolerance tol = {});

// Plain-text kernel file: design, seed, rows, cols, then the matrix rows.
void write_kernel(std::ostream& out, const MeasurementKernel& kernel, const Provenance& prov);
MeasurementKernel read_kernel(std::istream& in);

// CSV with header `label,f1,...,fN`; labels 1..L in the file, 0-based in
// memory. Lines starting with '#' are comments. Errors name the line.
LabeledDataset read_dataset(std::istream& in);
void write_dataset(std::ostream& out, const LabeledDataset& data, const Provenance* prov = nullptr);

struct DatasetSplit {
    LabeledDataset train;
    LabeledDataset test;
};

// Per-class seeded shuffle; per-class training counts are the
// largest-remainder apportionment of round(fraction * n), so each class is
// within one sample of proportional and the total is exact.
DatasetSplit stratified_split(const LabeledDataset& data, int classes, double train_fraction, std::uint64_t seed);

// `axis,pe,se,bound,d` preceded by a `# config_hash=... seed=...` comment.
void write_sweep_csv(std::ostream& out, const SweepResult& result, const Provenance& prov);

SourceModel load_model(const std::string& path, RankTolerance tol = {});
MeasurementKernel load_kernel(const std::string& path);
LabeledDataset load_dataset(const std::string& path);

} // namespace compclass
