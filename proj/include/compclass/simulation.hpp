#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "compclass/core.hpp"
#include "compclass/kernel_design.hpp"
#include "compclass/source_model.hpp"

namespace compclass {

// sigma^2 = 10^(dB / 10); -60 dB is sigma^2 = 1e-6.
double noise_db_to_variance(double db);

struct PeEstimate {
    double pe = 0.0;
    double se = 0.0; // sqrt(pe (1 - pe) / trials)
    long errors = 0;
    long trials = 0;
};

// Monte Carlo misclassification rate of the MAP classifier. Trial t draws
// from its own engine keyed by (seed, t), so the result is bit-identical for
// any `threads` (0 = hardware concurrency).
PeEstimate estimate_pe(const SourceModel& model, const Matrix& kernel, double sigma2, long trials,
                       std::uint64_t seed, int threads = 0, RankTolerance tol = {});

enum class SweepAxis { noise_db, measurements };

std::string_view to_string(SweepAxis axis);

struct SweepPoint {
    double axis = 0.0;
    double pe = 0.0;
    // Standard error; for points with no observed error this is the one-sided
    // 95% bound 3/trials instead of 0.
    double se = 0.0;
    double bound = 0.0;    // union Bhattacharyya bound
    double exponent = 0.0; // decay exponent d of the kernel used
};

struct SweepResult {
    SweepAxis axis = SweepAxis::noise_db;
    std::vector<SweepPoint> points; // ascending axis value
    long trials = 0;
    std::uint64_t seed = 0;
};

// All levels share the master seed (common random numbers across the curve).
SweepResult sweep_noise(const SourceModel& model, const Matrix& kernel, std::span<const double> noise_db, long trials,
                        std::uint64_t seed, int threads = 0, RankTolerance tol = {});

// A fresh kernel per M, seeded with mix_seed(seed, M). `design` is random or prop5.
SweepResult sweep_measurements(const SourceModel& model, DesignTag design, std::span<const int> measurement_counts,
                               double sigma2, long trials, std::uint64_t seed, int threads = 0,
                               RankTolerance tol = {});

// Least-squares decay rate: slope of -log(value) against log(1/sigma2).
double empirical_slope(std::span<const double> sigma2, std::span<const double> values);

struct TransitionCriterion {
    enum class Kind { exponent_positive, pe_below };
    Kind kind = Kind::exponent_positive;
    double threshold = 0.0; // pe_below only

    static TransitionCriterion exponent_positive() { return {}; }
    static TransitionCriterion pe_below(double threshold) { return {Kind::pe_below, threshold}; }
};

struct TransitionReport {
    bool found = false;
    int measurements = 0; // smallest M meeting the criterion, or M_max when not found
    TransitionCriterion criterion;
};

// Scans M = 1..M_max (capped at L for prop5) with the same kernel seeding as
// sweep_measurements. exponent_positive uses rank arithmetic only.
TransitionReport find_transition(const SourceModel& model, DesignTag design, int max_measurements,
                                 TransitionCriterion criterion, double sigma2, long trials, std::uint64_t seed,
                                 int threads = 0, RankTolerance tol = {});

} // namespace compclass
