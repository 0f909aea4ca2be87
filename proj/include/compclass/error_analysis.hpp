#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "compclass/core.hpp"
#include "compclass/source_model.hpp"
#include "compclass/subspace.hpp"

namespace compclass {

// Ranks and pseudo-determinants of the projected class covariances
// S_i = Phi Sigma_i Phi^T, S_j and S_ij = Phi (Sigma_i + Sigma_j) Phi^T.
// Projected ranks are counted against the scale ||Phi||^2 ||Sigma_i|| (summed
// for S_ij), so a projection that vanishes up to round-off has rank 0.
struct PairGeometry {
    int first = 0;
    int second = 0;
    int rank_first = 0;
    int rank_second = 0;
    int rank_joint = 0;
    double log_volume_first = 0.0;
    double log_volume_second = 0.0;
    double log_volume_joint = 0.0;

    double volume_first() const;
    double volume_second() const;
    double volume_joint() const;

    // (2 r_ij - r_i - r_j) / 4
    double exponent() const { return (2 * rank_joint - rank_first - rank_second) / 4.0; }
};

PairGeometry pair_geometry(const Matrix& kernel, const Matrix& cov_i, const Matrix& cov_j, RankTolerance tol = {});

double pairwise_exponent(const Matrix& kernel, const Matrix& cov_i, const Matrix& cov_j, RankTolerance tol = {});

// Bhattacharyya exponent K_ij at noise variance sigma2, evaluated through the
// eigenvalues of S_i, S_j, S_ij so that the (sigma2)^(r_i + r_j - 2 r_ij)
// factor is handled in the log domain. Always >= 0.
double bhattacharyya_exponent(const Matrix& kernel, const Matrix& cov_i, const Matrix& cov_j, double sigma2,
                              RankTolerance tol = {});

struct BoundValue {
    double value = 0.0;
    double log_value = 0.0; // -inf for an empty sum
};

// Sum over ordered pairs i != j of sqrt(p_i p_j) exp(-K_ij). Can exceed 1 at
// high noise.
BoundValue union_bhattacharyya_bound(const SourceModel& model, const Matrix& kernel, double sigma2,
                                     RankTolerance tol = {});

// Low-noise expansion of the union bound: bound ~ constant * (sigma2)^exponent.
struct ExponentReport {
    double exponent = 0.0;                           // d = min_ij d(i,j)
    double constant = 0.0;                           // g
    std::vector<std::pair<int, int>> minimizing_pairs; // ordered pairs attaining d
    std::vector<PairGeometry> pairs;                 // unordered, first < second
};

ExponentReport exponent_report(const SourceModel& model, const Matrix& kernel, RankTolerance tol = {});

enum class Regime { random_pt, random_rate, twoclass_pt, twoclass_rate, multiclass_pt };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);

// Closed-form measurement counts:
//   random_pt      r + 1
//   random_rate    floor(2 d0 + r) + 1
//   twoclass_pt    1
//   twoclass_rate  floor(4 d0) + 1
//   multiclass_pt  min{L - 1, r + 1}
// Rate regimes throw InfeasibleDesign when d0 >= R/4, R = 2 min{N - r, r}.
int predicted_measurements(Regime regime, int classes, int class_rank, int ambient_dim, double d0 = 0.0);

enum class LowNoiseBehavior { floor, vanishes };

std::string_view to_string(LowNoiseBehavior behavior);

// floor iff some pair has r_i + r_j = 2 r_ij, i.e. the bound tends to g > 0.
LowNoiseBehavior low_noise_behavior(const SourceModel& model, const Matrix& kernel, RankTolerance tol = {});

} // namespace compclass
