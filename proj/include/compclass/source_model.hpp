#pragma once

#include <vector>

#include "compclass/core.hpp"
#include "compclass/subspace.hpp"

namespace compclass {

// L-class zero-mean Gaussian source with (possibly rank-deficient) class
// covariances. Classes are indexed 0..L-1 in the C++ API; files and the CLI
// use 1..L.
//
// Immutable after construction. The constructor validates the priors and the
// covariances and precomputes each class's spectral square root, which is
// what sampling uses.
class SourceModel {
public:
    SourceModel(std::vector<double> priors, std::vector<Matrix> covariances, RankTolerance tol = {});

    int classes() const { return static_cast<int>(priors_.size()); }
    int ambient_dim() const { return ambient_dim_; }

    const std::vector<double>& priors() const { return priors_; }
    const std::vector<Matrix>& covariances() const { return covariances_; }
    const Matrix& covariance(int cls) const { return covariances_.at(static_cast<std::size_t>(cls)); }

    // N x rank(Sigma_i) factor F_i with F_i F_i^T = Sigma_i.
    const Matrix& square_root(int cls) const { return roots_.at(static_cast<std::size_t>(cls)); }

    int rank(int cls) const { return ranks_.at(static_cast<std::size_t>(cls)); }
    const std::vector<int>& ranks() const { return ranks_; }

    // Modal numerical rank across classes (smallest mode on ties).
    int class_rank() const { return class_rank_; }
    bool equal_ranks() const;

    RankTolerance tolerance() const { return tol_; }

private:
    std::vector<double> priors_;
    std::vector<Matrix> covariances_;
    std::vector<Matrix> roots_;
    std::vector<int> ranks_;
    int ambient_dim_ = 0;
    int class_rank_ = 0;
    RankTolerance tol_;
};

struct Draw {
    int label = 0;
    Vector x;
};

// label ~ priors, x ~ N(0, Sigma_label).
Draw sample(const SourceModel& model, Rng& rng);

// Uniform-prior model whose class covariances are independent
// random_subspace_covariance draws of rank r.
SourceModel make_synthetic_model(int n, int classes, int r, const EigenSpectrum& spectrum, Rng& rng,
                                 RankTolerance tol = {});

// Labeled samples, one row of `features` per sample. Labels are 0-based.
struct LabeledDataset {
    std::vector<int> labels;
    Matrix features; // n x N

    int size() const { return static_cast<int>(labels.size()); }
    int dimension() const { return static_cast<int>(features.cols()); }
    std::vector<int> class_counts(int classes) const;
    void validate(int classes) const;
};

// Zero-mean maximum-likelihood fit: p_i = n_i / n and
// Sigma_i = (1/n_i) sum x x^T (+ ridge * I). Every class needs a sample.
SourceModel fit_ml(const LabeledDataset& data, int classes, double ridge = 0.0, RankTolerance tol = {});

// Subspace geometry of a class pair in the ambient space:
// separation = dim R_i + dim R_j - 2 dim(R_i ∩ R_j).
struct SubspacePairGeometry {
    int first = 0;
    int second = 0;
    int dim_first = 0;
    int dim_second = 0;
    int dim_intersection = 0;
    int separation = 0;
};

SubspacePairGeometry subspace_pair_geometry(const SourceModel& model, int i, int j, RankTolerance tol = {});

// All unordered pairs i < j.
std::vector<SubspacePairGeometry> geometry_summary(const SourceModel& model, RankTolerance tol = {});

} // namespace compclass
