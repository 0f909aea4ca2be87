#include "compclass/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace compclass {

SourceModel::SourceModel(std::vector<double> priors, std::vector<Matrix> covariances, RankTolerance tol)
    : priors_(std::move(priors)), covariances_(std::move(covariances)), tol_(tol) {
    tol_.validate();
    if (priors_.empty()) throw ValidationError("source model needs at least one class");
    if (priors_.size() != covariances_.size())
        throw ValidationError("got " + std::to_string(priors_.size()) + " priors but " +
                              std::to_string(covariances_.size()) + " covariances");
    double total = 0.0;
    for (double p : priors_) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("priors must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("priors must sum to 1");

    ambient_dim_ = static_cast<int>(covariances_.front().rows());
    if (ambient_dim_ < 1) throw ValidationError("covariances must be at least 1x1");

    std::map<int, int> rank_histogram;
    for (std::size_t i = 0; i < covariances_.size(); ++i) {
        Matrix& cov = covariances_[i];
        const std::string what = "covariance of class " + std::to_string(i + 1);
        require_symmetric(cov, what.c_str());
        if (cov.rows() != ambient_dim_) throw ValidationError(what + " has the wrong dimension");
        cov = 0.5 * (cov + cov.transpose());

        const auto spec = spectral_decomposition(cov);
        const Eigen::Index n = spec.eigenvalues.size();
        if (spec.eigenvalues(n - 1) < -1e-8 * cov.norm())
            throw ValidationError(what + " is not positive semidefinite");

        const int r = spec.rank(tol_);
        ranks_.push_back(r);
        ++rank_histogram[r];
        roots_.push_back(spec.eigenvectors.leftCols(r) *
                         spec.eigenvalues.head(r).cwiseSqrt().asDiagonal());
    }
    int best = -1;
    for (const auto& [r, count] : rank_histogram)
        if (count > best) {
            best = count;
            class_rank_ = r;
        }
}

bool SourceModel::equal_ranks() const {
    return std::all_of(ranks_.begin(), ranks_.end(), [&](int r) { return r == ranks_.front(); });
}

Draw sample(const SourceModel& model, Rng& rng) {
    std::discrete_distribution<int> pick(model.priors().begin(), model.priors().end());
    std::normal_distribution<double> normal;
    Draw out;
    out.label = pick(rng);
    const Matrix& root = model.square_root(out.label);
    Vector z(root.cols());
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
    out.x = root * z;
    return out;
}

SourceModel make_synthetic_model(int n, int classes, int r, const EigenSpectrum& spectrum, Rng& rng,
                                 RankTolerance tol) {
    if (classes < 1) throw ValidationError("need at least one class");
    std::vector<Matrix> covs;
    covs.reserve(static_cast<std::size_t>(classes));
    for (int i = 0; i < classes; ++i) covs.push_back(random_subspace_covariance(n, r, spectrum, rng));
    return SourceModel(std::vector<double>(static_cast<std::size_t>(classes), 1.0 / classes), std::move(covs), tol);
}

std::vector<int> LabeledDataset::class_counts(int classes) const {
    std::vector<int> counts(static_cast<std::size_t>(std::max(classes, 0)), 0);
    for (int label : labels)
        if (label >= 0 && label < classes) ++counts[static_cast<std::size_t>(label)];
    return counts;
}

void LabeledDataset::validate(int classes) const {
    if (labels.empty()) throw ValidationError("dataset is empty");
    if (static_cast<Eigen::Index>(labels.size()) != features.rows())
        throw ValidationError("dataset has mismatched label and feature counts");
    if (features.cols() < 1) throw ValidationError("dataset has no feature columns");
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] < 0 || labels[k] >= classes)
            throw ValidationError("sample " + std::to_string(k + 1) + " has label " + std::to_string(labels[k] + 1) +
                                  " outside 1.." + std::to_string(classes));
    if (!features.allFinite()) throw ValidationError("dataset has non-finite features");
}

SourceModel fit_ml(const LabeledDataset& data, int classes, double ridge, RankTolerance tol) {
    if (classes < 1) throw ValidationError("need at least one class");
    if (!(ridge >= 0.0)) throw ValidationError("ridge must be nonnegative");
    data.validate(classes);
    const auto counts = data.class_counts(classes);
    for (int i = 0; i < classes; ++i)
        if (counts[static_cast<std::size_t>(i)] == 0)
            throw ValidationError("class " + std::to_string(i + 1) + " has no samples");

    const int n = data.dimension();
    std::vector<Matrix> covs(static_cast<std::size_t>(classes), Matrix::Zero(n, n));
    for (int k = 0; k < data.size(); ++k) {
        const auto x = data.features.row(k).transpose();
        covs[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(k)])].selfadjointView<Eigen::Lower>().rankUpdate(x);
    }
    std::vector<double> priors(static_cast<std::size_t>(classes));
    for (int i = 0; i < classes; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        Matrix full = covs[idx].selfadjointView<Eigen::Lower>();
        covs[idx] = full / counts[idx];
        covs[idx].diagonal().array() += ridge;
        priors[idx] = static_cast<double>(counts[idx]) / data.size();
    }
    return SourceModel(std::move(priors), std::move(covs), tol);
}

namespace {

SubspacePairGeometry pair_from_bases(int i, int j, const Matrix& bi, const Matrix& bj, RankTolerance tol) {
    SubspacePairGeometry g;
    g.first = i;
    g.second = j;
    g.dim_first = static_cast<int>(bi.cols());
    g.dim_second = static_cast<int>(bj.cols());
    g.dim_intersection = subspace_intersection_dim(bi, bj, tol);
    g.separation = g.dim_first + g.dim_second - 2 * g.dim_intersection;
    return g;
}

} // namespace

SubspacePairGeometry subspace_pair_geometry(const SourceModel& model, int i, int j, RankTolerance tol) {
    return pair_from_bases(i, j, image_basis(model.covariance(i), tol), image_basis(model.covariance(j), tol), tol);
}

std::vector<SubspacePairGeometry> geometry_summary(const SourceModel& model, RankTolerance tol) {
    std::vector<Matrix> bases;
    for (int i = 0; i < model.classes(); ++i) bases.push_back(image_basis(model.covariance(i), tol));
    std::vector<SubspacePairGeometry> out;
    for (int i = 0; i < model.classes(); ++i)
        for (int j = i + 1; j < model.classes(); ++j)
            out.push_back(pair_from_bases(i, j, bases[static_cast<std::size_t>(i)],
                                          bases[static_cast<std::size_t>(j)], tol));
    return out;
}

} // namespace compclass
