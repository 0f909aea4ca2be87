#include "compclass/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace compclass {

MapClassifier::MapClassifier(const SourceModel& model, const Matrix& kernel, double sigma2, RankTolerance tol)
    : sigma2_(sigma2) {
    if (kernel.cols() != model.ambient_dim())
        throw ValidationError("kernel has " + std::to_string(kernel.cols()) + " columns, model dimension is " +
                              std::to_string(model.ambient_dim()));
    std::vector<Matrix> projected;
    std::vector<double> scales;
    const double gain = std::pow(spectral_norm(kernel), 2);
    for (int i = 0; i < model.classes(); ++i) {
        Matrix s = kernel * model.covariance(i) * kernel.transpose();
        projected.push_back(0.5 * (s + s.transpose()));
        const Eigen::SelfAdjointEigenSolver<Matrix> es(model.covariance(i), Eigen::EigenvaluesOnly);
        scales.push_back(gain * es.eigenvalues().maxCoeff());
    }
    init(model.priors(), projected, scales, tol);
}

MapClassifier::MapClassifier(const std::vector<double>& priors, const std::vector<Matrix>& projected,
                             double sigma2, RankTolerance tol)
    : sigma2_(sigma2) {
    // Without the source covariances, the largest projected eigenvalue over
    // all classes serves as the common scale.
    double top = 0.0;
    for (const auto& s : projected)
        if (s.size()) top = std::max(top, Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
    init(priors, projected, std::vector<double>(projected.size(), top), tol);
}

void MapClassifier::init(const std::vector<double>& priors, const std::vector<Matrix>& projected,
                         const std::vector<double>& scales, RankTolerance tol) {
    if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) throw ValidationError("noise variance must be positive");
    if (priors.empty() || priors.size() != projected.size())
        throw ValidationError("classifier needs one prior per projected covariance");
    measurements_ = static_cast<int>(projected.front().rows());
    for (std::size_t i = 0; i < projected.size(); ++i) {
        if (projected[i].rows() != measurements_)
            throw ValidationError("projected covariances have inconsistent sizes");
        const auto spec = spectral_decomposition(projected[i]);
        const int r = spec.rank(tol, scales[i]);
        ClassTerms t;
        t.eigenvectors = spec.eigenvectors;
        t.inv_variances.resize(measurements_);
        double log_det = 0.0;
        for (int k = 0; k < measurements_; ++k) {
            const double var = (k < r ? spec.eigenvalues(k) : 0.0) + sigma2_;
            t.inv_variances(k) = 1.0 / var;
            log_det += std::log(var);
        }
        t.log_norm = -0.5 * log_det - 0.5 * measurements_ * std::log(2.0 * std::numbers::pi);
        terms_.push_back(std::move(t));
        log_priors_.push_back(priors[i] > 0.0 ? std::log(priors[i]) : -std::numeric_limits<double>::infinity());
    }
}

double MapClassifier::log_likelihood(const Vector& y, int cls) const {
    if (y.size() != measurements_)
        throw ValidationError("measurement vector has length " + std::to_string(y.size()) + ", expected " +
                              std::to_string(measurements_));
    if (cls < 0 || cls >= classes()) throw ValidationError("class index out of range");
    const auto& t = terms_[static_cast<std::size_t>(cls)];
    const Vector coords = t.eigenvectors.transpose() * y;
    return t.log_norm - 0.5 * coords.cwiseAbs2().dot(t.inv_variances);
}

int MapClassifier::classify(const Vector& y) const {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < classes(); ++i) {
        if (log_priors_[static_cast<std::size_t>(i)] == -std::numeric_limits<double>::infinity()) continue;
        const double score = log_priors_[static_cast<std::size_t>(i)] + log_likelihood(y, i);
        if (best < 0 || score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

} // namespace compclass
