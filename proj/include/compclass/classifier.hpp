#pragma once

#include <vector>

#include "compclass/core.hpp"
#include "compclass/source_model.hpp"
#include "compclass/subspace.hpp"

namespace compclass {

// MAP classifier on y = Phi x + n. Each class likelihood is the zero-mean
// Gaussian with covariance Phi Sigma_i Phi^T + sigma2 I, evaluated in the
// eigenbasis of Phi Sigma_i Phi^T; eigenvalues below the rank threshold
// (relative to ||Phi||^2 ||Sigma_i||) are treated as exact zeros. Immutable
// after construction.
class MapClassifier {
public:
    MapClassifier(const SourceModel& model, const Matrix& kernel, double sigma2, RankTolerance tol = {});

    // Directly from measurement-domain covariances S_i (M x M).
    MapClassifier(const std::vector<double>& priors, const std::vector<Matrix>& projected, double sigma2,
                  RankTolerance tol = {});

    int classes() const { return static_cast<int>(log_priors_.size()); }
    int measurements() const { return measurements_; }
    double noise_variance() const { return sigma2_; }

    // log N(y; 0, S_i + sigma2 I)
    double log_likelihood(const Vector& y, int cls) const;

    // argmax_i log p_i + log_likelihood(y, i); ties go to the lowest index.
    // Zero-prior classes are never chosen.
    int classify(const Vector& y) const;

private:
    struct ClassTerms {
        Matrix eigenvectors;   // M x M
        Vector inv_variances;  // 1 / (lambda_k + sigma2)
        double log_norm = 0.0; // -1/2 sum log(lambda_k + sigma2) - M/2 log(2 pi)
    };

    void init(const std::vector<double>& priors, const std::vector<Matrix>& projected,
              const std::vector<double>& scales, RankTolerance tol);

    std::vector<ClassTerms> terms_;
    std::vector<double> log_priors_;
    int measurements_ = 0;
    double sigma2_ = 0.0;
};

} // namespace compclass
