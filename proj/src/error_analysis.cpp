#include "compclass/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace compclass {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Matrix project(const Matrix& kernel, const Matrix& cov) {
    if (kernel.cols() != cov.rows())
        throw ValidationError("kernel has " + std::to_string(kernel.cols()) + " columns but covariance is " +
                              std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()));
    Matrix s = kernel * cov * kernel.transpose();
    return 0.5 * (s + s.transpose());
}

struct Projected {
    Vector eigenvalues; // the rank-counted ones, descending
    int rank() const { return static_cast<int>(eigenvalues.size()); }
    double log_volume() const { return eigenvalues.array().log().sum(); }
    double log_shifted(double shift) const { return (eigenvalues.array() + shift).log().sum(); }
};

// `scale` bounds the largest eigenvalue a nonzero projection could have,
// ||Phi||^2 ||Sigma||; ranks are counted relative to it.
Projected projected_spectrum(const Matrix& s, double scale, RankTolerance tol) {
    const auto spec = spectral_decomposition(s);
    return {spec.eigenvalues.head(spec.rank(tol, scale))};
}

double covariance_scale(const Matrix& cov) {
    return cov.size() ? Eigen::SelfAdjointEigenSolver<Matrix>(cov, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff()
                      : 0.0;
}

PairGeometry geometry_from(int i, int j, const Projected& si, const Projected& sj, const Projected& sij) {
    PairGeometry g;
    g.first = i;
    g.second = j;
    g.rank_first = si.rank();
    g.rank_second = sj.rank();
    g.rank_joint = sij.rank();
    g.log_volume_first = si.log_volume();
    g.log_volume_second = sj.log_volume();
    g.log_volume_joint = sij.log_volume();
    return g;
}

double exponent_from(const Projected& si, const Projected& sj, const Projected& sij, double sigma2) {
    const int ri = si.rank(), rj = sj.rank(), rij = sij.rank();
    const double log4k = -2.0 * rij * std::numbers::ln2 + (ri + rj - 2 * rij) * std::log(sigma2) +
                         2.0 * sij.log_shifted(2.0 * sigma2) - si.log_shifted(sigma2) - sj.log_shifted(sigma2);
    // Exactly zero for identical classes; rounding may leave a tiny negative.
    return std::max(0.0, 0.25 * log4k);
}

void require_noise(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ValidationError("noise variance must be positive");
}

double log_sum_exp(const std::vector<double>& terms) {
    double top = kNegInf;
    for (double t : terms) top = std::max(top, t);
    if (top == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    return top + std::log(acc);
}

double half_log(double p) { return p > 0.0 ? 0.5 * std::log(p) : kNegInf; }

// Per-class and per-pair projected spectra for a model under a kernel.
struct ProjectedModel {
    std::vector<Matrix> projected;
    std::vector<double> scale;
    std::vector<Projected> single;

    ProjectedModel(const std::vector<Matrix>& covariances, const Matrix& kernel, RankTolerance tol) {
        const double gain = std::pow(spectral_norm(kernel), 2);
        for (const auto& cov : covariances) {
            projected.push_back(project(kernel, cov));
            scale.push_back(gain * covariance_scale(cov));
            single.push_back(projected_spectrum(projected.back(), scale.back(), tol));
        }
    }

    Projected joint(int i, int j, RankTolerance tol) const {
        const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
        return projected_spectrum(projected[a] + projected[b], scale[a] + scale[b], tol);
    }
};

} // namespace

double PairGeometry::volume_first() const { return std::exp(log_volume_first); }
double PairGeometry::volume_second() const { return std::exp(log_volume_second); }
double PairGeometry::volume_joint() const { return std::exp(log_volume_joint); }

PairGeometry pair_geometry(const Matrix& kernel, const Matrix& cov_i, const Matrix& cov_j, RankTolerance tol) {
    const ProjectedModel pm({cov_i, cov_j}, kernel, tol);
    return geometry_from(0, 1, pm.single[0], pm.single[1], pm.joint(0, 1, tol));
}

double pairwise_exponent(const Matrix& kernel, const Matrix& cov_i, const Matrix& cov_j, RankTolerance tol) {
    return pair_geometry(kernel, cov_i, cov_j, tol).exponent();
}

double bhattacharyya_exponent(const Matrix& kernel, const Matrix& cov_i, const Matrix& cov_j, double sigma2,
                              RankTolerance tol) {
    require_noise(sigma2);
    const ProjectedModel pm({cov_i, cov_j}, kernel, tol);
    return exponent_from(pm.single[0], pm.single[1], pm.joint(0, 1, tol), sigma2);
}

BoundValue union_bhattacharyya_bound(const SourceModel& model, const Matrix& kernel, double sigma2,
                                     RankTolerance tol) {
    require_noise(sigma2);
    const ProjectedModel pm(model.covariances(), kernel, tol);
    const auto& p = model.priors();
    std::vector<double> terms;
    for (int i = 0; i < model.classes(); ++i)
        for (int j = i + 1; j < model.classes(); ++j) {
            const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
            const double k = exponent_from(pm.single[a], pm.single[b], pm.joint(i, j, tol), sigma2);
            // (i, j) and (j, i) contribute equally.
            terms.push_back(std::numbers::ln2 + half_log(p[a]) + half_log(p[b]) - k);
        }
    BoundValue out;
    out.log_value = log_sum_exp(terms);
    out.value = std::exp(out.log_value);
    return out;
}

ExponentReport exponent_report(const SourceModel& model, const Matrix& kernel, RankTolerance tol) {
    if (model.classes() < 2) throw ValidationError("decay exponent needs at least two classes");
    const ProjectedModel pm(model.covariances(), kernel, tol);
    ExponentReport report;
    report.exponent = std::numeric_limits<double>::infinity();
    for (int i = 0; i < model.classes(); ++i)
        for (int j = i + 1; j < model.classes(); ++j) {
            auto g = geometry_from(i, j, pm.single[static_cast<std::size_t>(i)],
                                   pm.single[static_cast<std::size_t>(j)], pm.joint(i, j, tol));
            report.exponent = std::min(report.exponent, g.exponent());
            report.pairs.push_back(g);
        }

    const auto& p = model.priors();
    std::vector<double> terms;
    for (const auto& g : report.pairs) {
        if (g.exponent() != report.exponent) continue;
        report.minimizing_pairs.emplace_back(g.first, g.second);
        report.minimizing_pairs.emplace_back(g.second, g.first);
        const double term = half_log(p[static_cast<std::size_t>(g.first)]) +
                            half_log(p[static_cast<std::size_t>(g.second)]) +
                            0.5 * g.rank_joint * std::numbers::ln2 +
                            0.5 * (0.5 * (g.log_volume_first + g.log_volume_second) - g.log_volume_joint);
        terms.push_back(std::numbers::ln2 + term);
    }
    std::sort(report.minimizing_pairs.begin(), report.minimizing_pairs.end());
    report.constant = std::exp(log_sum_exp(terms));
    return report;
}

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::random_pt: return "random_pt";
    case Regime::random_rate: return "random_rate";
    case Regime::twoclass_pt: return "twoclass_pt";
    case Regime::twoclass_rate: return "twoclass_rate";
    case Regime::multiclass_pt: return "multiclass_pt";
    }
    return "random_pt";
}

Regime parse_regime(std::string_view text) {
    for (auto r : {Regime::random_pt, Regime::random_rate, Regime::twoclass_pt, Regime::twoclass_rate,
                   Regime::multiclass_pt})
        if (to_string(r) == text) return r;
    throw ValidationError("unknown regime '" + std::string(text) + "'");
}

int predicted_measurements(Regime regime, int classes, int class_rank, int ambient_dim, double d0) {
    if (class_rank < 0 || ambient_dim < 1 || class_rank >= ambient_dim)
        throw ValidationError("need 0 <= r < N");
    const bool rate = regime == Regime::random_rate || regime == Regime::twoclass_rate;
    if (rate) {
        if (!(d0 >= 0.0) || !std::isfinite(d0)) throw ValidationError("target exponent must be finite and >= 0");
        const double ceiling = 2 * std::min(ambient_dim - class_rank, class_rank) / 4.0;
        if (d0 >= ceiling)
            throw InfeasibleDesign("target exponent " + std::to_string(d0) + " is not below R/4 = " +
                                   std::to_string(ceiling));
    }
    switch (regime) {
    case Regime::random_pt: return class_rank + 1;
    case Regime::random_rate: return static_cast<int>(std::floor(2.0 * d0 + class_rank)) + 1;
    case Regime::twoclass_pt: return 1;
    case Regime::twoclass_rate: return static_cast<int>(std::floor(4.0 * d0)) + 1;
    case Regime::multiclass_pt:
        if (classes < 2) throw ValidationError("multiclass regime needs L >= 2");
        return std::min(classes - 1, class_rank + 1);
    }
    return 0;
}

std::string_view to_string(LowNoiseBehavior behavior) {
    return behavior == LowNoiseBehavior::floor ? "floor" : "vanishes";
}

LowNoiseBehavior low_noise_behavior(const SourceModel& model, const Matrix& kernel, RankTolerance tol) {
    if (model.classes() < 2) return LowNoiseBehavior::vanishes;
    const auto report = exponent_report(model, kernel, tol);
    return report.exponent > 0.0 ? LowNoiseBehavior::vanishes : LowNoiseBehavior::floor;
}

} // namespace compclass
