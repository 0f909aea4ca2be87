#include "compclass/kernel_design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace compclass {

std::string_view to_string(DesignTag tag) {
    switch (tag) {
    case DesignTag::random: return "random";
    case DesignTag::prop3: return "prop3";
    case DesignTag::prop4: return "prop4";
    case DesignTag::prop5: return "prop5";
    case DesignTag::custom: return "custom";
    }
    return "custom";
}

DesignTag parse_design_tag(std::string_view text) {
    for (auto tag : {DesignTag::random, DesignTag::prop3, DesignTag::prop4, DesignTag::prop5, DesignTag::custom})
        if (to_string(tag) == text) return tag;
    throw ValidationError("unknown design '" + std::string(text) + "'");
}

MeasurementKernel normalize_kernel(MeasurementKernel kernel) {
    const double energy = kernel.matrix.squaredNorm();
    if (kernel.matrix.size() == 0 || !(energy > 0.0) || !std::isfinite(energy))
        throw ValidationError("cannot normalize a zero or non-finite kernel");
    kernel.matrix *= std::sqrt(static_cast<double>(kernel.matrix.rows()) / energy);
    return kernel;
}

MeasurementKernel random_kernel(int m, int n, std::uint64_t seed) {
    if (m < 1 || n < 1) throw ValidationError("random kernel needs M >= 1 and N >= 1");
    Rng rng(seed);
    std::normal_distribution<double> normal;
    MeasurementKernel k;
    k.matrix.resize(m, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < m; ++r) k.matrix(r, c) = normal(rng);
    k.tag = DesignTag::random;
    k.seed = seed;
    return normalize_kernel(std::move(k));
}

Matrix DiscriminantBasis::stacked() const {
    Matrix out(separation(), first.rows());
    if (first_dim() > 0) out.topRows(first_dim()) = first.transpose();
    if (second_dim() > 0) out.bottomRows(second_dim()) = second.transpose();
    return out;
}

namespace {

void require_two_classes(const SourceModel& model) {
    if (model.classes() != 2)
        throw ValidationError("two-class design needs L = 2, got L = " + std::to_string(model.classes()));
}

// Orthonormal basis of span(space) ∩ span(shared)^⊥, where span(shared) ⊆ span(space).
Matrix complete_basis(const Matrix& space, const Matrix& shared) {
    const auto want = space.cols() - shared.cols();
    if (want <= 0) return Matrix(space.rows(), 0);
    Matrix residual = space;
    if (shared.cols() > 0) residual -= shared * (shared.transpose() * space);
    Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(want);
}

// Unit vector with Gaussian coefficients over an orthonormal basis.
Vector random_unit_in(const Matrix& basis, Rng& rng) {
    std::normal_distribution<double> normal;
    Vector c(basis.cols());
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = normal(rng);
    Vector v = basis * c;
    return v / v.norm();
}

} // namespace

DiscriminantBasis build_discriminant_basis(const SourceModel& model, RankTolerance tol) {
    require_two_classes(model);
    DiscriminantBasis out;
    out.shared = null_space_basis(model.covariance(0) + model.covariance(1), tol);
    out.first = complete_basis(null_space_basis(model.covariance(0), tol), out.shared);
    out.second = complete_basis(null_space_basis(model.covariance(1), tol), out.shared);
    if (out.separation() == 0)
        throw InfeasibleDesign("class null spaces coincide; no discriminating measurement exists");
    return out;
}

MeasurementKernel design_single_measurement(const SourceModel& model, std::uint64_t seed, RankTolerance tol) {
    const auto basis = build_discriminant_basis(model, tol);
    Rng rng(seed);
    const Matrix& block = basis.first_dim() > 0 ? basis.first : basis.second;
    MeasurementKernel k;
    k.matrix = random_unit_in(block, rng).transpose();
    k.tag = DesignTag::prop3;
    k.seed = seed;
    return normalize_kernel(std::move(k));
}

MeasurementKernel design_two_class(const SourceModel& model, double d0, std::uint64_t seed, RankTolerance tol) {
    if (!(d0 >= 0.0) || !std::isfinite(d0)) throw ValidationError("target exponent d0 must be finite and >= 0");
    const auto basis = build_discriminant_basis(model, tol);
    const int sep = basis.separation();
    if (d0 >= sep / 4.0)
        throw InfeasibleDesign("target exponent " + std::to_string(d0) + " is not below R/4 = " +
                               std::to_string(sep / 4.0));
    const int m = static_cast<int>(std::floor(4.0 * d0)) + 1;

    Rng rng(seed);
    const int lo = std::max(0, m - basis.second_dim());
    const int hi = std::min(m, basis.first_dim());
    const int from_first = std::uniform_int_distribution<int>(lo, hi)(rng);
    const int from_second = m - from_first;

    auto pick = [&](int count, int available) {
        std::vector<int> idx(static_cast<std::size_t>(available));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(static_cast<std::size_t>(count));
        return idx;
    };
    const auto rows_first = pick(from_first, basis.first_dim());
    const auto rows_second = pick(from_second, basis.second_dim());

    MeasurementKernel k;
    k.matrix.resize(m, model.ambient_dim());
    int row = 0;
    for (int c : rows_first) k.matrix.row(row++) = basis.first.col(c).transpose();
    for (int c : rows_second) k.matrix.row(row++) = basis.second.col(c).transpose();
    k.tag = DesignTag::prop4;
    k.seed = seed;
    return normalize_kernel(std::move(k));
}

MeasurementKernel design_one_vs_all(const SourceModel& model, int m, std::uint64_t seed, RankTolerance tol) {
    const int classes = model.classes();
    if (m < 1 || m > classes)
        throw ValidationError("one-vs-all design takes at most one row per class: need 1 <= M <= L = " +
                              std::to_string(classes) + ", got M = " + std::to_string(m));
    Rng rng(seed);
    std::vector<int> order(static_cast<std::size_t>(classes));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    MeasurementKernel k;
    k.matrix.resize(m, model.ambient_dim());
    for (int row = 0; row < m; ++row) {
        const int cls = order[static_cast<std::size_t>(row)];
        const Matrix null = null_space_basis(model.covariance(cls), tol);
        if (null.cols() == 0)
            throw InfeasibleDesign("class " + std::to_string(cls + 1) + " has a trivial null space");
        k.matrix.row(row) = random_unit_in(null, rng).transpose();
    }
    k.tag = DesignTag::prop5;
    k.seed = seed;
    return normalize_kernel(std::move(k));
}

MeasurementKernel design_from_allocation(const SourceModel& model, std::span<const int> counts,
                                         std::uint64_t seed, RankTolerance tol) {
    if (static_cast<int>(counts.size()) != model.classes())
        throw ValidationError("allocation must have one count per class");
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total < 1) throw ValidationError("allocation must request at least one measurement");

    Rng rng(seed);
    MeasurementKernel k;
    k.matrix.resize(total, model.ambient_dim());
    int row = 0;
    for (int cls = 0; cls < model.classes(); ++cls) {
        const int want = counts[static_cast<std::size_t>(cls)];
        if (want < 0) throw ValidationError("allocation counts must be nonnegative");
        if (want == 0) continue;
        const Matrix null = null_space_basis(model.covariance(cls), tol);
        if (want > null.cols())
            throw InfeasibleDesign("class " + std::to_string(cls + 1) + " null space has dimension " +
                                   std::to_string(null.cols()) + " < " + std::to_string(want));
        for (int c = 0; c < want; ++c) k.matrix.row(row++) = random_unit_in(null, rng).transpose();
    }
    k.tag = DesignTag::custom;
    k.seed = seed;
    return normalize_kernel(std::move(k));
}

MeasurementKernel make_kernel(const SourceModel& model, DesignTag tag, int m, std::uint64_t seed, RankTolerance tol) {
    switch (tag) {
    case DesignTag::random: return random_kernel(m, model.ambient_dim(), seed);
    case DesignTag::prop5: return design_one_vs_all(model, m, seed, tol);
    default: break;
    }
    throw ValidationError("measurement-count sweeps support the random and prop5 designs only");
}

} // namespace compclass
