#include "compclass/subspace.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace compclass {

void RankTolerance::validate() const {
    if (!(relative_threshold > 0.0) || !std::isfinite(relative_threshold))
        throw ValidationError("rank tolerance must be a positive finite number");
}

int SpectralDecomposition::rank(RankTolerance tol, double reference_scale) const {
    tol.validate();
    if (eigenvalues.size() == 0) return 0;
    const double top = std::max(eigenvalues(0), reference_scale);
    if (!(top > 0.0)) return 0;
    const double cut = tol.relative_threshold * top;
    int r = 0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
        if (eigenvalues(k) > cut) ++r;
    return r;
}

void require_symmetric(const Matrix& a, const char* what) {
    if (a.rows() != a.cols())
        throw ValidationError(std::string(what) + " must be square, got " + std::to_string(a.rows()) +
                              "x" + std::to_string(a.cols()));
    if (!a.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
    const double scale = a.norm();
    if ((a - a.transpose()).norm() > 1e-12 * scale)
        throw ValidationError(std::string(what) + " is not symmetric");
}

SpectralDecomposition spectral_decomposition(const Matrix& symmetric) {
    require_symmetric(symmetric);
    SpectralDecomposition out;
    const Eigen::Index n = symmetric.rows();
    if (n == 0) return out;
    const Matrix sym = 0.5 * (symmetric + symmetric.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw ValidationError("eigen-decomposition did not converge");
    // Eigen returns ascending order.
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

int numerical_rank(const Matrix& symmetric_psd, RankTolerance tol) {
    return spectral_decomposition(symmetric_psd).rank(tol);
}

double log_pseudo_determinant(const Matrix& symmetric_psd, RankTolerance tol) {
    const auto spec = spectral_decomposition(symmetric_psd);
    const int r = spec.rank(tol);
    double acc = 0.0;
    for (int k = 0; k < r; ++k) acc += std::log(spec.eigenvalues(k));
    return acc;
}

double pseudo_determinant(const Matrix& symmetric_psd, RankTolerance tol) {
    return std::exp(log_pseudo_determinant(symmetric_psd, tol));
}

Matrix null_space_basis(const Matrix& symmetric_psd, RankTolerance tol) {
    const auto spec = spectral_decomposition(symmetric_psd);
    const int r = spec.rank(tol);
    const auto n = symmetric_psd.rows();
    return spec.eigenvectors.rightCols(n - r);
}

Matrix image_basis(const Matrix& symmetric_psd, RankTolerance tol) {
    const auto spec = spectral_decomposition(symmetric_psd);
    return spec.eigenvectors.leftCols(spec.rank(tol));
}

namespace {

int rank_from_singular_values(const Vector& s, RankTolerance tol) {
    tol.validate();
    if (s.size() == 0 || !(s(0) > 0.0)) return 0;
    const double cut = tol.relative_threshold * s(0) * s(0);
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) * s(k) > cut) ++r;
    return r;
}

} // namespace

int matrix_rank(const Matrix& a, RankTolerance tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return rank_from_singular_values(svd.singularValues(), tol);
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

Matrix column_space_basis(const Matrix& a, RankTolerance tol) {
    if (a.size() == 0) return Matrix(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    const int r = rank_from_singular_values(svd.singularValues(), tol);
    return svd.matrixU().leftCols(r);
}

int subspace_intersection_dim(const Matrix& a, const Matrix& b, RankTolerance tol) {
    if (a.rows() != b.rows())
        throw ValidationError("subspace bases live in different ambient dimensions");
    for (const Matrix* m : {&a, &b}) {
        if (m->cols() == 0) continue;
        const Matrix gram = m->transpose() * *m;
        if ((gram - Matrix::Identity(m->cols(), m->cols())).cwiseAbs().maxCoeff() > 1e-8)
            throw ValidationError("subspace basis is not orthonormal");
    }
    if (a.cols() == 0 || b.cols() == 0) return 0;
    Matrix joined(a.rows(), a.cols() + b.cols());
    joined << a, b;
    return matrix_rank(a, tol) + matrix_rank(b, tol) - matrix_rank(joined, tol);
}

void EigenSpectrum::validate() const {
    if (!(low > 0.0) || !std::isfinite(high) || high < low)
        throw ValidationError("eigenvalue spectrum needs 0 < low <= high");
}

double EigenSpectrum::draw(Rng& rng) const {
    if (kind == Kind::fixed) return low;
    std::uniform_real_distribution<double> dist(low, high);
    return dist(rng);
}

Matrix random_orthonormal(int n, int k, Rng& rng) {
    if (n < 1 || k < 0 || k > n) throw ValidationError("random_orthonormal needs 0 <= k <= n");
    std::normal_distribution<double> normal;
    Matrix g(n, k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < n; ++r) g(r, c) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n, k);
}

Matrix random_subspace_covariance(int n, int r, const EigenSpectrum& spectrum, Rng& rng) {
    if (r < 1 || r >= n)
        throw ValidationError("covariance rank must satisfy 1 <= r < N (got r=" + std::to_string(r) +
                              ", N=" + std::to_string(n) + ")");
    spectrum.validate();
    const Matrix u = random_orthonormal(n, r, rng);
    Vector lambda(r);
    for (int k = 0; k < r; ++k) lambda(k) = spectrum.draw(rng);
    Matrix cov = u * lambda.asDiagonal() * u.transpose();
    return 0.5 * (cov + cov.transpose());
}

} // namespace compclass
