#include <doctest.h>

#include <cmath>

#include "compclass/subspace.hpp"

using namespace compclass;

namespace {

// Rank by an independent route: singular values of the matrix itself.
int svd_rank(const Matrix& a, double rel = 1e-10) {
    const Vector s = Eigen::BDCSVD<Matrix>(a).singularValues();
    if (s.size() == 0 || s(0) <= 0) return 0;
    int k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) k += s(i) > rel * s(0);
    return k;
}

Matrix planted(int n, const std::vector<double>& spectrum, Rng& rng) {
    Matrix q = Eigen::HouseholderQR<Matrix>(Matrix::NullaryExpr(n, n, [&] {
                   return std::normal_distribution<double>()(rng);
               })).householderQ();
    Vector lam = Vector::Zero(n);
    for (std::size_t k = 0; k < spectrum.size(); ++k) lam(static_cast<Eigen::Index>(k)) = spectrum[k];
    return q * lam.asDiagonal() * q.transpose();
}

} // namespace

TEST_CASE("spectral decomposition is sorted, orthonormal and reconstructs") {
    Rng rng(11);
    const Matrix a = planted(9, {5, 3, 3, 1, 0.2}, rng);
    const auto sd = spectral_decomposition(a);
    for (Eigen::Index k = 1; k < sd.eigenvalues.size(); ++k) CHECK(sd.eigenvalues(k) <= sd.eigenvalues(k - 1));
    CHECK((sd.eigenvectors.transpose() * sd.eigenvectors - Matrix::Identity(9, 9)).norm() < 1e-10);
    const Matrix back = sd.eigenvectors * sd.eigenvalues.asDiagonal() * sd.eigenvectors.transpose();
    CHECK((back - a).norm() <= 1e-10 * a.norm());
    CHECK(sd.rank() == 5);
}

TEST_CASE("numerical rank") {
    CHECK(numerical_rank(Matrix::Identity(3, 3)) == 3);
    CHECK(numerical_rank(Eigen::Vector3d(1, 1e-14, 0).asDiagonal().toDenseMatrix()) == 1);
    CHECK(numerical_rank(Matrix::Zero(4, 4)) == 0);

    Rng rng(1);
    const Matrix sigma = random_subspace_covariance(64, 14, EigenSpectrum{}, rng);
    CHECK(numerical_rank(sigma) == 14);
    CHECK(svd_rank(sigma) == 14);

    SUBCASE("asymmetric input is rejected") {
        Matrix a = Matrix::Identity(3, 3);
        a(0, 1) = 1e-6;
        CHECK_THROWS_AS(numerical_rank(a), ValidationError);
        CHECK_THROWS_AS(numerical_rank(Matrix::Zero(2, 3)), ValidationError);
    }
    SUBCASE("threshold must be positive") {
        CHECK_THROWS_AS(numerical_rank(Matrix::Identity(2, 2), RankTolerance{0.0}), ValidationError);
    }
}

TEST_CASE("pseudo-determinant") {
    CHECK(pseudo_determinant(Eigen::Vector3d(2, 3, 0).asDiagonal().toDenseMatrix()) == doctest::Approx(6.0));
    CHECK(pseudo_determinant(Matrix::Identity(5, 5)) == doctest::Approx(1.0));
    CHECK(pseudo_determinant(Matrix::Zero(3, 3)) == 1.0);
    CHECK(log_pseudo_determinant(Matrix::Zero(3, 3)) == 0.0);

    Rng rng(2);
    const Matrix a = planted(5, {4, 2, 0.5}, rng);
    CHECK(pseudo_determinant(a) == doctest::Approx(4.0).epsilon(1e-10));

    SUBCASE("scaling multiplies by c^rank") {
        const Matrix b = planted(7, {3, 1.5, 0.7, 0.1}, rng);
        for (double c : {0.1, 2.5, 40.0}) {
            const double lhs = pseudo_determinant(c * b);
            const double rhs = std::pow(c, 4) * pseudo_determinant(b);
            CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
        }
    }
}

TEST_CASE("null space and image bases") {
    const Matrix d = Eigen::Vector3d(1, 1, 0).asDiagonal();
    const Matrix nb = null_space_basis(d);
    REQUIRE(nb.cols() == 1);
    CHECK(std::abs(std::abs(nb(2, 0)) - 1.0) < 1e-12);
    const Matrix ib = image_basis(d);
    REQUIRE(ib.cols() == 2);
    CHECK(ib.row(2).norm() < 1e-12);

    CHECK(null_space_basis(Matrix::Zero(4, 4)).cols() == 4);
    CHECK(image_basis(Matrix::Identity(4, 4)).cols() == 4);

    SUBCASE("planted image") {
        Rng rng(3);
        const Matrix u = random_orthonormal(4, 2, rng);
        const Matrix sigma = u * u.transpose();
        const Matrix n = null_space_basis(sigma);
        const Matrix r = image_basis(sigma);
        REQUIRE(n.cols() == 2);
        CHECK((u.transpose() * n).norm() < 1e-10);
        CHECK((r * r.transpose() - u * u.transpose()).norm() < 1e-10);
    }

    SUBCASE("projectors are complementary") {
        Rng rng(4);
        for (int trial = 0; trial < 5; ++trial) {
            const Matrix sigma = random_subspace_covariance(20, 3 + trial * 3, EigenSpectrum{}, rng);
            const Matrix n = null_space_basis(sigma);
            const Matrix r = image_basis(sigma);
            CHECK(numerical_rank(sigma) + n.cols() == 20);
            CHECK((n * n.transpose() + r * r.transpose() - Matrix::Identity(20, 20)).norm() < 1e-8);
            CHECK((n.transpose() * r).norm() < 1e-8);
            const double lmax = spectral_decomposition(sigma).eigenvalues(0);
            for (Eigen::Index c = 0; c < n.cols(); ++c) CHECK((sigma * n.col(c)).norm() <= 1e-8 * lmax);
        }
    }
}

TEST_CASE("random subspace covariance") {
    Rng rng(5);
    const Matrix line = random_subspace_covariance(4, 1, EigenSpectrum::fixed(1.0), rng);
    CHECK(line.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((line * line - line).norm() < 1e-12);

    const Matrix a = random_subspace_covariance(64, 14, EigenSpectrum{}, rng);
    const Matrix b = random_subspace_covariance(64, 14, EigenSpectrum{}, rng);
    Matrix both(64, 28);
    both << image_basis(a), image_basis(b);
    CHECK(svd_rank(both) == 28);
    CHECK(numerical_rank(a + b) == 28);
    CHECK(null_space_basis(a + b).cols() == 64 - 28);

    const auto lam = spectral_decomposition(a).eigenvalues;
    CHECK(lam(0) <= 1.5);
    CHECK(lam(13) >= 0.5);

    CHECK_THROWS_AS(random_subspace_covariance(4, 4, EigenSpectrum{}, rng), ValidationError);
    CHECK_THROWS_AS(random_subspace_covariance(4, 0, EigenSpectrum{}, rng), ValidationError);
    CHECK_THROWS_AS(EigenSpectrum::uniform(2.0, 1.0).validate(), ValidationError);
}

TEST_CASE("subspace intersection dimension") {
    const Matrix e1 = Matrix::Identity(3, 3).col(0);
    const Matrix e2 = Matrix::Identity(3, 3).col(1);
    CHECK(subspace_intersection_dim(e1, e1) == 1);
    CHECK(subspace_intersection_dim(e1, e2) == 0);

    Rng rng(6);
    const Matrix a = random_orthonormal(64, 14, rng);
    const Matrix b = random_orthonormal(64, 14, rng);
    CHECK(subspace_intersection_dim(a, b) == 0);
    // Independent check: no principal angle is zero.
    const Vector cosines = Eigen::JacobiSVD<Matrix>(a.transpose() * b).singularValues();
    CHECK(cosines(0) < 1.0 - 1e-6);

    SUBCASE("planted shared directions") {
        const Matrix q = random_orthonormal(30, 12, rng);
        CHECK(subspace_intersection_dim(q.leftCols(7), q.rightCols(8)) == 3);
    }
    SUBCASE("non-orthonormal input is rejected") {
        CHECK_THROWS_AS(subspace_intersection_dim(2.0 * e1, e2), ValidationError);
    }
}

TEST_CASE("rank of random pairs matches the generic count") {
    Rng rng(7);
    for (int r : {3, 8, 14}) {
        const Matrix a = random_subspace_covariance(40, r, EigenSpectrum{}, rng);
        const Matrix b = random_subspace_covariance(40, r, EigenSpectrum{}, rng);
        CHECK(numerical_rank(a + b) == std::min(40, 2 * r));
        CHECK(subspace_intersection_dim(null_space_basis(a), null_space_basis(b)) == std::max(0, 40 - 2 * r));
    }
}

TEST_CASE("rectangular rank and column space") {
    Matrix a(3, 4);
    a << 1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 0, 1;
    CHECK(matrix_rank(a) == 2);
    CHECK(column_space_basis(a).cols() == 2);
    CHECK(matrix_rank(Matrix::Zero(3, 2)) == 0);
}
