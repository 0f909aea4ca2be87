#include <doctest.h>

#include <cmath>

#include "compclass/error_analysis.hpp"
#include "compclass/kernel_design.hpp"

using namespace compclass;

namespace {

Matrix diag(std::initializer_list<double> v) {
    Vector d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) d(k++) = x;
    return d.asDiagonal();
}

SourceModel random_model(int n, int classes, int r, std::uint64_t seed) {
    Rng rng(seed);
    return make_synthetic_model(n, classes, r, EigenSpectrum{}, rng);
}

// Rank by SVD of the projected square root, independent of the
// eigen-decomposition path used inside the library.
int projected_rank(const Matrix& phi, const Matrix& sigma) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
    const Matrix root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    const Matrix a = phi * root;
    const Vector s = Eigen::BDCSVD<Matrix>(a).singularValues();
    const double scale = Eigen::BDCSVD<Matrix>(phi).singularValues()(0) * root.norm();
    int k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) k += s(i) > 1e-6 * scale;
    return k;
}

double oracle_exponent(const Matrix& phi, const Matrix& a, const Matrix& b) {
    return (2 * projected_rank(phi, a + b) - projected_rank(phi, a) - projected_rank(phi, b)) / 4.0;
}

} // namespace

TEST_CASE("normalize kernel") {
    MeasurementKernel id{Matrix::Identity(2, 2)};
    CHECK((normalize_kernel(id).matrix - Matrix::Identity(2, 2)).norm() < 1e-15);

    MeasurementKernel row{Matrix(1, 2)};
    row.matrix << 3, 4;
    row.tag = DesignTag::prop3;
    const auto n = normalize_kernel(row);
    CHECK(n.matrix(0, 0) == doctest::Approx(0.6));
    CHECK(n.matrix(0, 1) == doctest::Approx(0.8));
    CHECK(n.tag == DesignTag::prop3);

    const auto r = random_kernel(10, 64, 5);
    CHECK(std::abs((r.matrix.transpose() * r.matrix).trace() - 10.0) <= 1e-12);

    CHECK_THROWS_AS(normalize_kernel(MeasurementKernel{Matrix::Zero(2, 3)}), ValidationError);
}

TEST_CASE("random kernel") {
    const auto k = random_kernel(1, 1, 9);
    CHECK(std::abs(k.matrix(0, 0)) <= 1.0 + 1e-15);
    CHECK(k.tag == DesignTag::random);
    CHECK(k.seed == 9);
    CHECK((random_kernel(3, 5, 4).matrix - random_kernel(3, 5, 4).matrix).norm() == 0.0);
    CHECK_THROWS_AS(random_kernel(0, 5, 1), ValidationError);

    Rng rng(1);
    const Matrix sigma = random_subspace_covariance(64, 14, EigenSpectrum{}, rng);
    const auto k15 = random_kernel(15, 64, 2);
    CHECK(numerical_rank(k15.matrix * sigma * k15.matrix.transpose()) == 14);
    CHECK(projected_rank(k15.matrix, sigma) == 14);

    const auto model = random_model(64, 11, 14, 1);
    CHECK(exponent_report(model, random_kernel(10, 64, 3).matrix).exponent == 0.0);
}

TEST_CASE("scaling leaves ranks and exponents unchanged") {
    const auto model = random_model(12, 3, 4, 3);
    const auto k = random_kernel(6, 12, 4);
    for (double c : {1e-3, 7.0}) {
        const Matrix scaled = c * k.matrix;
        for (const auto& [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            const auto g1 = pair_geometry(k.matrix, model.covariance(a), model.covariance(b));
            const auto g2 = pair_geometry(scaled, model.covariance(a), model.covariance(b));
            CHECK(g1.rank_first == g2.rank_first);
            CHECK(g1.rank_joint == g2.rank_joint);
            CHECK(g1.exponent() == g2.exponent());
        }
    }
}

TEST_CASE("discriminant basis") {
    SUBCASE("hand case") {
        const SourceModel m({0.5, 0.5}, {diag({1, 0, 0, 0}), diag({0, 1, 0, 0})});
        const auto b = build_discriminant_basis(m);
        CHECK(b.shared_dim() == 2);
        CHECK(b.first_dim() == 1);
        CHECK(b.second_dim() == 1);
        CHECK(b.separation() == 2);
        CHECK(b.shared.topRows(2).norm() < 1e-12);
        CHECK(std::abs(std::abs(b.first(1, 0)) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(b.second(0, 0)) - 1.0) < 1e-12);
    }
    SUBCASE("random, N = 64, r = 14") {
        const auto m = random_model(64, 2, 14, 5);
        const auto b = build_discriminant_basis(m);
        CHECK(b.shared_dim() == 64 - 28);
        CHECK(b.first_dim() == 14);
        CHECK(b.second_dim() == 14);
        const Matrix phi0 = b.stacked();
        CHECK(phi0.rows() == 28);
        CHECK(projected_rank(phi0, m.covariance(0)) == 14);
        CHECK(projected_rank(phi0, m.covariance(0) + m.covariance(1)) == 28);

        Matrix n1(64, b.shared_dim() + b.first_dim());
        n1 << b.shared, b.first;
        CHECK((n1.transpose() * n1 - Matrix::Identity(n1.cols(), n1.cols())).norm() < 1e-10);
        CHECK((m.covariance(0) * n1).norm() < 1e-8);
        Matrix n2(64, b.shared_dim() + b.second_dim());
        n2 << b.shared, b.second;
        CHECK((n2.transpose() * n2 - Matrix::Identity(n2.cols(), n2.cols())).norm() < 1e-10);
        CHECK((m.covariance(1) * n2).norm() < 1e-8);
    }
    SUBCASE("random, N = 20, r = 14") {
        const auto b = build_discriminant_basis(random_model(20, 2, 14, 6));
        CHECK(b.shared_dim() == 0);
        CHECK(b.first_dim() == 6);
        CHECK(b.separation() == 12);
    }
    SUBCASE("degenerate and wrong class count") {
        const Matrix s = diag({1, 1, 0});
        CHECK_THROWS_AS(build_discriminant_basis(SourceModel({0.5, 0.5}, {s, s})), InfeasibleDesign);
        CHECK_THROWS_AS(build_discriminant_basis(random_model(6, 3, 2, 1)), ValidationError);
    }
}

TEST_CASE("single-measurement design") {
    SUBCASE("hand case") {
        const SourceModel m({0.5, 0.5}, {diag({1, 0, 0}), diag({0, 1, 0})});
        const auto k = design_single_measurement(m, 3);
        REQUIRE(k.measurements() == 1);
        CHECK(std::abs(k.matrix(0, 0)) < 1e-12);
        CHECK(std::abs(k.matrix(0, 1)) > 1e-6);
        CHECK(pairwise_exponent(k.matrix, m.covariance(0), m.covariance(1)) == 0.25);
    }
    SUBCASE("random model") {
        const auto m = random_model(64, 2, 14, 7);
        const auto k = design_single_measurement(m, 4);
        const Vector phi = k.matrix.row(0).transpose();
        CHECK((m.covariance(0) * phi).norm() < 1e-8);
        CHECK((m.covariance(1) * phi).norm() > 1e-3);
        CHECK(oracle_exponent(k.matrix, m.covariance(0), m.covariance(1)) == 0.25);
        CHECK(k.tag == DesignTag::prop3);
    }
    SUBCASE("degenerate") {
        const Matrix s = diag({1, 0, 0});
        CHECK_THROWS_AS(design_single_measurement(SourceModel({0.5, 0.5}, {s, s}), 1), InfeasibleDesign);
    }
}

TEST_CASE("two-class rate design") {
    const auto m = random_model(64, 2, 14, 8);
    SUBCASE("d0 = 0") {
        const auto k = design_two_class(m, 0.0, 1);
        CHECK(k.measurements() == 1);
        CHECK(oracle_exponent(k.matrix, m.covariance(0), m.covariance(1)) == 0.25);
    }
    SUBCASE("d0 = 1.2") {
        const auto k = design_two_class(m, 1.2, 2);
        CHECK(k.measurements() == 5);
        CHECK(oracle_exponent(k.matrix, m.covariance(0), m.covariance(1)) == 1.25);
    }
    SUBCASE("every feasible target is met with M / 4") {
        for (int q = 0; q < 28; ++q) {
            const double d0 = q / 4.0 + 0.1;
            if (d0 >= 7.0) break;
            const auto k = design_two_class(m, d0, static_cast<std::uint64_t>(q));
            CHECK(k.measurements() == q + 1);
            CHECK(pairwise_exponent(k.matrix, m.covariance(0), m.covariance(1)) == k.measurements() / 4.0);
        }
    }
    SUBCASE("d0 at R/4 is infeasible") {
        CHECK_THROWS_AS(design_two_class(m, 7.0, 1), InfeasibleDesign);
        CHECK_THROWS_AS(design_two_class(m, -0.5, 1), ValidationError);
    }
}

TEST_CASE("one-vs-all design") {
    SUBCASE("case i") {
        const auto m = random_model(64, 11, 14, 1);
        const auto k = design_one_vs_all(m, 10, 2);
        CHECK(k.measurements() == 10);
        const auto rep = exponent_report(m, k.matrix);
        CHECK(rep.exponent > 0.0);
        // Each row annihilates the covariance of some class.
        for (int row = 0; row < k.measurements(); ++row) {
            double best = 1e300;
            for (int c = 0; c < m.classes(); ++c)
                best = std::min(best, (m.covariance(c) * k.matrix.row(row).transpose()).norm());
            CHECK(best < 1e-8);
        }
    }
    SUBCASE("case ii") {
        const auto m = random_model(64, 12, 9, 1);
        CHECK(exponent_report(m, design_one_vs_all(m, 10, 3).matrix).exponent > 0.0);
    }
    SUBCASE("two classes, one row") {
        const auto m = random_model(16, 2, 5, 2);
        const auto k = design_one_vs_all(m, 1, 4);
        CHECK(oracle_exponent(k.matrix, m.covariance(0), m.covariance(1)) == 0.25);
    }
    SUBCASE("M > L is rejected") {
        CHECK_THROWS_AS(design_one_vs_all(random_model(8, 3, 2, 1), 4, 1), ValidationError);
        CHECK_THROWS_AS(design_one_vs_all(random_model(8, 3, 2, 1), 0, 1), ValidationError);
    }
}

TEST_CASE("design from allocation") {
    const auto m = random_model(12, 3, 4, 9);
    const std::vector<int> counts{2, 1, 0};
    const auto k = design_from_allocation(m, counts, 5);
    CHECK(k.measurements() == 3);
    CHECK((m.covariance(0) * k.matrix.topRows(2).transpose()).norm() < 1e-8);
    CHECK((m.covariance(1) * k.matrix.row(2).transpose()).norm() < 1e-8);
    const std::vector<int> too_many{9, 0, 0};
    CHECK_THROWS_AS(design_from_allocation(m, too_many, 5), InfeasibleDesign);
}

TEST_CASE("converse bound d <= min{M, R} / 4") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed);
        const int n = 4 + static_cast<int>(rng() % 12);
        const int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        const int mrows = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        const auto m = make_synthetic_model(n, 2, r, EigenSpectrum{}, rng);
        const int big_r = 2 * std::min(n - r, r);
        const auto k = seed % 2 ? random_kernel(mrows, n, seed) : design_two_class(m, (mrows - 1) % big_r / 4.0, seed);
        const double d = pairwise_exponent(k.matrix, m.covariance(0), m.covariance(1));
        CHECK(d <= std::min(k.measurements(), big_r) / 4.0);
    }
}

TEST_CASE("design tags round-trip") {
    for (auto t : {DesignTag::random, DesignTag::prop3, DesignTag::prop4, DesignTag::prop5, DesignTag::custom})
        CHECK(parse_design_tag(to_string(t)) == t);
    CHECK_THROWS_AS(parse_design_tag("prop9"), ValidationError);
}
