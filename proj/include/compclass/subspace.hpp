#pragma once

// Numerically robust rank, pseudo-determinant and subspace primitives.
//
// Every rank decision in the library goes through RankTolerance: an
// eigenvalue counts iff it exceeds relative_threshold * lambda_max.

#include "compclass/core.hpp"

namespace compclass {

struct RankTolerance {
    double relative_threshold = 1e-10;

    // Throws ValidationError unless the threshold is strictly positive.
    void validate() const;
};

// Eigen-decomposition of a symmetric matrix, eigenvalues nonincreasing.
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors; // columns, orthonormal

    // Number of eigenvalues above threshold * max(lambda_max, reference_scale).
    // A reference scale lets a matrix that is zero up to round-off (e.g. a
    // projection onto a null space) report rank 0.
    int rank(RankTolerance tol = {}, double reference_scale = 0.0) const;
};

// Throws ValidationError if ||A - A^T||_F > 1e-12 ||A||_F or A is not square.
void require_symmetric(const Matrix& a, const char* what = "matrix");

SpectralDecomposition spectral_decomposition(const Matrix& symmetric);

int numerical_rank(const Matrix& symmetric_psd, RankTolerance tol = {});

// Product of the eigenvalues counted by numerical_rank. The zero matrix has
// pseudo-determinant 1 (empty product).
double pseudo_determinant(const Matrix& symmetric_psd, RankTolerance tol = {});
double log_pseudo_determinant(const Matrix& symmetric_psd, RankTolerance tol = {});

// Orthonormal N x (N - rank) basis of Null(A).
Matrix null_space_basis(const Matrix& symmetric_psd, RankTolerance tol = {});

// Orthonormal N x rank basis of Im(A).
Matrix image_basis(const Matrix& symmetric_psd, RankTolerance tol = {});

// Rank of an arbitrary rectangular matrix: singular values s with
// s^2 > threshold * s_max^2 (the Gram-matrix eigenvalue rule).
int matrix_rank(const Matrix& a, RankTolerance tol = {});

// Largest singular value; 0 for an empty matrix.
double spectral_norm(const Matrix& a);

// Orthonormal basis of the column span of an arbitrary matrix.
Matrix column_space_basis(const Matrix& a, RankTolerance tol = {});

// dim(Im A ∩ Im B) = rank(A) + rank(B) - rank([A B]) for orthonormal A, B.
int subspace_intersection_dim(const Matrix& a, const Matrix& b, RankTolerance tol = {});

// Law for the nonzero eigenvalues of synthetic covariances.
struct EigenSpectrum {
    enum class Kind { fixed, uniform };
    Kind kind = Kind::uniform;
    double low = 0.5;
    double high = 1.5;

    static EigenSpectrum fixed(double value) { return {Kind::fixed, value, value}; }
    static EigenSpectrum uniform(double low, double high) { return {Kind::uniform, low, high}; }

    void validate() const;
    double draw(Rng& rng) const;
};

// N x k matrix with orthonormal columns spanning a Grassmann-uniform subspace.
Matrix random_orthonormal(int n, int k, Rng& rng);

// U diag(lambda) U^T with U Grassmann-uniform N x r and lambda drawn from the spectrum law.
Matrix random_subspace_covariance(int n, int r, const EigenSpectrum& spectrum, Rng& rng);

} // namespace compclass
