#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "compclass/core.hpp"
#include "compclass/source_model.hpp"

namespace compclass {

// Provenance tags; the spelling of to_string() is the file/CLI format.
//   random  i.i.d. Gaussian rows
//   prop3   one row in N_1 (or N_2) outside N_1 ∩ N_2, two classes
//   prop4   rows drawn from the two-class discriminant basis
//   prop5   one-vs-all: one null-space row per class of a random permutation
enum class DesignTag { random, prop3, prop4, prop5, custom };

std::string_view to_string(DesignTag tag);
DesignTag parse_design_tag(std::string_view text);

// An M x N measurement matrix.
struct MeasurementKernel {
    Matrix matrix;
    DesignTag tag = DesignTag::custom;
    std::uint64_t seed = 0;

    int measurements() const { return static_cast<int>(matrix.rows()); }
    int ambient_dim() const { return static_cast<int>(matrix.cols()); }
};

// Rescales so that trace(Phi^T Phi) = M. Ranks and decay exponents are
// unchanged by the scaling.
MeasurementKernel normalize_kernel(MeasurementKernel kernel);

// I.i.d. standard normal entries, normalized.
MeasurementKernel random_kernel(int m, int n, std::uint64_t seed);

// Orthonormal blocks spanning the two-class null-space geometry:
//   shared  basis of N_1 ∩ N_2
//   first   completion of `shared` to a basis of N_1 (orthogonal to shared)
//   second  completion of `shared` to a basis of N_2
// The discriminant basis stacks [first second]^T; it has
// separation() = cols(first) + cols(second) rows.
struct DiscriminantBasis {
    Matrix shared;
    Matrix first;
    Matrix second;

    int shared_dim() const { return static_cast<int>(shared.cols()); }
    int first_dim() const { return static_cast<int>(first.cols()); }
    int second_dim() const { return static_cast<int>(second.cols()); }
    int separation() const { return first_dim() + second_dim(); }
    Matrix stacked() const;
};

// Throws InfeasibleDesign when both completions are empty (N_1 = N_2).
DiscriminantBasis build_discriminant_basis(const SourceModel& model, RankTolerance tol = {});

// Single measurement phi^T with phi in N_1 \ (N_1 ∩ N_2), or in N_2 when
// the first completion is empty. Pairwise exponent 1/4 on generic sources.
MeasurementKernel design_single_measurement(const SourceModel& model, std::uint64_t seed,
                                            RankTolerance tol = {});

// floor(4 d0) + 1 rows of the discriminant basis, split between the two
// blocks uniformly at random among valid splits. Achieves exponent M/4 > d0.
// Throws InfeasibleDesign when d0 >= separation/4.
MeasurementKernel design_two_class(const SourceModel& model, double d0, std::uint64_t seed,
                                   RankTolerance tol = {});

// One-vs-all design: row k is a random unit vector of N_{pi(k)} for a seeded
// random permutation pi. Requires 1 <= M <= L.
MeasurementKernel design_one_vs_all(const SourceModel& model, int m, std::uint64_t seed,
                                    RankTolerance tol = {});

// counts[i] random unit vectors from N_i for every class (kernel rows grouped
// by class). Sum of counts must be >= 1 and counts[i] <= dim N_i.
MeasurementKernel design_from_allocation(const SourceModel& model, std::span<const int> counts,
                                         std::uint64_t seed, RankTolerance tol = {});

// Dispatch for the sweep designs: random or prop5 with M rows.
MeasurementKernel make_kernel(const SourceModel& model, DesignTag tag, int m, std::uint64_t seed,
                              RankTolerance tol = {});

} // namespace compclass
