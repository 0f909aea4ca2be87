#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace compclass {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// All randomness flows through explicitly seeded engines of this type.
using Rng = std::mt19937_64;

// Bad input: malformed matrices, out-of-range parameters, unparsable files.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The requested measurement design does not exist for this source
// (degenerate geometry or an unreachable target exponent).
class InfeasibleDesign : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// SplitMix64 finalizer applied to (seed, stream). Used to key independent
// substreams, e.g. one engine per Monte Carlo trial, so results do not
// depend on execution order.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix_seed(seed, stream));
}

} // namespace compclass
