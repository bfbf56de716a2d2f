// Shared scalar/matrix aliases and error types used across the library.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace qcex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnboundedSupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotCertifiablyPolyhedralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FaceCapExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoNonzeroDirectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DepthExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FeasibilityViolatedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankThresholdAmbiguousError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SystemInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64, used to derive independent per-task RNG seeds.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace qcex
