#pragma once

#include <stdexcept>
#include <string>

namespace tcsim {

// Requested a below-threshold-only quantity at or above x = 2E/(N Omega) = 1.
struct AboveThresholdError : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested an above-threshold-only quantity below x = 1.
struct BelowThresholdError : std::domain_error {
    using std::domain_error::domain_error;
};

// 2 chi / N > 1 leaves the semiclassical fixed point undefined.
struct NoFixedPointError : std::domain_error {
    using std::domain_error::domain_error;
};

// Eigenstate continuation lost the tracked state.
struct ContinuationError : std::runtime_error {
    ContinuationError(double x_at, double overlap_at, const std::string& what_arg)
        : std::runtime_error(what_arg), x(x_at), overlap(overlap_at) {}
    double x;
    double overlap;
};

// Adaptive step size underflowed.
struct StiffnessError : std::runtime_error {
    StiffnessError(double t_at, const std::string& what_arg)
        : std::runtime_error(what_arg), t(t_at) {}
    double t;
};

// A runtime accuracy monitor tripped (e.g. master-equation trace drift).
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested evolution does not fit in the truncated Fock space.
struct TruncationError : std::runtime_error {
    TruncationError(int n_max_needed, const std::string& what_arg)
        : std::runtime_error(what_arg), n_max_required(n_max_needed) {}
    int n_max_required;
};

}
