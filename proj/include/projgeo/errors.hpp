#pragma once
#include <stdexcept>
#include <string>

namespace projgeo {

// Mismatched vector/set/norm dimensions or non-finite input.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation not defined for the given norm or set variant.
struct UnsupportedVariantError : std::domain_error {
    using std::domain_error::domain_error;
};

// A clipped sampling region missed the set, or bracket expansion failed.
struct ClipMissError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spherical projection outside the unimodal regime, perimeter bounds, etc.
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace projgeo
