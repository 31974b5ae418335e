#pragma once

#include <stdexcept>
#include <string>

namespace phs {

// Argument outside the mathematical domain of an operation (negative radius,
// non-positive scale, invalid kernel parameter).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed or inconsistent input data (ragged CSV rows, non-finite
// coordinates, dimension mismatches).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rejection sampler exhausted its proposal budget or the density violated
// its declared bound.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A deterministic point configuration could not be built.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Monomial matrix of an augmented system is rank deficient.
class AugmentationRankError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace phs
