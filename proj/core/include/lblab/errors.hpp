#pragma once

#include <stdexcept>
#include <string>

namespace lblab {

// Parameter outside the region where a formula or construction is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A lemma-level invariant failed at run time (degree budget, spectral bound, ...).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IncompatibleOracle : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace lblab
