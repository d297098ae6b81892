#pragma once

#include <stdexcept>

namespace aed {

// Bad argument values: lengths, ranges, malformed text.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A request that would exceed a fixed size guard (codebook enumeration, m cap).
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

// Input outside the scope where an operation is defined (e.g. a
// non-decreasing code passed to a check that needs decreasing codes).
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace aed
