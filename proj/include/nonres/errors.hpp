#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nonres {

// Caller broke a documented operation precondition (as opposed to passing a
// malformed argument value).
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An invariant that the constructions guarantee failed anyway; indicates a
// corrupted context or a bug, never a caller error.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

// The integer being reduced has fewer divisors than the selection threshold.
struct too_few_divisors : precondition_error {
    std::uint64_t tau;
    std::uint64_t threshold;

    too_few_divisors(std::uint64_t tau_, std::uint64_t threshold_)
        : precondition_error("too few divisors: tau = " + std::to_string(tau_) +
                             ", need " + std::to_string(threshold_)),
          tau(tau_),
          threshold(threshold_) {}
};

}  // namespace nonres
