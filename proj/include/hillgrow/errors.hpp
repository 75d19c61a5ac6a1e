#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hillgrow {

// Malformed configuration: bad distribution parameters, unparseable config
// text, unusable CLI arguments. The CLI maps this family to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition was broken by the caller (mismatched compose
// arguments, asymmetric matrix handed to the factorizer).
struct contract_violation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// g = 0 makes the (h, g) cycle description degenerate; the period map
// cannot be rebuilt from it except on the |h| = 1 boundary.
struct degenerate_input_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Operation applied to a cycle in the wrong stability class, e.g. the
// rotation normal form requested for an unstable cycle.
struct wrong_regime_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A formula was evaluated outside its mathematical domain: log of a
// non-positive value, negative discriminant, fluctuation touching -1.
struct numeric_domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// The growth-factor recursion hit a vanishing denominator. Carries the
// index of the offending cycle so long runs can report where they died.
struct singular_step_error : std::runtime_error {
    std::size_t cycle_index;
    singular_step_error(const std::string& msg, std::size_t index)
        : std::runtime_error(msg), cycle_index(index) {}
};

// A renormalized product lost all scale information (zero matrix or
// non-finite entries after a multiply).
struct numeric_overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The ODE integrator failed its consistency targets even after the
// step-halving schedule was exhausted.
struct integration_accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Not enough input for a meaningful answer: too few cycles requested,
// too few oscillations in a trace.
struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recognized but unsupported request, e.g. a closed-form moment that
// does not exist for the distribution.
struct not_implemented_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace hillgrow
