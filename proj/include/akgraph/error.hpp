#pragma once

#include <stdexcept>
#include <string>

namespace akgraph {

// Malformed instance data: asymmetric weights, wrong sizes, bad parameters.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A modelling hypothesis fails, e.g. rho <= lambda0 (1 - gamma).
class AssumptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a formula (e.g. <k, b0> <= 0).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-convergence, non-finite state, loss of positivity in a numeric result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace akgraph
