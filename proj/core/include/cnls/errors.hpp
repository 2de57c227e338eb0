#ifndef CNLS_ERRORS_HPP
#define CNLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cnls {

/// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad dimension, supercritical
/// exponent, mismatched grids, ...).
class precondition_error : public error {
public:
    using error::error;
};

/// A computation failed numerically (no bracket, resonant truncation radius,
/// singular matrix, divergence, non-convergence).
class numerical_error : public error {
public:
    using error::error;
};

} // namespace cnls

#endif
