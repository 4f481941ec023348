#ifndef GABOR_ERRORS_HPP
#define GABOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gabor {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter outside the mathematically admissible range (bad lattice,
/// invalid spline order, window not bounded below, ...).
class domain_error : public error {
public:
    using error::error;
};

/// Malformed request (bad flag combination, zero trials, unknown model name).
class usage_error : public error {
public:
    using error::error;
};

/// Missing or unreadable input file.
class io_error : public error {
public:
    using error::error;
};

/// An iterative numerical procedure failed to converge or detected an
/// inconsistency (e.g. frame iteration diverging under the claimed bounds).
class numeric_error : public error {
public:
    using error::error;
};

} // namespace gabor

#endif
