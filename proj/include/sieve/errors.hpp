#pragma once

#include <stdexcept>
#include <string>

namespace sieve {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Request exceeds a configured size cap or a table limit.
class SizeError : public Error {
public:
    using Error::Error;
};

// A truncation could not reach the requested tolerance. `bound` is the best
// certified error that was achievable.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double bound) : Error(what), bound_(bound) {}
    double bound() const noexcept { return bound_; }

private:
    double bound_;
};

// Quadrature or eigensolver failure.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double residual = 0.0) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Wall-clock budget of a check or suite exhausted.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace sieve
