#pragma once

#include <stdexcept>
#include <string>

namespace pdw {

// Every failure raised by the library derives from Error. The CLI maps
// DomainError to exit code 3; everything else is reported as-is.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter or argument outside the admissible region (e.g. alpha <= (d-1)/2).
class DomainError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class EigenFailure : public Error {
public:
    using Error::Error;
};

class SingularTransform : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature stopped at its subdivision budget.
class QuadratureNoConvergence : public Error {
public:
    QuadratureNoConvergence(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

// A matrix entry left the representable range (divergent walk regime).
class StepOverflow : public Error {
public:
    using Error::Error;
};

// Series truncation hit max_terms before the stopping rule fired.
class TruncationFailure : public Error {
public:
    TruncationFailure(const std::string& what, double achieved_ratio)
        : Error(what), achieved_ratio_(achieved_ratio) {}
    double achieved_ratio() const noexcept { return achieved_ratio_; }

private:
    double achieved_ratio_;
};

class EmptySample : public Error {
public:
    using Error::Error;
};

class InsufficientBinCount : public Error {
public:
    using Error::Error;
};

}  // namespace pdw
