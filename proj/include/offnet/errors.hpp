#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace offnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Market parameters failed validation. Carries one message per violated invariant.
class InvalidParameters : public Error {
public:
    explicit InvalidParameters(std::vector<std::string> violations);

    const std::vector<std::string> &violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// An operation was called outside its domain (wrong number of CPs, wrong vector size, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The Nash product is undefined because one of the utilities is nonpositive.
class UndefinedObjective : public Error {
public:
    using Error::Error;
};

/// There is no positive surplus for the regulator to share.
class NoBargainingSurplus : public Error {
public:
    using Error::Error;
};

/// A hypothesis required by a solver does not hold.
class HypothesisViolated : public Error {
public:
    using Error::Error;
};

/// A required equilibrium does not exist for the given parameters.
class NonexistentEquilibrium : public Error {
public:
    using Error::Error;
};

/// A linear system that should be invertible was numerically singular.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// A finite-difference probe landed on a kink of a piecewise-smooth utility.
class BoundaryPoint : public Error {
public:
    using Error::Error;
};

} // namespace offnet
