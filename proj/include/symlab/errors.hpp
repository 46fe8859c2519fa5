#pragma once

#include <stdexcept>
#include <string>

namespace symlab {

// Base class for all recoverable failures raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A point query left the evaluable domain of a field with no declared tail.
class OutsideDomain : public Error {
public:
    using Error::Error;
};

// Requested integral does not converge for the declared tail decay.
class DivergentTail : public Error {
public:
    using Error::Error;
};

// Kelvin-transformed field queried inside its excluded ball around the origin.
class SingularOrigin : public Error {
public:
    using Error::Error;
};

class ResolutionTooCoarse : public Error {
public:
    using Error::Error;
};

class NewtonDiverged : public Error {
public:
    using Error::Error;
};

class NegativeSolution : public Error {
public:
    using Error::Error;
};

class NoGroundState : public Error {
public:
    using Error::Error;
};

class NonConvergent : public Error {
public:
    using Error::Error;
};

class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

class NegativeKappa : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class NeverSymmetric : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent FLD1 file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace symlab
