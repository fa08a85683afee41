#pragma once

#include <stdexcept>
#include <string>

namespace agg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (grid size, non-finite sample, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A closed-form expression was evaluated past its blow-up denominator.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested step exceeds the CFL or reaction guard.
class StepTooLarge : public Error {
public:
    StepTooLarge(double requested, double admissible)
        : Error("time step " + std::to_string(requested) + " exceeds admissible " +
                std::to_string(admissible)),
          requested_dt(requested), admissible_dt(admissible) {}

    double requested_dt;
    double admissible_dt;
};

/// The run approaches the existence horizon (|sigma2| t ||rho||_inf -> 1).
class BlowupImminent : public Error {
public:
    using Error::Error;
};

/// Nonnegative data developed an undershoot below the monitored floor.
class PositivityViolated : public Error {
public:
    using Error::Error;
};

class GridTooLarge : public Error {
public:
    using Error::Error;
};

class NonMonotoneTime : public Error {
public:
    using Error::Error;
};

class MisalignedGrids : public Error {
public:
    using Error::Error;
};

class DegenerateX : public Error {
public:
    using Error::Error;
};

class FitDegenerate : public Error {
public:
    using Error::Error;
};

class RequiresNonconservativeCase : public Error {
public:
    using Error::Error;
};

/// Malformed binary field dump.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Config text error with the 1-based line it occurred on (0 = not line specific).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line(line), reason(reason) {}

    int line;
    std::string reason;
};

}  // namespace agg
