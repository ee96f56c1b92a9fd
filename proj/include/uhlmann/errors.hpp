// Exception hierarchy for the uhlmann library. Every failure mode raised by
// the library derives from uhlmann::Error so callers can catch one base type;
// scan drivers map specific kinds to exit codes and per-cell error columns
// through kind().
#pragma once

#include <stdexcept>
#include <string>

namespace uhlmann {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

// Gap closed at (or below tolerance of) a sampled momentum; winding and
// holonomy are undefined at criticality.
class GapClosed : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "GapClosed"; }
};

// Adjacent unwrapped angles jumped by more than pi/2; the momentum grid is
// too coarse to track the Bloch vector continuously.
class UnwrapFailure : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "UnwrapFailure"; }
};

class NonFiniteInput : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "NonFiniteInput"; }
};

// An intermediate exponent left the range where the dense matrix-function
// oracle is numerically meaningful.
class IllConditioned : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "IllConditioned"; }
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "QuadratureFailure"; }
};

class NoConvergence : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "NoConvergence"; }
};

// arg Tr(rho_pi U) is requested while the trace is numerically zero; the
// phase is genuinely undefined exactly at the step temperature.
class DegeneratePhase : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "DegeneratePhase"; }
};

class SingularPolar : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "SingularPolar"; }
};

class UnsupportedModel : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "UnsupportedModel"; }
};

class DivisionByZero : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "DivisionByZero"; }
};

class InvalidSpec : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "InvalidSpec"; }
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "IoError"; }
};

class MalformedCsv : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "MalformedCsv"; }
};

} // namespace uhlmann
