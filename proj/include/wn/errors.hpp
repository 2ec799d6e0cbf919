#pragma once

#include <stdexcept>
#include <string>

namespace wn {

// Every failure raised by the library derives from Error so the CLI can map
// categories to exit codes without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad caller input: shapes, ranges, malformed files.
class InputError : public Error { using Error::Error; };
class ShapeError : public InputError { using InputError::InputError; };
class DomainError : public InputError { using InputError::InputError; };
class ConfigError : public InputError { using InputError::InputError; };
class DataError : public InputError { using InputError::InputError; };
class UnsupportedError : public InputError { using InputError::InputError; };

// Input that is well-formed but mathematically unrealizable.
class InfeasibleError : public Error { using Error::Error; };
class GeometryError : public InfeasibleError { using InfeasibleError::InfeasibleError; };
class LyapunovError : public InfeasibleError { using InfeasibleError::InfeasibleError; };
class StructureError : public InfeasibleError { using InfeasibleError::InfeasibleError; };
class InfeasibleTargets : public InfeasibleError { using InfeasibleError::InfeasibleError; };
class NotAComplex : public InfeasibleError { using InfeasibleError::InfeasibleError; };
class StateError : public InfeasibleError { using InfeasibleError::InfeasibleError; };

// A computed certificate or invariant did not hold.
class CertificateError : public Error { using Error::Error; };
class InvariantViolation : public CertificateError { using CertificateError::CertificateError; };
class ConventionError : public CertificateError { using CertificateError::CertificateError; };

// Numerical machinery failed to produce a trustworthy number.
class NumericalError : public Error { using Error::Error; };
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::string raw)
        : NumericalError(what), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }
private:
    std::string raw_;
};

}  // namespace wn
