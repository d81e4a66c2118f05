#ifndef RSPEC_ERRORS_HPP
#define RSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rspec {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Derivative order requested beyond what the profile kind supports.
class UnsupportedDerivativeOrder : public Error {
public:
    using Error::Error;
};

// Profile slope never becomes negative, so characteristics never cross.
class NoBreaking : public Error {
public:
    using Error::Error;
};

// Single-valued evaluation requested at a time past the breaking time.
class PostBreaking : public Error {
public:
    using Error::Error;
};

// Iterative solve failed to reach its tolerance within the iteration cap.
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

// Power-law fit window extends beyond the validity of the local expansion.
class WindowTooWide : public Error {
public:
    using Error::Error;
};

// Speed map is not strictly increasing on the sampled value range.
class NotInvertible : public Error {
public:
    using Error::Error;
};

// Initial data for a zero-mean model carries a nonzero mean.
class NonZeroMean : public Error {
public:
    using Error::Error;
};

// Solution amplitude exploded past the instability guard during time stepping.
class BlowUp : public Error {
public:
    using Error::Error;
};

// Field is identically zero; spectral quantities are undefined.
class ZeroField : public Error {
public:
    using Error::Error;
};

// Fewer usable spectral bins in the fit band than the fit requires.
class InsufficientBins : public Error {
public:
    using Error::Error;
};

// Malformed configuration file, unknown key, or invalid CLI usage.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A report references an output file that does not exist.
class MissingArtifact : public Error {
public:
    using Error::Error;
};

} // namespace rspec

#endif
