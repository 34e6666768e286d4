#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pyrafuse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Index outside the valid range of an axis.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// Invalid scalar parameter (sigma, radius, bias, rank, percentiles, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input too small (or too large) for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Operands whose dimensions or kinds disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Operation not available for the supplied input configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed file content. Carries the byte offset of the first inconsistency.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class UnsupportedFormatError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Failure of the operating system to read or write a file.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pyrafuse
