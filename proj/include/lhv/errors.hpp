#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lhv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension N < 2, or a phase vector whose length disagrees with N.
class InvalidDimension : public Error {
public:
    using Error::Error;
};

/// Noise fraction outside [0, 1] or not finite.
class InvalidNoise : public Error {
public:
    using Error::Error;
};

/// Malformed input: NaN entries, bad indices, inconsistent shapes.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A problem too large for the dense enumeration or the dense solver.
class SizeLimitExceeded : public Error {
public:
    using Error::Error;
};

/// The LP engine could not produce a usable answer.
class SolverFailure : public Error {
public:
    using Error::Error;
};

/// Syntax or evaluation error in a phase expression or config file.
/// `offset` is the zero-based character offset of the fault.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace lhv
