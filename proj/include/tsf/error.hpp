#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotRealField : public Error {
public:
    using Error::Error;
};

class NotElliptic : public Error {
public:
    NotElliptic(const std::string& what, double smallest_eigenvalue)
        : Error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
    double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

private:
    double smallest_eigenvalue_;
};

class NotValidated : public Error {
public:
    using Error::Error;
};

class ZeroMode : public Error {
public:
    using Error::Error;
};

class NonPositiveMu : public Error {
public:
    using Error::Error;
};

/// Pivot collapse while eliminating a per-mode system; carries the offending lattice index.
class SingularSymbol : public Error {
public:
    SingularSymbol(const std::string& what, std::vector<int> mode)
        : Error(what), mode_(std::move(mode)) {}
    const std::vector<int>& mode() const noexcept { return mode_; }

private:
    std::vector<int> mode_;
};

class TooFewShells : public Error {
public:
    using Error::Error;
};

class UnknownSuite : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace tsf
