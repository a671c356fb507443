#pragma once

#include <stdexcept>
#include <string>

namespace expcircle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Map construction / certification failures. The CLI maps these to exit code 2.
class MapError : public Error {
public:
    using Error::Error;
};

class NotExpanding : public MapError {
public:
    using MapError::MapError;
};

class DegreeMismatch : public MapError {
public:
    using MapError::MapError;
};

class InvalidMap : public MapError {
public:
    using MapError::MapError;
};

class RootFindingFailure : public Error {
public:
    using Error::Error;
};

class ArcViolation : public Error {
public:
    using Error::Error;
};

class ResolutionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidGrid : public Error {
public:
    using Error::Error;
};

class NonPositiveDensity : public Error {
public:
    using Error::Error;
};

/// Iteration budget exhausted. The CLI maps this to exit code 3.
class NoConvergence : public Error {
public:
    using Error::Error;
};

class InvalidAlpha : public Error {
public:
    using Error::Error;
};

/// A density dropped below the regeneration weight, so the coupling split
/// would produce a negative residual.
class FloorViolation : public Error {
public:
    using Error::Error;
};

class NotInvariant : public Error {
public:
    using Error::Error;
};

class ZeroObservable : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace expcircle
