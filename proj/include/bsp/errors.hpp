#pragma once

#include <stdexcept>
#include <string>

namespace bsp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct ConstraintError : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct SingularInput : Error {
    using Error::Error;
};

struct TooLarge : Error {
    using Error::Error;
};

struct CapExceeded : Error {
    using Error::Error;
};

struct EmptyBin : Error {
    using Error::Error;
};

struct PoleTooClose : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace bsp
