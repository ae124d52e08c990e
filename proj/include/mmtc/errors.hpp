#pragma once

#include <stdexcept>
#include <string>

namespace mmtc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace mmtc
