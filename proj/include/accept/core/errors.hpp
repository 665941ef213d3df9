// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace accept {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct EncodingError : Error {
    using Error::Error;
};

struct DecodeError : Error {
    using Error::Error;
};

struct InvalidInput : Error {
    using Error::Error;
};

struct InsufficientShares : Error {
    using Error::Error;
};

struct InsufficientFunds : Error {
    using Error::Error;
};

} // namespace accept
