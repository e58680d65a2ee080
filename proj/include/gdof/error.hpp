#pragma once

#include <stdexcept>
#include <string>

namespace gdof {

// Base for every recoverable error raised by the library. The CLI maps
// these onto exit code 2 (configuration) unless stated otherwise.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A position-wise digit sum reached Q: the superposed signals violate the
// digit-alphabet restriction that keeps addition carry free.
class CarryOverflow : public Error {
public:
    using Error::Error;
};

class AlphaOneUnsupported : public Error {
public:
    using Error::Error;
};

class BaseTooSmall : public Error {
public:
    using Error::Error;
};

class RegimeUnsupported : public Error {
public:
    using Error::Error;
};

class AlphabetEmpty : public Error {
public:
    using Error::Error;
};

class MessageMismatch : public Error {
public:
    using Error::Error;
};

// The successive-cancellation schedule stalled before resolving every
// information digit. Only reachable for malformed layouts.
class UndecodableLayout : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

} // namespace gdof
