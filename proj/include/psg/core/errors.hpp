#pragma once

#include <stdexcept>
#include <string>

namespace psg {

// Base for every error raised by the library. Callers that only need to
// distinguish "our" failures from std ones can catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IllegalEvent : public Error {
public:
    using Error::Error;
};

class InvalidValue : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class GatewayError : public Error {
public:
    using Error::Error;
};

class FixtureMiss : public Error {
public:
    using Error::Error;
};

class MalformedOutput : public Error {
public:
    using Error::Error;
};

class DegenerateData : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class InsufficientGroups : public Error {
public:
    using Error::Error;
};

class InsufficientRounds : public Error {
public:
    using Error::Error;
};

class SingularDesign : public Error {
public:
    using Error::Error;
};

class DegenerateInput : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace psg
