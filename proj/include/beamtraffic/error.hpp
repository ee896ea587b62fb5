#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beamtraffic {

// Base for every recoverable error raised by the library. The CLI maps these
// to exit code 1; InvariantViolation maps to 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)),
          line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class TimestampError : public ParseError {
public:
    using ParseError::ParseError;
};

class NegativePopulation : public ParseError {
public:
    using ParseError::ParseError;
};

class CollinearInput : public Error {
public:
    CollinearInput() : Error("all input points are collinear") {}
};

class DegenerateFootprint : public Error {
public:
    DegenerateFootprint(int beam_id, const std::string& why)
        : Error("beam " + std::to_string(beam_id) + ": degenerate footprint: " + why),
          beam_id_(beam_id) {}

    int beam_id() const noexcept { return beam_id_; }

private:
    int beam_id_;
};

class EmptyPattern : public Error {
public:
    EmptyPattern() : Error("beam pattern has no samples") {}
};

class MismatchedBeams : public Error {
public:
    using Error::Error;
};

class UnknownUser : public Error {
public:
    explicit UnknownUser(std::size_t user)
        : Error("unknown user index " + std::to_string(user)) {}
};

class BadThresholds : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

// An internal consistency check failed; indicates a bug rather than bad input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace beamtraffic
