#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace ttkit {

enum class Strictness { Strict, Tolerant };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value fell outside the bounds its format allows.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Structural failure while decoding bytes or text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::uint64_t offset,
               std::string expected = {}, std::string actual = {})
        : Error(message),
          offset_(offset),
          expected_(std::move(expected)),
          actual_(std::move(actual)) {}

    std::uint64_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& actual() const noexcept { return actual_; }

private:
    std::uint64_t offset_;
    std::string expected_;
    std::string actual_;
};

class EmptyInput : public ParseError {
public:
    EmptyInput() : ParseError("empty input", 0) {}
};

/// A record violates its own invariants and cannot be serialized.
class ValidationError : public Error {
public:
    ValidationError(const std::string& message, std::size_t record_index, std::string field)
        : Error(message), record_index_(record_index), field_(std::move(field)) {}

    std::size_t record_index() const noexcept { return record_index_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t record_index_;
    std::string field_;
};

/// Text does not match the shape a decoder expects.
class FormatError : public Error {
public:
    FormatError(const std::string& message, std::string text)
        : Error(message), text_(std::move(text)) {}

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

}  // namespace ttkit
