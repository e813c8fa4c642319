#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace structeval {

/// Malformed JSON text. `position` is a byte offset into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, std::string reason)
        : std::runtime_error("JSON parse error at byte " + std::to_string(position) + ": " + reason),
          position_(position), reason_(std::move(reason)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t position_;
    std::string reason_;
};

/// No parsable JSON span was found by lenient extraction.
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Remote service unreachable, timed out, or returned a non-2xx status.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Remote service answered, but the body does not follow the wire protocol.
class MalformedResponse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file is structurally wrong (too many malformed lines, empty dataset, ...).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Predictions cannot be joined with dataset records.
class JoinError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace structeval
