#pragma once

#include <stdexcept>
#include <string>

namespace imgctx {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input byte stream cannot be decoded with the requested encoding.
struct DecodeError : Error {
    explicit DecodeError(const std::string& msg) : Error(msg) {}
};

// Input decodes but contains no document content at all.
struct EmptyDocumentError : Error {
    explicit EmptyDocumentError(const std::string& msg) : Error(msg) {}
};

// A valid image has no countable text anywhere on its root path, so no
// segment satisfying the one-image-one-text rule exists.
struct NoSegmentError : Error {
    explicit NoSegmentError(const std::string& msg) : Error(msg) {}
};

// Structured data file (dataset, location table, lexicon) violates its schema.
struct FileFormatError : Error {
    explicit FileFormatError(const std::string& msg) : Error(msg) {}
};

}  // namespace imgctx
