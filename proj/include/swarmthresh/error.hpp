#pragma once

#include <stdexcept>
#include <string>

namespace swarmthresh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FileNotFound : Error {
    explicit FileNotFound(const std::string &path)
        : Error("file not found: " + path) {}
};

struct UnsupportedFormat : Error {
    explicit UnsupportedFormat(const std::string &path, const std::string &why)
        : Error("unsupported format (" + why + "): " + path) {}
};

struct CorruptImage : Error {
    explicit CorruptImage(const std::string &path, const std::string &why)
        : Error("corrupt image (" + why + "): " + path) {}
};

struct IoError : Error {
    explicit IoError(const std::string &path, const std::string &why)
        : Error("i/o error (" + why + "): " + path) {}
};

struct EmptyImage : Error {
    EmptyImage() : Error("image has zero pixels") {}
};

struct DimensionMismatch : Error {
    DimensionMismatch() : Error("image dimensions do not match") {}
};

struct TooExpensive : Error {
    explicit TooExpensive(const std::string &what) : Error(what) {}
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string &what) : Error(what) {}
};

} // namespace swarmthresh
