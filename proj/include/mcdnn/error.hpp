#pragma once

#include <stdexcept>
#include <string>

namespace mcdnn {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid tensor shapes, extent mismatches between layers, bad ranges.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Descriptor / preprocessor-chain / config text that does not parse or validate.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Broken or inconsistent data files (IDX, CIFAR, MCDS, PNM, model files).
struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// A runtime invariant was violated (stale caches, empty ensembles, ...).
struct StateError : Error {
    explicit StateError(const std::string& msg) : Error(msg) {}
};

} // namespace mcdnn
