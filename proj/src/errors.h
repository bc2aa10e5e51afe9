#pragma once

#include <stdexcept>
#include <string>

namespace sharplab {

// Bad user-facing configuration (shapes, sizes, parameter ranges).  Messages
// name the offending field.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Geometric preconditions violated (contact angles, containment).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failed to converge or produced an uncertifiable result.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sharplab
