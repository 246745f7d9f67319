#pragma once

#include <stdexcept>
#include <string>

namespace hopf {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, non-finite data, empty ranges.
class InputError : public Error {
public:
    using Error::Error;
};

// Affine chart evaluated outside its domain (z0 == 0, non-null or non-timelike input).
class ChartError : public Error {
public:
    using Error::Error;
};

// Parameter outside the domain of a curve or patch.
class DomainError : public Error {
public:
    using Error::Error;
};

// |alpha| >= 2/r, or phi outside (-pi/2, pi/2).
class RegimeError : public Error {
public:
    using Error::Error;
};

// The contact equation solved for beta is singular where cos(mu) vanishes.
class SingularOdeError : public Error {
public:
    SingularOdeError(const std::string& what, double t) : Error(what), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

// zeta vanishes at a node the square-root branch has to pass through,
// or the continued branch jumps sign across a grid edge.
class BranchObstructionError : public Error {
public:
    BranchObstructionError(const std::string& what, std::size_t node)
        : Error(what), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

// Node not connected to the continuation base point.
class UnreachableNodeError : public Error {
public:
    UnreachableNodeError(const std::string& what, std::size_t node)
        : Error(what), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

// Tangent frame has rank below 2n-1.
class DegenerateFrameError : public Error {
public:
    using Error::Error;
};

// A geometric identity that must hold on a real hypersurface failed.
class GeometryError : public Error {
public:
    using Error::Error;
};

// Invalid run configuration; `path` is a JSON pointer to the offending field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace hopf
