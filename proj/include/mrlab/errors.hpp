#pragma once

#include <stdexcept>
#include <string>

namespace mrlab {

/// Malformed mesh data: bad indices, degenerate cells, non-manifold facets.
class MeshError : public std::runtime_error {
public:
    MeshError(const std::string& what, long cell = -1)
        : std::runtime_error(what), cell_(cell) {}
    /// Offending cell index, or -1 when the problem is not cell-local.
    long cell() const noexcept { return cell_; }

private:
    long cell_;
};

/// Linear solver failure. Carries the relative residual of the best attempt.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Configuration file problem; names the offending key and line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key = {}, int line = 0)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

}  // namespace mrlab
