#pragma once

// Experiment configuration: an INI-style file of [section] headers and
// "key = value" lines. '#' starts a comment. Keys are looked up as
// "section.key"; any key that the run does not consume is an error.

#include "mrlab/coefficients.hpp"
#include "mrlab/fem.hpp"
#include "mrlab/parabolic.hpp"
#include "mrlab/quasilinear.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mrlab {

class ConfigFile {
public:
    struct Entry {
        std::string value;
        int line;
    };

    static ConfigFile parse(std::istream& in);
    static ConfigFile parse_string(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    /// Marks the key as consumed. Throws ConfigError if missing.
    const Entry& get(const std::string& key) const;

    std::string text(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    double number(const std::string& key) const;
    long long integer(const std::string& key, long long fallback) const;
    std::vector<double> numbers(const std::string& key) const;

    /// Throws ConfigError naming the first key never consumed.
    void reject_unknown() const;
    /// Line of a key, or 0.
    int line_of(const std::string& key) const;

    const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> used_;
};

struct MeshConfig {
    std::string kind = "interval";  // interval | rect | file
    Index nx = 16;
    Index ny = 16;
    double lx = 1.0;
    double ly = 1.0;
    std::string path;
};

struct CoefficientConfig {
    std::string kind = "constant";  // constant | piecewise | moving_interface
    std::vector<std::vector<double>> matrices;
    std::vector<double> breakpoints;
    std::string shape = "interval";  // interval | disk | rect
    std::vector<double> center;
    std::vector<double> velocity;
    std::vector<double> size;
    double inside = 1.0;
    double outside = 2.0;
};

struct ForcingConfig {
    std::string profile = "sine";  // zero | constant | sine | pulse | random
    std::string spatial = "ones";  // ones | bump
    double amplitude = 1.0;
    std::uint64_t seed = 1;
};

struct RunConfig {
    MeshConfig mesh;
    std::string dirichlet = "all";
    CoefficientConfig coefficient;
    double horizon = 1.0;
    Index steps = 64;
    std::vector<double> extra_nodes;
    ForcingConfig forcing;
    double r = 2.0;
    double q = 2.0;
    double shift = 1.0;
    double alpha = 0.2;
    int probes = 16;
    std::uint64_t seed = 1;
    std::string reference = "duality";  // duality | field
    std::optional<FixedPointConfig> fixed_point;
    std::string sigma = "tanh";  // constant | tanh
    double sigma_center = 1.5;
    double sigma_amplitude = 0.5;
    std::string output_dir = "out";
};

/// Parses and validates; errors name the key and its line.
RunConfig parse_run_config(const ConfigFile& file);
RunConfig load_run_config(const std::string& path);

/// Objects built from a RunConfig.
struct Problem {
    P1Space space;
    CoefficientField field;
    TimeGrid grid;
    Forcing forcing;
};

Mesh build_mesh(const MeshConfig& cfg);
BoundaryPartition build_partition(const Mesh& mesh, const std::string& dirichlet);
CoefficientField build_field(const CoefficientConfig& cfg, int dimension, const Mesh& mesh, double horizon);
Forcing build_forcing(const ForcingConfig& cfg, const TimeGrid& grid, const P1Space& space);
SigmaFunction build_sigma(const RunConfig& cfg);
Problem build_problem(const RunConfig& cfg);

}  // namespace mrlab
