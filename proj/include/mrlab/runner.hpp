#pragma once

// Experiment runners behind the command-line subcommands. Each returns the
// JSON report; file-writing variants also emit CSV outputs into a directory.

#include "mrlab/config.hpp"
#include "mrlab/extrapolation.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace mrlab {

inline constexpr const char* kVersion = "0.1.0";

/// Solve + energy, a priori, Hoelder and reference-constant diagnostics.
/// Criteria: A1 (a priori ratios), A2 (energy dissipativity), A3 (reference
/// constant <= 3), ellipticity. Writes trajectory.csv and report.json when
/// `out_dir` is given.
nlohmann::json run_solve(const RunConfig& cfg, const std::optional<std::string>& out_dir);

struct WindowRequest {
    double c_lower = 1.0;
    double c_upper = 1.0;
    double c = 3.0;
    std::optional<double> s;   // kappa mode when set
    double r0 = 4.0;           // Hilbert mode exponents
    double r1 = 4.0 / 3.0;
    WindowMode mode = WindowMode::isomorphism;
    bool c_is_estimate = false;
};

/// Kappa mode: {kappa, r0, window, bound}; Hilbert mode: {theta, radius,
/// window, bound, mode}. Windows from an estimated (lower-bound) constant
/// are labelled "optimistic".
nlohmann::json run_window(const WindowRequest& req);

/// Maximal-regularity constant estimate for the duality map or the field.
nlohmann::json run_estimate(const RunConfig& cfg, const std::optional<std::string>& out_dir);

/// Fixed-point solve. Writes trajectory.csv, history.csv and report.json.
nlohmann::json run_quasilinear(const RunConfig& cfg, const std::optional<std::string>& out_dir);

/// Input echo of a run configuration.
nlohmann::json config_to_json(const RunConfig& cfg);

/// Serialized report followed by a newline.
std::string dump_report(const nlohmann::json& report);

}  // namespace mrlab
