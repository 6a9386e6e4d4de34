#pragma once

// Implicit Euler for u' + (A(t) + shift * I) u = f, u(0) = 0, with
// energy and a priori diagnostics and empirical maximal-regularity constants.

#include "mrlab/coefficients.hpp"
#include "mrlab/fem.hpp"
#include "mrlab/norms.hpp"
#include "mrlab/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mrlab {

/// One dual vector per grid node; entry 0 is ignored (right-endpoint rule).
using Forcing = std::vector<Vector>;

Forcing zero_forcing(const TimeGrid& grid, Index dofs);

/// f_k = amplitude(t_k) * M * I_h(profile): the L^2 pairing with the nodal
/// interpolant of a spatial profile.
Forcing forcing_from_profile(const TimeGrid& grid, const P1Space& space,
                             const std::function<double(double)>& amplitude,
                             const std::function<double(const Point&)>& profile);

/// Stiffness matrix of the step ending at t_k, k = 1..N.
using StiffnessAt = std::function<SparseMatrix(Index k)>;

/// Stiffness of the field sampled at the right endpoint of each step.
StiffnessAt field_stiffness(const CoefficientField& field, const TimeGrid& grid, const P1Space& space);

/// Factorized step matrices M + dt_k (K_k + shift M). Consecutive steps with
/// equal dt and identical K share one factorization.
class ImplicitEuler {
public:
    ImplicitEuler(const StiffnessAt& stiffness, TimeGrid grid, const P1Space& space, double shift);

    Trajectory solve(const Forcing& f) const;

    const TimeGrid& grid() const noexcept { return grid_; }
    double shift() const noexcept { return shift_; }
    const SparseMatrix& stiffness(Index k) const { return *stiffness_[static_cast<std::size_t>(k - 1)]; }

private:
    TimeGrid grid_;
    const P1Space* space_;
    double shift_;
    std::vector<std::shared_ptr<const SparseMatrix>> stiffness_;
    std::vector<std::shared_ptr<const LinearSolver>> steps_;
};

/// Throws std::invalid_argument if a jump time of the field is missing from
/// the grid or shift < 0.
Trajectory solve_nonautonomous(const CoefficientField& field, const Forcing& f, const TimeGrid& grid,
                               const P1Space& space, double shift = 1.0);

/// residual_k = 1/2 u_k^T M u_k + sum_{j<=k} dt_j u_j^T (K_j + shift M) u_j
///              - sum_{j<=k} dt_j f_j^T u_j.
std::vector<double> energy_residual(const Trajectory& traj, const StiffnessAt& stiffness, const Forcing& f,
                                    const P1Space& space, double shift);
std::vector<double> energy_residual(const Trajectory& traj, const CoefficientField& field, const Forcing& f,
                                    const P1Space& space, double shift = 1.0);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;       // constant * ||f||
    double constant = 0.0;
    double ratio = 0.0;     // lhs / rhs, 0 when rhs = 0
};

/// The three Lions estimates with q = r = 2 discrete norms:
///   ||u||_{L^2(V)}   <= (1/c_lower) ||f||
///   ||u'||_{L^2(V*)} <= (1 + c_upper/c_lower) ||f||
///   ||u||_{MR}       <= (1 + c_lower + c_upper)/c_lower ||f||
/// `bounds` are the coercivity/boundedness constants of the full form
/// (coefficient plus shift) relative to the W^{1,2} norm.
struct AprioriReport {
    double forcing_norm = 0.0;
    InequalityCheck state;
    InequalityCheck derivative;
    InequalityCheck maximal_regularity;
    bool pass = true;  // every ratio <= 1 + 5e-2
};

AprioriReport apriori_check(const Trajectory& traj, const Forcing& f, const P1Space& space,
                            const EllipticityBounds& bounds);

/// Form constants of mu + shift * I in the W^{1,2} norm: (min(c_lower, shift), max(c_upper, shift)).
EllipticityBounds form_bounds(const EllipticityBounds& coefficient, double shift);

/// Probe forcings: the three lowest generalized eigenmodes of (K, M)
/// (symmetric part of K), constant in time, followed by `random_probes`
/// seeded probes of the form indicator([a, b]) x random functional. The
/// random probes for n are a prefix of those for any m > n.
std::vector<Forcing> make_probes(const SparseMatrix& k, const TimeGrid& grid, const P1Space& space,
                                 int random_probes, std::uint64_t seed);

struct ConstantEstimate {
    double value = 0.0;
    std::size_t best_probe = 0;
    std::vector<double> ratios;
    bool converged = true;
};

/// max over probes of mr_norm(u, r, 2) / ||f||_{L^r(J; W^{-1,2})}: a lower
/// bound of the discrete inverse norm of d/dt + K + shift M.
ConstantEstimate estimate_mr_constant(const StiffnessAt& stiffness, double r, const TimeGrid& grid,
                                      const P1Space& space, int probes, std::uint64_t seed, double shift = 1.0);

/// Same for the duality map itself (K = identity stiffness, shift 1).
ConstantEstimate estimate_reference_constant(double r, const TimeGrid& grid, const P1Space& space, int probes,
                                             std::uint64_t seed);

struct Window {
    double lo;
    double hi;
};

struct MrRatioReport {
    double max_tilde_ratio = 0.0;  // ||(d/dt + J) u||_{L^r(W^{-1,2})} / ||f||_{L^r(W^{-1,2})}
    double max_mr_ratio = 0.0;     // mr_norm(u, r, q) / ||f||_{L^r(W^{-1,q})}
    double bound = 0.0;            // 8 (1 + c_lower + c_upper) / c_lower
    bool r_in_window = false;
    bool dual_converged = true;
    bool pass = true;              // tilde ratio <= bound, checked only inside the window
    std::size_t probes = 0;
};

MrRatioReport mr_ratio_report(const CoefficientField& field, double r, double q, const TimeGrid& grid,
                              const P1Space& space, int probes, std::uint64_t seed,
                              std::optional<Window> window = std::nullopt, double shift = 1.0);

}  // namespace mrlab
