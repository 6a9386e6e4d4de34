#pragma once

// Damped Picard iteration for u' + A_2(sigma(u) mu_t) u + u = f, u(0) = 0:
// v_{n+1} = (1 - w) v_n + w Psi(v_n), where Psi(v) solves the linear problem
// with the frozen coefficient sigma(v) mu.

#include "mrlab/coefficients.hpp"
#include "mrlab/parabolic.hpp"

#include <functional>
#include <vector>

namespace mrlab {

/// Scalar nonlinearity with declared range [lower, upper], 0 < lower <= upper.
class SigmaFunction {
public:
    SigmaFunction(std::function<double(double)> f, double lower, double upper);

    double operator()(double x) const { return f_(x); }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

    /// Samples [-range, range] at `samples` points; false if an output leaves
    /// [lower - 1e-12, upper + 1e-12] or two neighbours differ by more than
    /// `jump_tol`.
    bool check(double range = 10.0, int samples = 10001, double jump_tol = 1e-2) const;

private:
    std::function<double(double)> f_;
    double lower_;
    double upper_;
};

SigmaFunction constant_sigma(double c);
/// center + amplitude * tanh(x), range [center - |amplitude|, center + |amplitude|].
SigmaFunction tanh_sigma(double center, double amplitude);

struct FixedPointConfig {
    double tolerance = 1e-10;
    int max_iterations = 50;
    double damping = 1.0;
};

struct FixedPointResult {
    Trajectory solution;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;  // C(J; L^2) distance between successive iterates
    std::vector<double> damping;  // damping used at each iteration
};

/// Per-step stiffness of the frozen coefficient sigma(v(t_k, x_c)) mu(t_k, x_c)
/// at cell barycenters x_c.
StiffnessAt frozen_stiffness(const Trajectory& v, const CoefficientField& field, const SigmaFunction& sigma,
                             const P1Space& space);

/// Psi(v): linear solve with the frozen coefficient and shift 1.
Trajectory apply_psi(const Trajectory& v, const CoefficientField& field, const SigmaFunction& sigma,
                     const Forcing& f, const P1Space& space);

FixedPointResult fixed_point_solve(const CoefficientField& field, const SigmaFunction& sigma, const Forcing& f,
                                   const TimeGrid& grid, const P1Space& space, const FixedPointConfig& cfg);

/// max_k of the W^{-1,2} norm of M du_k/dt_k + (K_{sigma(u_k) mu(t_k)} + M) u_k - f_k.
double quasilinear_residual(const Trajectory& u, const CoefficientField& field, const SigmaFunction& sigma,
                            const Forcing& f, const P1Space& space);

/// sigma(u(t, x)) mu(t, x) as a field, u piecewise constant in time (value of
/// the step's right endpoint) and P1 in space; declared bounds
/// (sigma_lower c_lower, sigma_upper c_upper).
CoefficientField effective_field(const Trajectory& u, const CoefficientField& field, const SigmaFunction& sigma,
                                 const P1Space& space);

}  // namespace mrlab
