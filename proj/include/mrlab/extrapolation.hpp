#pragma once

// Closed-form extrapolation constants: Sneiberg radii, the Hilbert-space
// window around r = 2, the (r0', r0) window for discontinuous coefficients,
// and the exponent arithmetic of complex interpolation of L^r spaces.

namespace mrlab {

/// 1/r = (1 - theta)/r0 + theta/r1.
double interp_exponent(double r0, double r1, double theta);

/// Inverse of interp_exponent in theta. For r0 == r1 the segment is a point
/// and theta = 0 is returned.
double theta_from_r(double r, double r0, double r1);

struct SneibergInput {
    double theta;  // interpolation parameter in (0, 1)
    double beta;   // bound on the inverse at theta
    double gamma;  // max of the endpoint operator norms
};

/// min(theta, 1 - theta) / (1 + beta gamma).
double sneiberg_surjectivity_radius(const SneibergInput& in);

struct IsomorphismRadius {
    double radius;         // (1/6) min(theta, 1 - theta) / (1 + 2 beta gamma)
    double inverse_bound;  // 8 beta
};

IsomorphismRadius sneiberg_isomorphism_radius(const SneibergInput& in);

enum class WindowMode { surjective, isomorphism };

struct WindowResult {
    double center;
    double lo;
    double hi;
    double theta;         // interpolation parameter of the center
    double radius;        // admissible |theta~ - theta|
    double bound = 0.0;   // inverse bound (isomorphism mode), 0 otherwise
};

/// Exponents r with |theta(r) - theta(2)| < radius, where the radius is
/// min(theta, 1 - theta) / (1 + (1 + (1 + c_upper)/c_lower) max(1, c_upper) C_J)
/// in surjective mode and (1/6) min(theta, 1 - theta) / (1 + 2 (...)) in
/// isomorphism mode; the latter also reports the tilde-norm inverse bound
/// 8 (1 + c_lower + c_upper) / c_lower. Requires r0 > 2 > r1.
WindowResult hilbert_window(double c_lower, double c_upper, double c_j, double r0, double r1, WindowMode mode);

struct KappaResult {
    double kappa;
    double r0;
    double lo;     // r0' = r0 / (r0 - 1)
    double hi;     // r0
    double bound;  // 8 (1 + c_lower + c_upper) / c_lower
};

/// kappa_s = (1/12) / (1 + 2 (1 + (1 + c_lower + c_upper)/c_lower) max(1, c_upper) C_{J,s})
/// r0 = (1/2 - kappa_s (1 - 2/s))^{-1}. Requires c_lower <= 1 <= c_upper and s > 2.
KappaResult kappa_r0(double c_lower, double c_upper, double c_js, double s);

}  // namespace mrlab
