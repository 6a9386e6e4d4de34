#include "mrlab/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mrlab {

namespace {

void check_exponent(double r, const char* name)
{
    if (!(r > 1.0) || !std::isfinite(r)) {
        throw std::invalid_argument(std::string(name) + " must lie in (1, inf)");
    }
}

void check_sneiberg(const SneibergInput& in)
{
    if (!(in.theta > 0.0 && in.theta < 1.0)) {
        throw std::invalid_argument("theta must lie in (0, 1)");
    }
    if (!(in.beta >= 0.0) || !(in.gamma >= 0.0) || !std::isfinite(in.beta) || !std::isfinite(in.gamma)) {
        throw std::invalid_argument("beta and gamma must be finite and nonnegative");
    }
}

void check_constants(double c_lower, double c_upper, double c)
{
    if (!(c_lower > 0.0) || !(c_lower <= c_upper) || !std::isfinite(c_upper)) {
        throw std::invalid_argument("need 0 < c_lower <= c_upper < inf");
    }
    if (!(c > 0.0)) {
        throw std::invalid_argument("the reference maximal-regularity constant must be positive");
    }
}

}  // namespace

double interp_exponent(double r0, double r1, double theta)
{
    check_exponent(r0, "r0");
    check_exponent(r1, "r1");
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("theta must lie in [0, 1]");
    }
    return 1.0 / ((1.0 - theta) / r0 + theta / r1);
}

double theta_from_r(double r, double r0, double r1)
{
    check_exponent(r, "r");
    check_exponent(r0, "r0");
    check_exponent(r1, "r1");
    const double a = 1.0 / r0;
    const double b = 1.0 / r1;
    const double x = 1.0 / r;
    if (a == b) {
        if (std::abs(x - a) > 1e-14) {
            throw std::invalid_argument("r lies outside the (degenerate) exponent segment");
        }
        return 0.0;
    }
    const double theta = (x - a) / (b - a);
    if (theta < -1e-14 || theta > 1.0 + 1e-14) {
        throw std::invalid_argument("r lies outside the exponent segment between r0 and r1");
    }
    return std::clamp(theta, 0.0, 1.0);
}

double sneiberg_surjectivity_radius(const SneibergInput& in)
{
    check_sneiberg(in);
    return std::min(in.theta, 1.0 - in.theta) / (1.0 + in.beta * in.gamma);
}

IsomorphismRadius sneiberg_isomorphism_radius(const SneibergInput& in)
{
    check_sneiberg(in);
    return {std::min(in.theta, 1.0 - in.theta) / (6.0 * (1.0 + 2.0 * in.beta * in.gamma)), 8.0 * in.beta};
}

WindowResult hilbert_window(double c_lower, double c_upper, double c_j, double r0, double r1, WindowMode mode)
{
    check_constants(c_lower, c_upper, c_j);
    check_exponent(r0, "r0");
    check_exponent(r1, "r1");
    if (!(r0 > 2.0) || !(r1 < 2.0)) {
        throw std::invalid_argument("hilbert_window needs r0 > 2 > r1");
    }
    const double theta = theta_from_r(2.0, r0, r1);
    const double lions = 1.0 + (1.0 + c_upper) / c_lower;
    const double bg = lions * std::max(1.0, c_upper) * c_j;
    const double m = std::min(theta, 1.0 - theta);
    WindowResult w{2.0, 2.0, 2.0, theta, 0.0, 0.0};
    if (mode == WindowMode::surjective) {
        w.radius = m / (1.0 + bg);
    } else {
        w.radius = m / (6.0 * (1.0 + 2.0 * bg));
        w.bound = 8.0 * (1.0 + c_lower + c_upper) / c_lower;
    }
    // r decreases in theta since 1/r1 > 1/r0.
    w.lo = interp_exponent(r0, r1, std::min(1.0, theta + w.radius));
    w.hi = interp_exponent(r0, r1, std::max(0.0, theta - w.radius));
    return w;
}

KappaResult kappa_r0(double c_lower, double c_upper, double c_js, double s)
{
    check_constants(c_lower, c_upper, c_js);
    if (c_lower > 1.0) {
        throw std::invalid_argument("kappa_r0 requires c_lower <= 1 <= c_upper (c_lower > 1 given)");
    }
    if (c_upper < 1.0) {
        throw std::invalid_argument("kappa_r0 requires c_lower <= 1 <= c_upper (c_upper < 1 given)");
    }
    if (!(s > 2.0) || !std::isfinite(s)) {
        throw std::invalid_argument("kappa_r0 requires s in (2, inf)");
    }
    const double lions = 1.0 + (1.0 + c_lower + c_upper) / c_lower;
    const double kappa = 1.0 / (12.0 * (1.0 + 2.0 * lions * std::max(1.0, c_upper) * c_js));
    const double r0 = 1.0 / (0.5 - kappa * (1.0 - 2.0 / s));
    return {kappa, r0, r0 / (r0 - 1.0), r0, 8.0 * (1.0 + c_lower + c_upper) / c_lower};
}

}  // namespace mrlab
