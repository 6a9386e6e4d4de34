#pragma once

// Time- and space-dependent coefficient fields mu: J -> E(c_lower, c_upper),
// the translating-inclusion construction, and L^inf / L^1 distance
// diagnostics of t -> mu_t.

#include "mrlab/fem.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace mrlab {

/// The pair (c_lower, c_upper) defining the ellipticity class: for every
/// coefficient value A, min eig((A + A^T)/2) >= c_lower and ||A||_2 <= c_upper.
class EllipticityBounds {
public:
    EllipticityBounds(double lower, double upper);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

    /// Bounds of sigma * mu for sigma in [s_lower, s_upper].
    EllipticityBounds scaled(double s_lower, double s_upper) const;

private:
    double lower_;
    double upper_;
};

/// Smallest eigenvalue of the symmetric part.
double symmetric_lower_bound(const CoeffMatrix& a);
/// Spectral norm.
double spectral_norm(const CoeffMatrix& a);

class CoefficientField {
public:
    using Evaluator = std::function<CoeffMatrix(double t, const Point& x)>;

    CoefficientField(int dimension, Evaluator eval, EllipticityBounds bounds,
                     std::vector<double> jump_times = {});

    CoeffMatrix operator()(double t, const Point& x) const { return eval_(t, x); }

    int dimension() const noexcept { return dim_; }
    const EllipticityBounds& bounds() const noexcept { return bounds_; }
    const std::vector<double>& jump_times() const noexcept { return jumps_; }

    /// Same evaluator with different declared bounds.
    CoefficientField with_bounds(EllipticityBounds b) const;

    /// mu(t, barycenter) for every cell.
    std::vector<CoeffMatrix> sample_cells(double t, const Mesh& mesh) const;

private:
    int dim_;
    Evaluator eval_;
    EllipticityBounds bounds_;
    std::vector<double> jumps_;
};

/// Time- and space-independent field; bounds computed from the matrix.
CoefficientField constant_field(const CoeffMatrix& matrix);

/// Selects fields[k] on [breakpoints[k-1], breakpoints[k]). Bounds are the
/// envelope of the pieces; jump times are the breakpoints plus the pieces'
/// own jump times inside their active intervals.
CoefficientField piecewise_constant_in_time(std::vector<CoefficientField> fields,
                                            std::vector<double> breakpoints, double horizon);

struct Box {
    Point lower{0.0, 0.0};
    Point upper{1.0, 1.0};
};

struct IntervalInclusion {
    double half_width;
};
struct DiskInclusion {
    double radius;
};
struct RectInclusion {
    double half_x;
    double half_y;
};
using InclusionShape = std::variant<IntervalInclusion, DiskInclusion, RectInclusion>;

/// Inclusion of a fixed shape moving along center_path(t). The coefficient
/// is inside * I on the closed inclusion and outside * I elsewhere.
struct InterfaceSpec {
    int dimension = 1;
    InclusionShape shape = IntervalInclusion{0.1};
    std::function<Point(double)> center_path;
    double inside = 1.0;
    double outside = 2.0;
    Box domain;
};

/// center(t) = start + t * velocity.
std::function<Point(double)> linear_path(Point start, Point velocity);

/// Closed-inclusion membership test at time t.
bool inclusion_contains(const InterfaceSpec& spec, double t, const Point& x);

/// Throws std::invalid_argument if the closed inclusion leaves the open
/// domain at any of 1001 equally spaced times in [0, horizon].
CoefficientField moving_interface_field(InterfaceSpec spec, double horizon);

/// max over cell barycenters of ||mu_t(x) - mu_s(x)||_2.
double linf_distance(const CoefficientField& field, double t, double s, const Mesh& mesh);

/// sum over cells of |cell| * ||mu_t - mu_s||_2, the integrand sampled at
/// the barycenters of a uniform refinement of each cell into
/// `refinement^d` pieces (refinement = 1: cell barycenters only).
double l1_distance(const CoefficientField& field, double t, double s, const Mesh& mesh,
                   int refinement = 1);

struct EllipticityViolation {
    double t;
    Index cell;
    double lower;  // observed min eig of symmetric part
    double upper;  // observed spectral norm
};

struct EllipticityReport {
    bool pass = true;
    double observed_lower = 0.0;
    double observed_upper = 0.0;
    std::vector<EllipticityViolation> violations;
};

/// Checks the declared bounds at every (time sample, cell barycenter) with
/// 1e-12 slack. Time samples are equally spaced on [0, horizon], endpoints
/// included; a single sample is taken at t = 0.
EllipticityReport verify_ellipticity(const CoefficientField& field, const Mesh& mesh,
                                     int time_samples, double horizon);

}  // namespace mrlab
