#include "mrlab/coefficients.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mrlab {

namespace {

constexpr double kSlack = 1e-12;

// Reference-simplex sample points of a uniform refinement into k^d pieces,
// as barycentric weights on the cell vertices.
std::vector<std::array<double, 3>> refinement_points(int dim, int k)
{
    std::vector<std::array<double, 3>> pts;
    const double kd = static_cast<double>(k);
    if (dim == 1) {
        for (int i = 0; i < k; ++i) {
            const double s = (i + 0.5) / kd;
            pts.push_back({1.0 - s, s, 0.0});
        }
        return pts;
    }
    for (int i = 0; i < k; ++i) {
        for (int j = 0; i + j < k; ++j) {
            const double x = (i + 1.0 / 3.0) / kd;
            const double y = (j + 1.0 / 3.0) / kd;
            pts.push_back({1.0 - x - y, x, y});
            if (i + j <= k - 2) {
                const double xd = (i + 2.0 / 3.0) / kd;
                const double yd = (j + 2.0 / 3.0) / kd;
                pts.push_back({1.0 - xd - yd, xd, yd});
            }
        }
    }
    return pts;
}

}  // namespace

EllipticityBounds::EllipticityBounds(double lower, double upper) : lower_(lower), upper_(upper)
{
    if (!(lower > 0.0) || !(lower <= upper) || !std::isfinite(upper)) {
        throw std::invalid_argument("ellipticity bounds need 0 < c_lower <= c_upper < inf");
    }
}

EllipticityBounds EllipticityBounds::scaled(double s_lower, double s_upper) const
{
    return {s_lower * lower_, s_upper * upper_};
}

double symmetric_lower_bound(const CoeffMatrix& a)
{
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double spectral_norm(const CoeffMatrix& a)
{
    const Eigen::MatrixXd m = a;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().maxCoeff();
}

CoefficientField::CoefficientField(int dimension, Evaluator eval, EllipticityBounds bounds,
                                   std::vector<double> jump_times)
    : dim_(dimension), eval_(std::move(eval)), bounds_(bounds), jumps_(std::move(jump_times))
{
    if (dim_ != 1 && dim_ != 2) {
        throw std::invalid_argument("coefficient dimension must be 1 or 2");
    }
    if (!eval_) {
        throw std::invalid_argument("coefficient evaluator is empty");
    }
    std::sort(jumps_.begin(), jumps_.end());
    jumps_.erase(std::unique(jumps_.begin(), jumps_.end()), jumps_.end());
}

CoefficientField CoefficientField::with_bounds(EllipticityBounds b) const
{
    return CoefficientField(dim_, eval_, b, jumps_);
}

std::vector<CoeffMatrix> CoefficientField::sample_cells(double t, const Mesh& mesh) const
{
    std::vector<CoeffMatrix> out;
    out.reserve(static_cast<std::size_t>(mesh.num_cells()));
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        out.push_back(eval_(t, mesh.barycenter(c)));
    }
    return out;
}

CoefficientField constant_field(const CoeffMatrix& matrix)
{
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1 || matrix.rows() > 2) {
        throw std::invalid_argument("constant_field: matrix must be 1x1 or 2x2");
    }
    const double lo = symmetric_lower_bound(matrix);
    if (!(lo > 0.0)) {
        throw std::invalid_argument("constant_field: matrix is not elliptic (min eigenvalue of "
                                    "symmetric part is " + std::to_string(lo) + ")");
    }
    const double hi = spectral_norm(matrix);
    const CoeffMatrix m = matrix;
    return CoefficientField(static_cast<int>(matrix.rows()),
                            [m](double, const Point&) { return m; }, EllipticityBounds(lo, hi));
}

CoefficientField piecewise_constant_in_time(std::vector<CoefficientField> fields,
                                            std::vector<double> breakpoints, double horizon)
{
    if (fields.empty() || fields.size() != breakpoints.size() + 1) {
        throw std::invalid_argument("piecewise field needs len(fields) == len(breakpoints) + 1");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("piecewise field horizon must be positive");
    }
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k] > 0.0 && breakpoints[k] < horizon)) {
            throw std::invalid_argument("breakpoints must lie strictly inside (0, T)");
        }
        if (k > 0 && !(breakpoints[k] > breakpoints[k - 1])) {
            throw std::invalid_argument("breakpoints must be strictly increasing");
        }
    }
    const int dim = fields.front().dimension();
    double lo = fields.front().bounds().lower();
    double hi = fields.front().bounds().upper();
    std::vector<double> jumps = breakpoints;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (fields[k].dimension() != dim) {
            throw std::invalid_argument("piecewise field pieces differ in dimension");
        }
        lo = std::min(lo, fields[k].bounds().lower());
        hi = std::max(hi, fields[k].bounds().upper());
        const double a = k == 0 ? 0.0 : breakpoints[k - 1];
        const double b = k == breakpoints.size() ? horizon : breakpoints[k];
        for (double j : fields[k].jump_times()) {
            if (j > a && j < b) {
                jumps.push_back(j);
            }
        }
    }
    auto eval = [fields = std::move(fields), bps = breakpoints](double t, const Point& x) {
        const auto k = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), t) - bps.begin());
        return fields[k](t, x);
    };
    return CoefficientField(dim, std::move(eval), EllipticityBounds(lo, hi), std::move(jumps));
}

std::function<Point(double)> linear_path(Point start, Point velocity)
{
    return [start, velocity](double t) {
        return Point{start[0] + t * velocity[0], start[1] + t * velocity[1]};
    };
}

bool inclusion_contains(const InterfaceSpec& spec, double t, const Point& x)
{
    const Point c = spec.center_path(t);
    return std::visit(
        [&](const auto& shape) -> bool {
            using S = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<S, IntervalInclusion>) {
                return std::abs(x[0] - c[0]) <= shape.half_width;
            } else if constexpr (std::is_same_v<S, DiskInclusion>) {
                return std::hypot(x[0] - c[0], x[1] - c[1]) <= shape.radius;
            } else {
                return std::abs(x[0] - c[0]) <= shape.half_x && std::abs(x[1] - c[1]) <= shape.half_y;
            }
        },
        spec.shape);
}

namespace {

// Axis-aligned extent of the inclusion around its center.
Point half_extent(const InclusionShape& shape)
{
    return std::visit(
        [](const auto& s) -> Point {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, IntervalInclusion>) {
                return {s.half_width, 0.0};
            } else if constexpr (std::is_same_v<S, DiskInclusion>) {
                return {s.radius, s.radius};
            } else {
                return {s.half_x, s.half_y};
            }
        },
        shape);
}

}  // namespace

CoefficientField moving_interface_field(InterfaceSpec spec, double horizon)
{
    if (spec.dimension != 1 && spec.dimension != 2) {
        throw std::invalid_argument("interface dimension must be 1 or 2");
    }
    if (!spec.center_path) {
        throw std::invalid_argument("interface needs a center path");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("interface horizon must be positive");
    }
    if (!(spec.inside > 0.0) || !(spec.outside > 0.0) || spec.inside == spec.outside) {
        throw std::invalid_argument("interface values must be positive and distinct");
    }
    const bool shape_ok = std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, IntervalInclusion>) {
                return spec.dimension == 1 && s.half_width > 0.0;
            } else if constexpr (std::is_same_v<S, DiskInclusion>) {
                return spec.dimension == 2 && s.radius > 0.0;
            } else {
                return spec.dimension == 2 && s.half_x > 0.0 && s.half_y > 0.0;
            }
        },
        spec.shape);
    if (!shape_ok) {
        throw std::invalid_argument("inclusion shape does not match dimension or has nonpositive size");
    }
    const Point ext = half_extent(spec.shape);
    constexpr int kSamples = 1000;
    for (int i = 0; i <= kSamples; ++i) {
        const double t = horizon * i / kSamples;
        const Point c = spec.center_path(t);
        for (int k = 0; k < spec.dimension; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            if (!(c[ku] - ext[ku] > spec.domain.lower[ku] && c[ku] + ext[ku] < spec.domain.upper[ku])) {
                throw std::invalid_argument("inclusion leaves the domain at t = " + std::to_string(t));
            }
        }
    }
    const int d = spec.dimension;
    const double lo = std::min(spec.inside, spec.outside);
    const double hi = std::max(spec.inside, spec.outside);
    auto eval = [spec = std::move(spec), d](double t, const Point& x) -> CoeffMatrix {
        const double v = inclusion_contains(spec, t, x) ? spec.inside : spec.outside;
        return v * CoeffMatrix::Identity(d, d);
    };
    return CoefficientField(d, std::move(eval), EllipticityBounds(lo, hi));
}

double linf_distance(const CoefficientField& field, double t, double s, const Mesh& mesh)
{
    double best = 0.0;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const Point x = mesh.barycenter(c);
        best = std::max(best, spectral_norm(field(t, x) - field(s, x)));
    }
    return best;
}

double l1_distance(const CoefficientField& field, double t, double s, const Mesh& mesh, int refinement)
{
    if (refinement < 1) {
        throw std::invalid_argument("l1_distance refinement must be >= 1");
    }
    const auto pts = refinement_points(mesh.dimension(), refinement);
    const double w = 1.0 / static_cast<double>(pts.size());
    double total = 0.0;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        double cell_sum = 0.0;
        for (const auto& lam : pts) {
            Point x{0.0, 0.0};
            for (std::size_t a = 0; a < vs.size(); ++a) {
                x[0] += lam[a] * mesh.vertex(vs[a])[0];
                x[1] += lam[a] * mesh.vertex(vs[a])[1];
            }
            cell_sum += spectral_norm(field(t, x) - field(s, x));
        }
        total += mesh.cell_measure(c) * w * cell_sum;
    }
    return total;
}

EllipticityReport verify_ellipticity(const CoefficientField& field, const Mesh& mesh, int time_samples,
                                     double horizon)
{
    if (time_samples < 1) {
        throw std::invalid_argument("verify_ellipticity needs at least one time sample");
    }
    EllipticityReport rep;
    rep.observed_lower = std::numeric_limits<double>::infinity();
    rep.observed_upper = 0.0;
    const double lo = field.bounds().lower();
    const double hi = field.bounds().upper();
    for (int i = 0; i < time_samples; ++i) {
        const double t = time_samples == 1 ? 0.0 : horizon * i / (time_samples - 1);
        for (Index c = 0; c < mesh.num_cells(); ++c) {
            const CoeffMatrix a = field(t, mesh.barycenter(c));
            const double l = symmetric_lower_bound(a);
            const double u = spectral_norm(a);
            rep.observed_lower = std::min(rep.observed_lower, l);
            rep.observed_upper = std::max(rep.observed_upper, u);
            if (l < lo - kSlack || u > hi + kSlack) {
                rep.pass = false;
                rep.violations.push_back({t, c, l, u});
            }
        }
    }
    return rep;
}

}  // namespace mrlab
