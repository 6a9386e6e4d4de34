#include "mrlab/quasilinear.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrlab {

SigmaFunction::SigmaFunction(std::function<double(double)> f, double lower, double upper)
    : f_(std::move(f)), lower_(lower), upper_(upper)
{
    if (!f_) {
        throw std::invalid_argument("sigma function is empty");
    }
    if (!(lower > 0.0) || !(lower <= upper) || !std::isfinite(upper)) {
        throw std::invalid_argument("sigma bounds need 0 < lower <= upper < inf");
    }
}

bool SigmaFunction::check(double range, int samples, double jump_tol) const
{
    double prev = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = -range + 2.0 * range * i / std::max(1, samples - 1);
        const double y = f_(x);
        if (!(y >= lower_ - 1e-12 && y <= upper_ + 1e-12)) {
            return false;
        }
        if (i > 0 && std::abs(y - prev) > jump_tol) {
            return false;
        }
        prev = y;
    }
    return true;
}

SigmaFunction constant_sigma(double c)
{
    return SigmaFunction([c](double) { return c; }, c, c);
}

SigmaFunction tanh_sigma(double center, double amplitude)
{
    const double a = std::abs(amplitude);
    return SigmaFunction([center, amplitude](double x) { return center + amplitude * std::tanh(x); },
                         center - a, center + a);
}

StiffnessAt frozen_stiffness(const Trajectory& v, const CoefficientField& field, const SigmaFunction& sigma,
                             const P1Space& space)
{
    if (v.dofs() != space.num_dofs()) {
        throw std::invalid_argument("iterate does not match the space");
    }
    return [&v, &field, &sigma, &space](Index k) {
        const double t = v.grid().time(k);
        const Vector vb = space.barycenter_values(v.at(k));
        const Mesh& mesh = space.mesh();
        return assemble_stiffness(mesh, space.partition(), [&](Index c) -> CoeffMatrix {
            return sigma(vb[c]) * field(t, mesh.barycenter(c));
        });
    };
}

Trajectory apply_psi(const Trajectory& v, const CoefficientField& field, const SigmaFunction& sigma,
                     const Forcing& f, const P1Space& space)
{
    return ImplicitEuler(frozen_stiffness(v, field, sigma, space), v.grid(), space, 1.0).solve(f);
}

FixedPointResult fixed_point_solve(const CoefficientField& field, const SigmaFunction& sigma, const Forcing& f,
                                   const TimeGrid& grid, const P1Space& space, const FixedPointConfig& cfg)
{
    if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1 || !(cfg.damping > 0.0 && cfg.damping <= 1.0)) {
        throw std::invalid_argument("fixed-point config needs tolerance > 0, max_iterations >= 1, damping in (0, 1]");
    }
    for (double j : field.jump_times()) {
        if (!grid.contains(j)) {
            throw std::invalid_argument("time grid is missing the coefficient jump time " + std::to_string(j));
        }
    }
    const SparseMatrix& m = space.mass();
    FixedPointResult res{Trajectory::zero(grid, space.num_dofs()), 0, false, {}, {}};
    Trajectory v = res.solution;
    double last = std::numeric_limits<double>::infinity();
    double best = last;
    for (int n = 1; n <= cfg.max_iterations; ++n) {
        const Trajectory psi = apply_psi(v, field, sigma, f, space);
        double w = cfg.damping;
        Trajectory next = w == 1.0 ? psi : v.scaled(1.0 - w) + psi.scaled(w);
        double dist = (next - v).sup_l2(m);
        if (w == 1.0 && dist > last) {
            w = 0.5;
            next = v.scaled(0.5) + psi.scaled(0.5);
            dist = (next - v).sup_l2(m);
        }
        res.iterations = n;
        res.history.push_back(dist);
        res.damping.push_back(w);
        v = std::move(next);
        last = dist;
        if (dist <= best) {
            best = dist;
            res.solution = v;
        }
        if (dist < cfg.tolerance) {
            res.converged = true;
            res.solution = v;
            break;
        }
    }
    return res;
}

double quasilinear_residual(const Trajectory& u, const CoefficientField& field, const SigmaFunction& sigma,
                            const Forcing& f, const P1Space& space)
{
    const TimeGrid& grid = u.grid();
    if (static_cast<Index>(f.size()) != grid.num_nodes()) {
        throw std::invalid_argument("forcing needs one functional per grid node");
    }
    const auto stiffness = frozen_stiffness(u, field, sigma, space);
    const SparseMatrix& m = space.mass();
    double worst = 0.0;
    for (Index k = 1; k < grid.num_nodes(); ++k) {
        const Vector& uk = u.at(k);
        const Vector defect = m * u.backward_difference(k) + stiffness(k) * uk + m * uk - f[static_cast<std::size_t>(k)];
        worst = std::max(worst, dual_norm(defect, space, 2.0).value);
    }
    return worst;
}

namespace {

// Barycentric coordinates of x in cell c; all >= -eps iff x lies in the cell.
std::array<double, 3> barycentric(const Mesh& mesh, Index c, const Point& x)
{
    const auto vs = mesh.cell(c);
    const Point& p0 = mesh.vertex(vs[0]);
    const Point& p1 = mesh.vertex(vs[1]);
    if (mesh.dimension() == 1) {
        const double s = (x[0] - p0[0]) / (p1[0] - p0[0]);
        return {1.0 - s, s, 0.0};
    }
    const Point& p2 = mesh.vertex(vs[2]);
    Eigen::Matrix2d jac;
    jac << p1[0] - p0[0], p2[0] - p0[0], p1[1] - p0[1], p2[1] - p0[1];
    const Eigen::Vector2d st = jac.inverse() * Eigen::Vector2d(x[0] - p0[0], x[1] - p0[1]);
    return {1.0 - st[0] - st[1], st[0], st[1]};
}

}  // namespace

CoefficientField effective_field(const Trajectory& u, const CoefficientField& field, const SigmaFunction& sigma,
                                 const P1Space& space)
{
    auto eval = [u, field, sigma, &space](double t, const Point& x) -> CoeffMatrix {
        const auto& nodes = u.grid().nodes();
        // Step (t_{k-1}, t_k] carries u_k; t = 0 carries u_0.
        auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
        const Index k = it == nodes.end() ? u.grid().num_steps() : static_cast<Index>(it - nodes.begin());
        const Vector all = space.expand(u.at(k));
        const Mesh& mesh = space.mesh();
        double value = 0.0;
        bool found = false;
        for (Index c = 0; c < mesh.num_cells() && !found; ++c) {
            const auto lam = barycentric(mesh, c, x);
            const auto vs = mesh.cell(c);
            bool inside = true;
            for (std::size_t a = 0; a < vs.size(); ++a) {
                inside = inside && lam[a] >= -1e-12;
            }
            if (inside) {
                for (std::size_t a = 0; a < vs.size(); ++a) {
                    value += lam[a] * all[vs[a]];
                }
                found = true;
            }
        }
        if (!found) {
            throw std::invalid_argument("effective_field: point outside the mesh");
        }
        return sigma(value) * field(t, x);
    };
    return CoefficientField(field.dimension(), std::move(eval),
                            field.bounds().scaled(sigma.lower(), sigma.upper()), field.jump_times());
}

}  // namespace mrlab
