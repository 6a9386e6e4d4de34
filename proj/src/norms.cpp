#include "mrlab/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace mrlab {

namespace {

void check_exponent(double q, const char* what)
{
    if (!(q > 1.0) || !std::isfinite(q)) {
        throw std::invalid_argument(std::string(what) + " must lie in (1, inf)");
    }
}

struct QuadPoint {
    std::array<double, 3> lambda;
    double weight;  // fraction of the cell measure
};

const std::vector<QuadPoint>& quadrature(int dim)
{
    static const std::vector<QuadPoint> line = [] {
        const double s = std::sqrt(0.15);
        return std::vector<QuadPoint>{{{0.5 + s, 0.5 - s, 0.0}, 5.0 / 18.0},
                                      {{0.5, 0.5, 0.0}, 8.0 / 18.0},
                                      {{0.5 - s, 0.5 + s, 0.0}, 5.0 / 18.0}};
    }();
    static const std::vector<QuadPoint> tri{{{0.5, 0.5, 0.0}, 1.0 / 3.0},
                                            {{0.0, 0.5, 0.5}, 1.0 / 3.0},
                                            {{0.5, 0.0, 0.5}, 1.0 / 3.0}};
    return dim == 1 ? line : tri;
}

// sum_T |T| |grad|^q + sum_g w |psi_g|^q, and optionally its gradient in
// all-vertex coordinates.
double power_sum(const Vector& all, const P1Space& space, double q, Vector* grad_all)
{
    const Mesh& mesh = space.mesh();
    const int d = mesh.dimension();
    const auto& quad = quadrature(d);
    double total = 0.0;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        const double vol = mesh.cell_measure(c);
        const auto& g = space.basis_gradients(c);
        Eigen::Vector2d grad = Eigen::Vector2d::Zero();
        for (int a = 0; a <= d; ++a) {
            grad += all[vs[a]] * g.col(a);
        }
        const double gn = grad.norm();
        total += vol * std::pow(gn, q);
        if (grad_all != nullptr && gn > 0.0) {
            const double scale = q * vol * std::pow(gn, q - 2.0);
            for (int a = 0; a <= d; ++a) {
                (*grad_all)[vs[a]] += scale * grad.dot(g.col(a));
            }
        }
        for (const auto& qp : quad) {
            double val = 0.0;
            for (int a = 0; a <= d; ++a) {
                val += qp.lambda[static_cast<std::size_t>(a)] * all[vs[a]];
            }
            const double av = std::abs(val);
            total += vol * qp.weight * std::pow(av, q);
            if (grad_all != nullptr && av > 0.0) {
                const double scale = q * vol * qp.weight * std::pow(av, q - 2.0) * val;
                for (int a = 0; a <= d; ++a) {
                    (*grad_all)[vs[a]] += scale * qp.lambda[static_cast<std::size_t>(a)];
                }
            }
        }
    }
    return total;
}

Vector restrict_to_free(const Vector& all, const P1Space& space)
{
    Vector out(space.num_dofs());
    for (Index i = 0; i < space.num_dofs(); ++i) {
        out[i] = all[space.partition().free_dofs[static_cast<std::size_t>(i)]];
    }
    return out;
}

}  // namespace

double conjugate(double q)
{
    check_exponent(q, "exponent");
    return q / (q - 1.0);
}

double w1q_norm(const Vector& v, const P1Space& space, double q)
{
    check_exponent(q, "w1q_norm exponent");
    return std::pow(power_sum(space.expand(v), space, q, nullptr), 1.0 / q);
}

Vector w1q_norm_gradient(const Vector& v, const P1Space& space, double q)
{
    check_exponent(q, "w1q_norm exponent");
    Vector grad_all = Vector::Zero(space.mesh().num_vertices());
    const double s = power_sum(space.expand(v), space, q, &grad_all);
    if (s == 0.0) {
        return Vector::Zero(v.size());
    }
    // d/dv S^{1/q} = (1/q) S^{1/q - 1} dS/dv
    return restrict_to_free(grad_all, space) * (std::pow(s, 1.0 / q - 1.0) / q);
}

DualNorm dual_norm(const Vector& f, const P1Space& space, double qprime)
{
    check_exponent(qprime, "dual_norm exponent");
    if (f.size() != space.num_dofs()) {
        throw std::invalid_argument("functional dimension does not match free DOFs");
    }
    if (qprime == 2.0) {
        const Vector riesz = space.gram_solver().solve(f);
        return {std::sqrt(std::max(0.0, f.dot(riesz))), true, 0};
    }
    return dual_norm_ascent(f, space, qprime);
}

DualNorm dual_norm_ascent(const Vector& f, const P1Space& space, double qprime,
                          const std::optional<Vector>& initial)
{
    check_exponent(qprime, "dual_norm exponent");
    if (f.size() != space.num_dofs()) {
        throw std::invalid_argument("functional dimension does not match free DOFs");
    }
    if (f.size() == 0 || f.cwiseAbs().maxCoeff() == 0.0) {
        return {0.0, true, 0};
    }
    Vector phi = initial ? *initial : space.gram_solver().solve(f);
    if (phi.size() != f.size()) {
        throw std::invalid_argument("initial guess has wrong dimension");
    }
    auto normalize = [&](Vector& x) {
        const double n = w1q_norm(x, space, qprime);
        x /= n;
        if (f.dot(x) < 0.0) {
            x = -x;
        }
    };
    if (w1q_norm(phi, space, qprime) == 0.0) {
        phi = space.gram_solver().solve(f);
    }
    normalize(phi);
    double ratio = f.dot(phi);
    double step = 1.0;
    DualNorm out{ratio, false, 0};
    for (int it = 1; it <= 500; ++it) {
        out.iterations = it;
        // Gradient of f.phi / N(phi) at N(phi) = 1.
        const Vector g = f - ratio * w1q_norm_gradient(phi, space, qprime);
        // Scaling by 1/ratio makes a unit step exact when the norm is the Gram norm.
        const Vector dir = space.gram_solver().solve(g) / ratio;
        const double slope = g.dot(dir);
        if (!(slope > 1e-300)) {
            out.converged = true;
            break;
        }
        step = std::min(1.0, 2.0 * step);
        bool accepted = false;
        double trial_ratio = ratio;
        Vector trial;
        for (int bt = 0; bt < 60; ++bt) {
            trial = phi + step * dir;
            const double n = w1q_norm(trial, space, qprime);
            trial_ratio = n > 0.0 ? f.dot(trial) / n : 0.0;
            if (trial_ratio >= ratio + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No ascent possible at working precision: stationary point.
            out.converged = true;
            break;
        }
        const double improvement = (trial_ratio - ratio) / ratio;
        phi = trial;
        normalize(phi);
        ratio = std::max(trial_ratio, f.dot(phi));
        if (improvement < 1e-8) {
            out.converged = true;
            break;
        }
    }
    out.value = ratio;
    return out;
}

double bochner_norm(std::span<const double> series, const TimeGrid& grid, double r)
{
    check_exponent(r, "bochner_norm exponent");
    if (static_cast<Index>(series.size()) != grid.num_nodes()) {
        throw std::invalid_argument("series length must equal the number of grid nodes");
    }
    double s = 0.0;
    for (Index k = 1; k < grid.num_nodes(); ++k) {
        s += grid.step(k) * std::pow(std::abs(series[static_cast<std::size_t>(k)]), r);
    }
    return std::pow(s, 1.0 / r);
}

MrNorm mr_norm_parts(const Trajectory& traj, double r, double q, const P1Space& space)
{
    check_exponent(q, "mr_norm space exponent");
    const TimeGrid& grid = traj.grid();
    const double qp = conjugate(q);
    std::vector<double> state(static_cast<std::size_t>(grid.num_nodes()), 0.0);
    std::vector<double> deriv(state.size(), 0.0);
    MrNorm out;
    for (Index k = 1; k < grid.num_nodes(); ++k) {
        state[static_cast<std::size_t>(k)] = w1q_norm(traj.at(k), space, q);
        const DualNorm dn = dual_norm(space.mass() * traj.backward_difference(k), space, qp);
        deriv[static_cast<std::size_t>(k)] = dn.value;
        out.converged = out.converged && dn.converged;
    }
    out.state = bochner_norm(state, grid, r);
    out.derivative = bochner_norm(deriv, grid, r);
    return out;
}

double mr_norm(const Trajectory& traj, double r, double q, const P1Space& space)
{
    return mr_norm_parts(traj, r, q, space).total();
}

double mr_tilde_norm(const Trajectory& traj, double r, const P1Space& space, const SparseMatrix* reference)
{
    const SparseMatrix& k_ref = reference != nullptr ? *reference : space.gram();
    if (k_ref.size() != space.num_dofs()) {
        throw std::invalid_argument("reference operator does not match the space");
    }
    const TimeGrid& grid = traj.grid();
    std::vector<double> series(static_cast<std::size_t>(grid.num_nodes()), 0.0);
    for (Index k = 1; k < grid.num_nodes(); ++k) {
        const Vector g = space.mass() * traj.backward_difference(k) + k_ref * traj.at(k);
        series[static_cast<std::size_t>(k)] = dual_norm(g, space, 2.0).value;
    }
    return bochner_norm(series, grid, r);
}

double holder_quotient(const Trajectory& traj, double alpha, const SparseMatrix& mass)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("Hoelder exponent must lie in (0, 1)");
    }
    const TimeGrid& grid = traj.grid();
    double best = 0.0;
    for (Index k = 0; k < grid.num_nodes(); ++k) {
        for (Index l = k + 1; l < grid.num_nodes(); ++l) {
            const Vector d = traj.at(l) - traj.at(k);
            const double h = std::sqrt(std::max(0.0, d.dot(mass * d)));
            best = std::max(best, h / std::pow(grid.time(l) - grid.time(k), alpha));
        }
    }
    return best;
}

std::vector<double> dual_norm_series(const std::vector<Vector>& f, const P1Space& space)
{
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t k = 1; k < f.size(); ++k) {
        out[k] = dual_norm(f[k], space, 2.0).value;
    }
    return out;
}

}  // namespace mrlab
