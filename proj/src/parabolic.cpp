#include "mrlab/parabolic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mrlab {

namespace {

bool same_matrix(const SparseMatrix& a, const SparseMatrix& b)
{
    const auto& x = a.eigen();
    const auto& y = b.eigen();
    if (x.nonZeros() != y.nonZeros() || x.rows() != y.rows()) {
        return false;
    }
    return std::equal(x.valuePtr(), x.valuePtr() + x.nonZeros(), y.valuePtr())
           && std::equal(x.innerIndexPtr(), x.innerIndexPtr() + x.nonZeros(), y.innerIndexPtr())
           && std::equal(x.outerIndexPtr(), x.outerIndexPtr() + x.outerSize() + 1, y.outerIndexPtr());
}

void check_forcing(const Forcing& f, const TimeGrid& grid, Index dofs)
{
    if (static_cast<Index>(f.size()) != grid.num_nodes()) {
        throw std::invalid_argument("forcing needs one functional per grid node");
    }
    for (const auto& v : f) {
        if (v.size() != dofs) {
            throw std::invalid_argument("forcing dimension does not match free DOFs");
        }
    }
}

constexpr double kRatioTolerance = 1.05;
constexpr double kWindowBoundTolerance = 1.1;

}  // namespace

Forcing zero_forcing(const TimeGrid& grid, Index dofs)
{
    return Forcing(static_cast<std::size_t>(grid.num_nodes()), Vector::Zero(dofs));
}

Forcing forcing_from_profile(const TimeGrid& grid, const P1Space& space,
                             const std::function<double(double)>& amplitude,
                             const std::function<double(const Point&)>& profile)
{
    Vector nodal(space.num_dofs());
    for (Index i = 0; i < space.num_dofs(); ++i) {
        nodal[i] = profile(space.mesh().vertex(space.partition().free_dofs[static_cast<std::size_t>(i)]));
    }
    const Vector g = space.mass() * nodal;
    Forcing f = zero_forcing(grid, space.num_dofs());
    for (Index k = 1; k < grid.num_nodes(); ++k) {
        f[static_cast<std::size_t>(k)] = amplitude(grid.time(k)) * g;
    }
    return f;
}

StiffnessAt field_stiffness(const CoefficientField& field, const TimeGrid& grid, const P1Space& space)
{
    if (field.dimension() != space.dimension()) {
        throw std::invalid_argument("coefficient and mesh dimensions differ");
    }
    return [&field, grid, &space](Index k) {
        const auto mu = field.sample_cells(grid.time(k), space.mesh());
        return assemble_stiffness(space.mesh(), space.partition(), mu);
    };
}

ImplicitEuler::ImplicitEuler(const StiffnessAt& stiffness, TimeGrid grid, const P1Space& space, double shift)
    : grid_(std::move(grid)), space_(&space), shift_(shift)
{
    if (!(shift >= 0.0)) {
        throw std::invalid_argument("shift must be nonnegative");
    }
    const SparseMatrix& m = space.mass();
    for (Index k = 1; k <= grid_.num_steps(); ++k) {
        auto kk = std::make_shared<const SparseMatrix>(stiffness(k));
        if (kk->size() != space.num_dofs()) {
            throw std::invalid_argument("stiffness matrix does not match the space");
        }
        const double dt = grid_.step(k);
        if (k > 1 && dt == grid_.step(k - 1) && same_matrix(*kk, *stiffness_.back())) {
            stiffness_.push_back(stiffness_.back());
            steps_.push_back(steps_.back());
            continue;
        }
        const SparseMatrix a = m + dt * (*kk + shift * m);
        stiffness_.push_back(std::move(kk));
        steps_.push_back(std::make_shared<const LinearSolver>(a));
    }
}

Trajectory ImplicitEuler::solve(const Forcing& f) const
{
    check_forcing(f, grid_, space_->num_dofs());
    const SparseMatrix& m = space_->mass();
    std::vector<Vector> u(static_cast<std::size_t>(grid_.num_nodes()), Vector::Zero(space_->num_dofs()));
    for (Index k = 1; k <= grid_.num_steps(); ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const Vector rhs = m * u[ku - 1] + grid_.step(k) * f[ku];
        u[ku] = steps_[ku - 1]->solve(rhs);
    }
    return Trajectory(grid_, std::move(u));
}

Trajectory solve_nonautonomous(const CoefficientField& field, const Forcing& f, const TimeGrid& grid,
                               const P1Space& space, double shift)
{
    for (double j : field.jump_times()) {
        if (!grid.contains(j)) {
            throw std::invalid_argument("time grid is missing the coefficient jump time " + std::to_string(j));
        }
    }
    check_forcing(f, grid, space.num_dofs());
    return ImplicitEuler(field_stiffness(field, grid, space), grid, space, shift).solve(f);
}

std::vector<double> energy_residual(const Trajectory& traj, const StiffnessAt& stiffness, const Forcing& f,
                                    const P1Space& space, double shift)
{
    const TimeGrid& grid = traj.grid();
    check_forcing(f, grid, space.num_dofs());
    if (traj.dofs() != space.num_dofs()) {
        throw std::invalid_argument("trajectory does not match the space");
    }
    const SparseMatrix& m = space.mass();
    std::vector<double> res(static_cast<std::size_t>(grid.num_nodes()), 0.0);
    double dissipation = 0.0;
    double work = 0.0;
    for (Index k = 1; k < grid.num_nodes(); ++k) {
        const Vector& u = traj.at(k);
        const double dt = grid.step(k);
        const SparseMatrix kk = stiffness(k);
        dissipation += dt * u.dot(kk * u + shift * (m * u));
        work += dt * f[static_cast<std::size_t>(k)].dot(u);
        res[static_cast<std::size_t>(k)] = 0.5 * u.dot(m * u) + dissipation - work;
    }
    return res;
}

std::vector<double> energy_residual(const Trajectory& traj, const CoefficientField& field, const Forcing& f,
                                    const P1Space& space, double shift)
{
    return energy_residual(traj, field_stiffness(field, traj.grid(), space), f, space, shift);
}

EllipticityBounds form_bounds(const EllipticityBounds& coefficient, double shift)
{
    return {std::min(coefficient.lower(), shift), std::max(coefficient.upper(), shift)};
}

AprioriReport apriori_check(const Trajectory& traj, const Forcing& f, const P1Space& space,
                            const EllipticityBounds& bounds)
{
    const TimeGrid& grid = traj.grid();
    check_forcing(f, grid, space.num_dofs());
    AprioriReport rep;
    rep.forcing_norm = bochner_norm(dual_norm_series(f, space), grid, 2.0);
    const MrNorm mr = mr_norm_parts(traj, 2.0, 2.0, space);
    const double cl = bounds.lower();
    const double cu = bounds.upper();
    auto fill = [&](InequalityCheck& c, double lhs, double constant) {
        c.lhs = lhs;
        c.constant = constant;
        c.rhs = constant * rep.forcing_norm;
        c.ratio = c.rhs > 0.0 ? lhs / c.rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        rep.pass = rep.pass && c.ratio <= kRatioTolerance;
    };
    fill(rep.state, mr.state, 1.0 / cl);
    fill(rep.derivative, mr.derivative, 1.0 + cu / cl);
    fill(rep.maximal_regularity, mr.total(), (1.0 + cl + cu) / cl);
    return rep;
}

std::vector<Forcing> make_probes(const SparseMatrix& k, const TimeGrid& grid, const P1Space& space,
                                 int random_probes, std::uint64_t seed)
{
    if (random_probes < 0) {
        throw std::invalid_argument("probe count must be nonnegative");
    }
    const Index n = space.num_dofs();
    std::vector<Forcing> probes;
    if (n == 0) {
        return probes;
    }
    const Eigen::MatrixXd kd = k.dense();
    const Eigen::MatrixXd ksym = 0.5 * (kd + kd.transpose());
    const Eigen::MatrixXd md = space.mass().dense();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(ksym, md);
    const Index modes = std::min<Index>(3, n);
    for (Index i = 0; i < modes; ++i) {
        const Vector g = space.mass() * ges.eigenvectors().col(i);
        Forcing f = zero_forcing(grid, n);
        for (Index j = 1; j < grid.num_nodes(); ++j) {
            f[static_cast<std::size_t>(j)] = g;
        }
        probes.push_back(std::move(f));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double T = grid.horizon();
    for (int p = 0; p < random_probes; ++p) {
        double a = T * unif(rng);
        double b = T * unif(rng);
        if (a > b) {
            std::swap(a, b);
        }
        Vector g(n);
        for (Index i = 0; i < n; ++i) {
            g[i] = normal(rng);
        }
        Forcing f = zero_forcing(grid, n);
        bool any = false;
        for (Index j = 1; j < grid.num_nodes(); ++j) {
            if (grid.time(j) >= a && grid.time(j) <= b) {
                f[static_cast<std::size_t>(j)] = g;
                any = true;
            }
        }
        if (!any) {
            // Window narrower than a step: activate the node right after a.
            const auto it = std::upper_bound(grid.nodes().begin(), grid.nodes().end(), a);
            const auto j = std::min<std::size_t>(static_cast<std::size_t>(it - grid.nodes().begin()),
                                                 grid.nodes().size() - 1);
            f[std::max<std::size_t>(j, 1)] = g;
        }
        probes.push_back(std::move(f));
    }
    return probes;
}

ConstantEstimate estimate_mr_constant(const StiffnessAt& stiffness, double r, const TimeGrid& grid,
                                      const P1Space& space, int probes, std::uint64_t seed, double shift)
{
    if (probes < 1) {
        throw std::invalid_argument("need at least one probe");
    }
    const ImplicitEuler solver(stiffness, grid, space, shift);
    ConstantEstimate est;
    const auto family = make_probes(solver.stiffness(1), grid, space, probes, seed);
    for (std::size_t p = 0; p < family.size(); ++p) {
        const double fn = bochner_norm(dual_norm_series(family[p], space), grid, r);
        if (fn == 0.0) {
            est.ratios.push_back(0.0);
            continue;
        }
        const MrNorm mr = mr_norm_parts(solver.solve(family[p]), r, 2.0, space);
        est.converged = est.converged && mr.converged;
        const double ratio = mr.total() / fn;
        est.ratios.push_back(ratio);
        if (ratio > est.value) {
            est.value = ratio;
            est.best_probe = p;
        }
    }
    return est;
}

ConstantEstimate estimate_reference_constant(double r, const TimeGrid& grid, const P1Space& space, int probes,
                                             std::uint64_t seed)
{
    const SparseMatrix& k = space.stiffness_identity();
    return estimate_mr_constant([&k](Index) { return k; }, r, grid, space, probes, seed, 1.0);
}

MrRatioReport mr_ratio_report(const CoefficientField& field, double r, double q, const TimeGrid& grid,
                              const P1Space& space, int probes, std::uint64_t seed, std::optional<Window> window,
                              double shift)
{
    if (probes < 1) {
        throw std::invalid_argument("need at least one probe");
    }
    for (double j : field.jump_times()) {
        if (!grid.contains(j)) {
            throw std::invalid_argument("time grid is missing the coefficient jump time " + std::to_string(j));
        }
    }
    const ImplicitEuler solver(field_stiffness(field, grid, space), grid, space, shift);
    const auto family = make_probes(solver.stiffness(1), grid, space, probes, seed);
    const double cl = field.bounds().lower();
    const double cu = field.bounds().upper();
    MrRatioReport rep;
    rep.bound = 8.0 * (1.0 + cl + cu) / cl;
    rep.r_in_window = window.has_value() && r > window->lo && r < window->hi;
    rep.probes = family.size();
    const double qp = conjugate(q);
    for (const auto& f : family) {
        const double fn2 = bochner_norm(dual_norm_series(f, space), grid, r);
        if (fn2 == 0.0) {
            continue;
        }
        const Trajectory u = solver.solve(f);
        rep.max_tilde_ratio = std::max(rep.max_tilde_ratio, mr_tilde_norm(u, r, space) / fn2);
        double fnq = fn2;
        if (q != 2.0) {
            std::vector<double> s(f.size(), 0.0);
            for (std::size_t k = 1; k < f.size(); ++k) {
                const DualNorm dn = dual_norm(f[k], space, qp);
                s[k] = dn.value;
                rep.dual_converged = rep.dual_converged && dn.converged;
            }
            fnq = bochner_norm(s, grid, r);
        }
        const MrNorm mr = mr_norm_parts(u, r, q, space);
        rep.dual_converged = rep.dual_converged && mr.converged;
        if (fnq > 0.0) {
            rep.max_mr_ratio = std::max(rep.max_mr_ratio, mr.total() / fnq);
        }
    }
    rep.pass = !rep.r_in_window || rep.max_tilde_ratio <= rep.bound * kWindowBoundTolerance;
    return rep;
}

}  // namespace mrlab
