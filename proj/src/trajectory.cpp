#include "mrlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mrlab {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes))
{
    if (nodes_.size() < 2) {
        throw std::invalid_argument("time grid needs at least two nodes");
    }
    if (nodes_.front() != 0.0) {
        throw std::invalid_argument("time grid must start at t = 0");
    }
    for (std::size_t k = 1; k < nodes_.size(); ++k) {
        if (!(nodes_[k] > nodes_[k - 1]) || !std::isfinite(nodes_[k])) {
            throw std::invalid_argument("time grid nodes must be strictly increasing");
        }
    }
}

TimeGrid TimeGrid::uniform(double horizon, Index steps, const std::vector<double>& extra_nodes)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("time horizon T must be positive");
    }
    if (steps < 1) {
        throw std::invalid_argument("time grid needs at least one step");
    }
    std::vector<double> nodes;
    for (Index k = 0; k <= steps; ++k) {
        nodes.push_back(k == steps ? horizon : horizon * static_cast<double>(k) / static_cast<double>(steps));
    }
    const double tol = 1e-12 * horizon;
    for (double t : extra_nodes) {
        if (!(t > 0.0 && t < horizon)) {
            throw std::invalid_argument("extra time nodes must lie inside (0, T)");
        }
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
        const bool near_next = it != nodes.end() && std::abs(*it - t) <= tol;
        const bool near_prev = it != nodes.begin() && std::abs(*(it - 1) - t) <= tol;
        if (!near_next && !near_prev) {
            nodes.insert(it, t);
        }
    }
    return TimeGrid(std::move(nodes));
}

bool TimeGrid::contains(double t) const
{
    const double tol = 1e-12 * horizon();
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t - tol);
    return it != nodes_.end() && std::abs(*it - t) <= tol;
}

Trajectory::Trajectory(TimeGrid grid, std::vector<Vector> values, std::string scheme)
    : grid_(std::move(grid)), values_(std::move(values)), scheme_(std::move(scheme))
{
    if (static_cast<Index>(values_.size()) != grid_.num_nodes()) {
        throw std::invalid_argument("trajectory needs one vector per grid node");
    }
    for (const auto& v : values_) {
        if (v.size() != values_.front().size()) {
            throw std::invalid_argument("trajectory vectors differ in dimension");
        }
    }
    if (values_.front().size() > 0 && values_.front().cwiseAbs().maxCoeff() != 0.0) {
        throw std::invalid_argument("trajectory must start from u_0 = 0");
    }
}

Trajectory Trajectory::zero(TimeGrid grid, Index dofs)
{
    const auto n = static_cast<std::size_t>(grid.num_nodes());
    return Trajectory(std::move(grid), std::vector<Vector>(n, Vector::Zero(dofs)));
}

Vector Trajectory::backward_difference(Index k) const
{
    return (at(k) - at(k - 1)) / grid_.step(k);
}

Trajectory Trajectory::scaled(double s) const
{
    auto v = values_;
    for (auto& x : v) {
        x *= s;
    }
    return Trajectory(grid_, std::move(v), scheme_);
}

namespace {

void require_compatible(const Trajectory& a, const Trajectory& b)
{
    if (a.grid().nodes() != b.grid().nodes() || a.dofs() != b.dofs()) {
        throw std::invalid_argument("trajectories live on different grids or spaces");
    }
}

}  // namespace

Trajectory operator+(const Trajectory& a, const Trajectory& b)
{
    require_compatible(a, b);
    auto v = a.values_;
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] += b.values_[k];
    }
    return Trajectory(a.grid_, std::move(v), a.scheme_);
}

Trajectory operator-(const Trajectory& a, const Trajectory& b)
{
    return a + b.scaled(-1.0);
}

double Trajectory::sup_l2(const SparseMatrix& mass) const
{
    double best = 0.0;
    for (const auto& v : values_) {
        best = std::max(best, std::sqrt(std::max(0.0, v.dot(mass * v))));
    }
    return best;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << 't';
    for (Index i = 0; i < traj.dofs(); ++i) {
        out << ",dof_" << i;
    }
    out << '\n';
    char buf[40];
    for (Index k = 0; k < traj.grid().num_nodes(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.grid().time(k));
        out << buf;
        for (Index i = 0; i < traj.dofs(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", traj.at(k)[i]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace mrlab
