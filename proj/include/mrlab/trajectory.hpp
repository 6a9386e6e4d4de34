#pragma once

#include "mrlab/fem.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mrlab {

/// Nodes 0 = t_0 < t_1 < ... < t_N = T.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> nodes);

    /// N equal steps on (0, T), merged with any extra nodes inside (0, T).
    static TimeGrid uniform(double horizon, Index steps, const std::vector<double>& extra_nodes = {});

    double horizon() const noexcept { return nodes_.back(); }
    Index num_steps() const noexcept { return static_cast<Index>(nodes_.size()) - 1; }
    Index num_nodes() const noexcept { return static_cast<Index>(nodes_.size()); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    double time(Index k) const { return nodes_[static_cast<std::size_t>(k)]; }
    /// t_k - t_{k-1} for k >= 1.
    double step(Index k) const { return time(k) - time(k - 1); }
    /// True if some node lies within 1e-12 * T of t.
    bool contains(double t) const;

private:
    std::vector<double> nodes_;
};

/// Nodal coefficient vectors of a time-discrete solution, one per grid node,
/// with u_0 = 0.
class Trajectory {
public:
    Trajectory(TimeGrid grid, std::vector<Vector> values, std::string scheme = "implicit_euler");
    /// All-zero trajectory.
    static Trajectory zero(TimeGrid grid, Index dofs);

    const TimeGrid& grid() const noexcept { return grid_; }
    const std::vector<Vector>& values() const noexcept { return values_; }
    const Vector& at(Index k) const { return values_[static_cast<std::size_t>(k)]; }
    Index dofs() const noexcept { return values_.front().size(); }
    const std::string& scheme() const noexcept { return scheme_; }

    /// (u_k - u_{k-1}) / dt_k for k >= 1.
    Vector backward_difference(Index k) const;

    Trajectory scaled(double s) const;
    friend Trajectory operator+(const Trajectory& a, const Trajectory& b);
    friend Trajectory operator-(const Trajectory& a, const Trajectory& b);

    /// max_k sqrt(u_k^T M u_k), the discrete C(J; L^2) norm.
    double sup_l2(const SparseMatrix& mass) const;

private:
    TimeGrid grid_;
    std::vector<Vector> values_;
    std::string scheme_;
};

/// CSV with header "t,dof_0,...,dof_{m-1}", one row per node, %.17g values.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace mrlab
