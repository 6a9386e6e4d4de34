#pragma once

#include "mrlab/fem.hpp"

#include <random>

namespace mrlab::test {

inline P1Space space_of(Mesh mesh, bool (*selector)(const Point&))
{
    BoundaryPartition part = mark_dirichlet(mesh, selector);
    return P1Space(std::move(mesh), std::move(part));
}

inline bool everywhere(const Point&) { return true; }
inline bool nowhere(const Point&) { return false; }
inline bool at_left(const Point& p) { return p[0] < 1e-12; }

// 1D, two cells on (0, 1), pure Dirichlet: a single interior DOF at x = 1/2.
inline P1Space single_dof_space() { return space_of(build_interval_mesh(2, 1.0), everywhere); }

inline Vector random_vector(Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        v[i] = normal(rng);
    }
    return v;
}

}  // namespace mrlab::test
