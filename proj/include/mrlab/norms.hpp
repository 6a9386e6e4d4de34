#pragma once

// Discrete W^{1,q}, dual W^{-1,q}, Bochner L^r(J; X), maximal-regularity
// and reference-operator ("tilde") norms, plus the Hoelder quotient.
//
// A dual vector f acts on coefficient vectors as x -> f^T x. States are
// turned into functionals through the mass matrix.

#include "mrlab/fem.hpp"
#include "mrlab/trajectory.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mrlab {

/// (sum_T |T| |grad psi|_T^q + int |psi|^q)^(1/q). The gradient term is
/// exact; |psi|^q uses 3-point Gauss per segment in 1D and the edge-midpoint
/// rule in 2D (both exact for q = 2).
double w1q_norm(const Vector& v, const P1Space& space, double q);

/// Gradient of w1q_norm with respect to the free DOFs (zero at v = 0).
Vector w1q_norm_gradient(const Vector& v, const P1Space& space, double q);

struct DualNorm {
    double value = 0.0;
    bool converged = true;
    int iterations = 0;
};

/// sup_phi f^T phi / w1q_norm(phi, qprime). Exact Gram formula
/// sqrt(f^T G^{-1} f) for qprime = 2, ratio ascent otherwise.
DualNorm dual_norm(const Vector& f, const P1Space& space, double qprime);

/// Preconditioned ratio ascent for the dual norm at any qprime, started at
/// `initial` or at the Riesz representative G^{-1} f. Backtracking line
/// search; stops when the relative improvement drops below 1e-8 or after
/// 500 iterations (then `converged` is false).
DualNorm dual_norm_ascent(const Vector& f, const P1Space& space, double qprime,
                          const std::optional<Vector>& initial = std::nullopt);

/// (sum_{k>=1} dt_k s_k^r)^(1/r), right-endpoint rule; series[0] is unused.
double bochner_norm(std::span<const double> series, const TimeGrid& grid, double r);

/// Conjugate exponent q/(q-1).
double conjugate(double q);

struct MrNorm {
    double state = 0.0;       // ||u||_{L^r(J; W^{1,q})}
    double derivative = 0.0;  // ||u'||_{L^r(J; W^{-1,q})}
    bool converged = true;    // every dual-norm evaluation converged
    double total() const { return state + derivative; }
};

/// MR norm with D = W^{1,q}, X = W^{-1,q} = (W^{1,q'})^*, derivative by
/// backward differences mapped to functionals with the mass matrix.
MrNorm mr_norm_parts(const Trajectory& traj, double r, double q, const P1Space& space);
double mr_norm(const Trajectory& traj, double r, double q, const P1Space& space);

/// ||(d/dt + K) u||_{L^r(J; W^{-1,2})} computed node-wise as
/// dual_norm(M (u_k - u_{k-1})/dt_k + K u_k, 2). K defaults to the Gram
/// matrix (the duality map).
double mr_tilde_norm(const Trajectory& traj, double r, const P1Space& space,
                     const SparseMatrix* reference = nullptr);

/// max_{k<l} ||u_l - u_k||_M / (t_l - t_k)^alpha.
double holder_quotient(const Trajectory& traj, double alpha, const SparseMatrix& mass);

/// Per-node dual norms (q' = 2) of a list of functionals; entry 0 is left 0.
std::vector<double> dual_norm_series(const std::vector<Vector>& f, const P1Space& space);

}  // namespace mrlab
