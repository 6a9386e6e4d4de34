#pragma once

// P1 finite elements on interval and triangle meshes: mesh containers,
// Dirichlet/free DOF bookkeeping, stiffness/mass/Gram assembly and the
// stationary solves built on them.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace mrlab {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Point = std::array<double, 2>;

/// Coefficient value on a cell: d x d with d <= 2, stored without heap allocation.
using CoeffMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

struct BoundaryFacet {
    std::vector<Index> vertices;  // one vertex in 1D, two in 2D
    Index cell;
};

/// Simplicial mesh (segments in 1D, triangles in 2D).
///
/// Construction validates vertex indices, rejects cells of zero measure and
/// facets shared by more than two cells, and derives the boundary facets.
class Mesh {
public:
    Mesh(int dimension, std::vector<Point> vertices, std::vector<std::array<Index, 3>> cells);

    int dimension() const noexcept { return dim_; }
    Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
    Index num_cells() const noexcept { return static_cast<Index>(cells_.size()); }
    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    const Point& vertex(Index i) const { return vertices_[static_cast<std::size_t>(i)]; }

    /// The d+1 vertex indices of a cell.
    std::span<const Index> cell(Index c) const
    {
        return {cells_[static_cast<std::size_t>(c)].data(), static_cast<std::size_t>(dim_ + 1)};
    }

    double cell_measure(Index c) const { return measures_[static_cast<std::size_t>(c)]; }
    Point barycenter(Index c) const;
    /// Total measure |Omega|.
    double measure() const;

    const std::vector<BoundaryFacet>& boundary_facets() const noexcept { return boundary_; }
    /// Sorted, unique vertices lying on some boundary facet.
    std::vector<Index> boundary_vertices() const;

    /// Scaling all coordinates by a factor.
    Mesh scaled(double factor) const;

private:
    int dim_;
    std::vector<Point> vertices_;
    std::vector<std::array<Index, 3>> cells_;
    std::vector<double> measures_;
    std::vector<BoundaryFacet> boundary_;
};

Mesh build_interval_mesh(Index n_cells, double length);
Mesh build_rect_mesh(Index nx, Index ny, double lx, double ly);

/// Plain-text mesh format: "d n_vertices n_cells", then d coordinates per
/// vertex line, then d+1 vertex indices per cell line.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

struct BoundaryPartition {
    std::vector<Index> dirichlet_vertices;  // sorted
    std::vector<Index> free_dofs;           // sorted by vertex index
    std::vector<Index> dof_of_vertex;       // -1 on Dirichlet vertices

    Index num_free() const noexcept { return static_cast<Index>(free_dofs.size()); }
};

/// Dirichlet set = boundary vertices accepted by the selector.
BoundaryPartition mark_dirichlet(const Mesh& mesh, const std::function<bool(const Point&)>& selector);

/// Square real sparse matrix over free DOFs.
///
/// The symmetry flag is derived on construction: it is set iff
/// max |M - M^T| < 1e-12.
class SparseMatrix {
public:
    using Storage = Eigen::SparseMatrix<double>;

    SparseMatrix() = default;
    explicit SparseMatrix(Storage m);

    const Storage& eigen() const noexcept { return m_; }
    Index size() const noexcept { return m_.rows(); }
    bool symmetric() const noexcept { return symmetric_; }
    double coeff(Index i, Index j) const { return m_.coeff(i, j); }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }

    Vector operator*(const Vector& x) const { return m_ * x; }
    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator*(double s, const SparseMatrix& a);

private:
    Storage m_;
    bool symmetric_ = true;
};

/// Coordinate text export, one "row col value" line per stored entry.
void write_coo(std::ostream& out, const SparseMatrix& m);

/// Stiffness matrix of the form (psi, phi) -> int mu grad psi . grad phi on free DOFs.
/// `per_cell` holds one d x d coefficient per cell.
SparseMatrix assemble_stiffness(const Mesh& mesh, const BoundaryPartition& partition,
                                std::span<const CoeffMatrix> per_cell);
SparseMatrix assemble_stiffness(const Mesh& mesh, const BoundaryPartition& partition,
                                const std::function<CoeffMatrix(Index cell)>& sampler);
SparseMatrix assemble_mass(const Mesh& mesh, const BoundaryPartition& partition);
/// Discrete duality map: identity-coefficient stiffness plus mass.
SparseMatrix gram_W12(const Mesh& mesh, const BoundaryPartition& partition);

/// Factorized system matrix. Cholesky when symmetric, LU otherwise, with a
/// conjugate-gradient fallback (tolerance 1e-12) for symmetric matrices whose
/// Cholesky factorization fails.
class LinearSolver {
public:
    explicit LinearSolver(const SparseMatrix& a);
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    /// Throws SolverError when the relative residual exceeds 1e-8.
    Vector solve(const Vector& rhs) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Vector elliptic_solve(const SparseMatrix& a_plus_i, const Vector& rhs);

/// Norm of K as a map from (R^n, G-norm) to (R^n, G^{-1}-norm): the square
/// root of the largest eigenvalue of G^{-1} K^T G^{-1} K, by power iteration
/// to relative residual 1e-8. Throws SolverError after 10000 iterations.
double operator_norm_W12(const SparseMatrix& k, const SparseMatrix& g);

/// Mesh, partition and the derived P1 data every norm and solver needs:
/// per-cell basis gradients, mass, identity stiffness, the Gram matrix and
/// its factorization. Immutable after construction.
class P1Space {
public:
    P1Space(Mesh mesh, BoundaryPartition partition);

    const Mesh& mesh() const noexcept { return mesh_; }
    const BoundaryPartition& partition() const noexcept { return partition_; }
    Index num_dofs() const noexcept { return partition_.num_free(); }
    int dimension() const noexcept { return mesh_.dimension(); }

    const SparseMatrix& mass() const noexcept { return mass_; }
    const SparseMatrix& stiffness_identity() const noexcept { return stiffness_id_; }
    const SparseMatrix& gram() const noexcept { return gram_; }
    const LinearSolver& gram_solver() const noexcept { return *gram_solver_; }

    /// Gradients of the d+1 local hat functions of a cell, one column each.
    const Eigen::Matrix<double, 2, 3>& basis_gradients(Index c) const
    {
        return gradients_[static_cast<std::size_t>(c)];
    }

    /// Free-DOF vector -> all-vertex values (zero on Dirichlet vertices).
    Vector expand(const Vector& free) const;
    /// Value of the P1 interpolant at the barycenter of each cell.
    Vector barycenter_values(const Vector& free) const;

private:
    Mesh mesh_;
    BoundaryPartition partition_;
    std::vector<Eigen::Matrix<double, 2, 3>> gradients_;
    SparseMatrix mass_;
    SparseMatrix stiffness_id_;
    SparseMatrix gram_;
    std::shared_ptr<const LinearSolver> gram_solver_;
};

}  // namespace mrlab
