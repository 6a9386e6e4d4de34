#include "mrlab/fem.hpp"

#include "mrlab/errors.hpp"

#include <Eigen/LU>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mrlab {

namespace {

constexpr double kSymmetryTol = 1e-12;

double signed_measure(int dim, const std::vector<Point>& v, const std::array<Index, 3>& c)
{
    const auto& p0 = v[static_cast<std::size_t>(c[0])];
    const auto& p1 = v[static_cast<std::size_t>(c[1])];
    if (dim == 1) {
        return p1[0] - p0[0];
    }
    const auto& p2 = v[static_cast<std::size_t>(c[2])];
    return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double cell_diameter(int dim, const std::vector<Point>& v, const std::array<Index, 3>& c)
{
    double diam = 0.0;
    for (int a = 0; a <= dim; ++a) {
        for (int b = a + 1; b <= dim; ++b) {
            const auto& p = v[static_cast<std::size_t>(c[a])];
            const auto& q = v[static_cast<std::size_t>(c[b])];
            diam = std::max(diam, std::hypot(p[0] - q[0], p[1] - q[1]));
        }
    }
    return diam;
}

// Columns are the gradients of the local hat functions.
Eigen::Matrix<double, 2, 3> local_gradients(const Mesh& mesh, Index c)
{
    Eigen::Matrix<double, 2, 3> g = Eigen::Matrix<double, 2, 3>::Zero();
    const auto vs = mesh.cell(c);
    const auto& p0 = mesh.vertex(vs[0]);
    const auto& p1 = mesh.vertex(vs[1]);
    if (mesh.dimension() == 1) {
        const double h = p1[0] - p0[0];
        g(0, 0) = -1.0 / h;
        g(0, 1) = 1.0 / h;
        return g;
    }
    const auto& p2 = mesh.vertex(vs[2]);
    Eigen::Matrix2d jac;
    jac << p1[0] - p0[0], p2[0] - p0[0], p1[1] - p0[1], p2[1] - p0[1];
    const Eigen::Matrix2d jit = jac.inverse().transpose();
    Eigen::Matrix<double, 2, 3> ref;
    ref << -1.0, 1.0, 0.0, -1.0, 0.0, 1.0;
    g = jit * ref;
    return g;
}

SparseMatrix from_triplets(Index n, const std::vector<Eigen::Triplet<double>>& t)
{
    SparseMatrix::Storage m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return SparseMatrix(std::move(m));
}

}  // namespace

// ---------------------------------------------------------------------------
// Mesh

Mesh::Mesh(int dimension, std::vector<Point> vertices, std::vector<std::array<Index, 3>> cells)
    : dim_(dimension), vertices_(std::move(vertices)), cells_(std::move(cells))
{
    if (dim_ != 1 && dim_ != 2) {
        throw MeshError("mesh dimension must be 1 or 2, got " + std::to_string(dim_));
    }
    if (cells_.empty()) {
        throw MeshError("mesh has no cells");
    }
    const auto nv = static_cast<Index>(vertices_.size());
    measures_.reserve(cells_.size());
    std::map<std::vector<Index>, std::vector<Index>> facet_cells;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        auto& cell = cells_[c];
        if (dim_ == 1) {
            cell[2] = -1;
        }
        for (int a = 0; a <= dim_; ++a) {
            if (cell[a] < 0 || cell[a] >= nv) {
                throw MeshError("cell " + std::to_string(c) + " references vertex "
                                    + std::to_string(cell[a]) + " out of range",
                                static_cast<long>(c));
            }
        }
        const double m = std::abs(signed_measure(dim_, vertices_, cell));
        const double diam = cell_diameter(dim_, vertices_, cell);
        if (!(m > 1e-14 * std::pow(diam, dim_)) || !(diam > 0.0)) {
            throw MeshError("degenerate cell " + std::to_string(c), static_cast<long>(c));
        }
        measures_.push_back(m);
        for (int skip = 0; skip <= dim_; ++skip) {
            std::vector<Index> facet;
            for (int a = 0; a <= dim_; ++a) {
                if (a != skip) {
                    facet.push_back(cell[a]);
                }
            }
            std::sort(facet.begin(), facet.end());
            facet_cells[facet].push_back(static_cast<Index>(c));
        }
    }
    for (auto& [facet, owners] : facet_cells) {
        if (owners.size() > 2) {
            throw MeshError("facet shared by more than two cells", static_cast<long>(owners[2]));
        }
        if (owners.size() == 1) {
            boundary_.push_back({facet, owners.front()});
        }
    }
}

Point Mesh::barycenter(Index c) const
{
    Point b{0.0, 0.0};
    const auto vs = cell(c);
    for (Index v : vs) {
        b[0] += vertex(v)[0];
        b[1] += vertex(v)[1];
    }
    const double n = static_cast<double>(vs.size());
    return {b[0] / n, b[1] / n};
}

double Mesh::measure() const
{
    double total = 0.0;
    for (double m : measures_) {
        total += m;
    }
    return total;
}

std::vector<Index> Mesh::boundary_vertices() const
{
    std::vector<Index> out;
    for (const auto& f : boundary_) {
        out.insert(out.end(), f.vertices.begin(), f.vertices.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Mesh Mesh::scaled(double factor) const
{
    auto v = vertices_;
    for (auto& p : v) {
        p[0] *= factor;
        p[1] *= factor;
    }
    return Mesh(dim_, std::move(v), cells_);
}

Mesh build_interval_mesh(Index n_cells, double length)
{
    if (n_cells < 1) {
        throw std::invalid_argument("interval mesh needs at least one cell");
    }
    if (!(length > 0.0)) {
        throw std::invalid_argument("interval length must be positive");
    }
    std::vector<Point> v;
    std::vector<std::array<Index, 3>> c;
    for (Index i = 0; i <= n_cells; ++i) {
        v.push_back({length * static_cast<double>(i) / static_cast<double>(n_cells), 0.0});
    }
    for (Index i = 0; i < n_cells; ++i) {
        c.push_back({i, i + 1, -1});
    }
    return Mesh(1, std::move(v), std::move(c));
}

Mesh build_rect_mesh(Index nx, Index ny, double lx, double ly)
{
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("rectangle mesh needs nx, ny >= 1");
    }
    if (!(lx > 0.0) || !(ly > 0.0)) {
        throw std::invalid_argument("rectangle side lengths must be positive");
    }
    std::vector<Point> v;
    for (Index j = 0; j <= ny; ++j) {
        for (Index i = 0; i <= nx; ++i) {
            v.push_back({lx * static_cast<double>(i) / static_cast<double>(nx),
                         ly * static_cast<double>(j) / static_cast<double>(ny)});
        }
    }
    const auto id = [nx](Index i, Index j) { return j * (nx + 1) + i; };
    std::vector<std::array<Index, 3>> c;
    for (Index j = 0; j < ny; ++j) {
        for (Index i = 0; i < nx; ++i) {
            // Diagonal from (i,j) to (i+1,j+1) in every rectangle.
            c.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            c.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return Mesh(2, std::move(v), std::move(c));
}

void write_mesh(std::ostream& out, const Mesh& mesh)
{
    const int d = mesh.dimension();
    out << d << ' ' << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
    char buf[64];
    for (const auto& p : mesh.vertices()) {
        for (int k = 0; k < d; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", p[static_cast<std::size_t>(k)]);
            out << (k ? " " : "") << buf;
        }
        out << '\n';
    }
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        for (std::size_t a = 0; a < vs.size(); ++a) {
            out << (a ? " " : "") << vs[a];
        }
        out << '\n';
    }
}

Mesh read_mesh(std::istream& in)
{
    int d = 0;
    Index nv = 0;
    Index nc = 0;
    if (!(in >> d >> nv >> nc) || nv < 0 || nc < 0) {
        throw MeshError("mesh header must read 'd n_vertices n_cells'");
    }
    if (d != 1 && d != 2) {
        throw MeshError("mesh dimension must be 1 or 2");
    }
    std::vector<Point> v(static_cast<std::size_t>(nv), Point{0.0, 0.0});
    for (auto& p : v) {
        for (int k = 0; k < d; ++k) {
            if (!(in >> p[static_cast<std::size_t>(k)])) {
                throw MeshError("truncated vertex section");
            }
        }
    }
    std::vector<std::array<Index, 3>> c(static_cast<std::size_t>(nc), {-1, -1, -1});
    for (auto& cell : c) {
        for (int a = 0; a <= d; ++a) {
            if (!(in >> cell[static_cast<std::size_t>(a)])) {
                throw MeshError("truncated cell section");
            }
        }
    }
    return Mesh(d, std::move(v), std::move(c));
}

BoundaryPartition mark_dirichlet(const Mesh& mesh, const std::function<bool(const Point&)>& selector)
{
    BoundaryPartition p;
    for (Index v : mesh.boundary_vertices()) {
        if (selector(mesh.vertex(v))) {
            p.dirichlet_vertices.push_back(v);
        }
    }
    p.dof_of_vertex.assign(static_cast<std::size_t>(mesh.num_vertices()), -1);
    std::size_t next_dirichlet = 0;
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
        if (next_dirichlet < p.dirichlet_vertices.size() && p.dirichlet_vertices[next_dirichlet] == v) {
            ++next_dirichlet;
            continue;
        }
        p.dof_of_vertex[static_cast<std::size_t>(v)] = static_cast<Index>(p.free_dofs.size());
        p.free_dofs.push_back(v);
    }
    return p;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(Storage m) : m_(std::move(m))
{
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("SparseMatrix must be square");
    }
    m_.makeCompressed();
    const Storage diff = m_ - Storage(m_.transpose());
    double asym = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k) {
        for (Storage::InnerIterator it(diff, k); it; ++it) {
            asym = std::max(asym, std::abs(it.value()));
        }
    }
    symmetric_ = asym < kSymmetryTol;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("SparseMatrix sum: size mismatch");
    }
    return SparseMatrix(a.m_ + b.m_);
}

SparseMatrix operator*(double s, const SparseMatrix& a)
{
    return SparseMatrix(SparseMatrix::Storage(s * a.m_));
}

void write_coo(std::ostream& out, const SparseMatrix& m)
{
    char buf[96];
    const auto& s = m.eigen();
    for (Index k = 0; k < s.outerSize(); ++k) {
        for (SparseMatrix::Storage::InnerIterator it(s, k); it; ++it) {
            std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(it.row()),
                          static_cast<long long>(it.col()), it.value());
            out << buf;
        }
    }
}

// ---------------------------------------------------------------------------
// Assembly

SparseMatrix assemble_stiffness(const Mesh& mesh, const BoundaryPartition& partition,
                                const std::function<CoeffMatrix(Index cell)>& sampler)
{
    const int d = mesh.dimension();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(mesh.num_cells() * (d + 1) * (d + 1)));
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const CoeffMatrix mu = sampler(c);
        if (mu.rows() != d || mu.cols() != d) {
            throw std::invalid_argument("coefficient on cell " + std::to_string(c) + " is not "
                                        + std::to_string(d) + "x" + std::to_string(d));
        }
        if (!mu.allFinite()) {
            throw std::invalid_argument("non-finite coefficient on cell " + std::to_string(c));
        }
        const Eigen::Matrix<double, 2, 3> g = local_gradients(mesh, c);
        const auto vs = mesh.cell(c);
        const double vol = mesh.cell_measure(c);
        for (int a = 0; a <= d; ++a) {
            const Index row = partition.dof_of_vertex[static_cast<std::size_t>(vs[a])];
            if (row < 0) {
                continue;
            }
            for (int b = 0; b <= d; ++b) {
                const Index col = partition.dof_of_vertex[static_cast<std::size_t>(vs[b])];
                if (col < 0) {
                    continue;
                }
                // (mu grad phi_b) . grad phi_a
                const double v = g.col(a).head(d).dot(mu * g.col(b).head(d));
                trip.emplace_back(row, col, vol * v);
            }
        }
    }
    return from_triplets(partition.num_free(), trip);
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const BoundaryPartition& partition,
                                std::span<const CoeffMatrix> per_cell)
{
    if (static_cast<Index>(per_cell.size()) != mesh.num_cells()) {
        throw std::invalid_argument("need one coefficient per cell");
    }
    return assemble_stiffness(mesh, partition,
                              [&](Index c) { return per_cell[static_cast<std::size_t>(c)]; });
}

SparseMatrix assemble_mass(const Mesh& mesh, const BoundaryPartition& partition)
{
    const int d = mesh.dimension();
    std::vector<Eigen::Triplet<double>> trip;
    // Exact P1 mass: |T| (1 + delta_ab) / ((d+1)(d+2)).
    const double denom = static_cast<double>((d + 1) * (d + 2));
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        const double vol = mesh.cell_measure(c);
        for (int a = 0; a <= d; ++a) {
            const Index row = partition.dof_of_vertex[static_cast<std::size_t>(vs[a])];
            if (row < 0) {
                continue;
            }
            for (int b = 0; b <= d; ++b) {
                const Index col = partition.dof_of_vertex[static_cast<std::size_t>(vs[b])];
                if (col < 0) {
                    continue;
                }
                trip.emplace_back(row, col, vol * (a == b ? 2.0 : 1.0) / denom);
            }
        }
    }
    return from_triplets(partition.num_free(), trip);
}

SparseMatrix gram_W12(const Mesh& mesh, const BoundaryPartition& partition)
{
    const CoeffMatrix id = CoeffMatrix::Identity(mesh.dimension(), mesh.dimension());
    return assemble_stiffness(mesh, partition, [&](Index) { return id; }) + assemble_mass(mesh, partition);
}

// ---------------------------------------------------------------------------
// Solvers

struct LinearSolver::Impl {
    SparseMatrix::Storage a;
    std::optional<Eigen::SimplicialLLT<SparseMatrix::Storage>> llt;
    std::optional<Eigen::SparseLU<SparseMatrix::Storage>> lu;
    std::optional<Eigen::ConjugateGradient<SparseMatrix::Storage, Eigen::Lower | Eigen::Upper>> cg;
};

LinearSolver::LinearSolver(const SparseMatrix& a) : impl_(std::make_unique<Impl>())
{
    impl_->a = a.eigen();
    if (a.size() == 0) {
        return;
    }
    if (a.symmetric()) {
        impl_->llt.emplace(impl_->a);
        if (impl_->llt->info() == Eigen::Success) {
            return;
        }
        impl_->llt.reset();
        impl_->cg.emplace();
        impl_->cg->setTolerance(1e-12);
        impl_->cg->setMaxIterations(10 * a.size() + 100);
        impl_->cg->compute(impl_->a);
        return;
    }
    impl_->lu.emplace();
    impl_->lu->analyzePattern(impl_->a);
    impl_->lu->factorize(impl_->a);
    if (impl_->lu->info() != Eigen::Success) {
        throw SolverError("sparse LU factorization failed: matrix is singular", 1.0);
    }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

Vector LinearSolver::solve(const Vector& rhs) const
{
    if (rhs.size() != impl_->a.rows()) {
        throw std::invalid_argument("right-hand side has wrong dimension");
    }
    if (rhs.size() == 0) {
        return Vector();
    }
    Vector x;
    if (impl_->llt) {
        x = impl_->llt->solve(rhs);
    } else if (impl_->lu) {
        x = impl_->lu->solve(rhs);
    } else {
        x = impl_->cg->solve(rhs);
    }
    const double bn = rhs.norm();
    const double res = x.allFinite() ? (impl_->a * x - rhs).norm() / (bn > 0.0 ? bn : 1.0)
                                     : std::numeric_limits<double>::infinity();
    if (!(res <= 1e-8)) {
        std::ostringstream msg;
        msg << "linear solve failed, relative residual " << res;
        throw SolverError(msg.str(), res);
    }
    return x;
}

Vector elliptic_solve(const SparseMatrix& a_plus_i, const Vector& rhs)
{
    return LinearSolver(a_plus_i).solve(rhs);
}

double operator_norm_W12(const SparseMatrix& k, const SparseMatrix& g)
{
    if (k.size() != g.size()) {
        throw std::invalid_argument("operator_norm_W12: size mismatch");
    }
    const Index n = k.size();
    if (n == 0) {
        return 0.0;
    }
    // Subspace iteration with Rayleigh-Ritz for S = G^{-1} K^T G^{-1} K, self-adjoint in the G inner product.
    const LinearSolver gs(g);
    const auto& km = k.eigen();
    const auto& gm = g.eigen();
    const Index p = std::min<Index>(n, 6);
    auto apply_s = [&](const Vector& x) { return gs.solve(Vector(km.transpose() * gs.solve(Vector(km * x)))); };
    auto g_orthonormalize = [&](Eigen::MatrixXd& x) {
        for (Index c = 0; c < x.cols(); ++c) {
            for (int pass = 0; pass < 2; ++pass) {
                for (Index d = 0; d < c; ++d) {
                    x.col(c) -= x.col(d).dot(gm * x.col(c)) * x.col(d);
                }
            }
            const double nrm = std::sqrt(std::max(0.0, x.col(c).dot(gm * x.col(c))));
            if (nrm > 0.0) {
                x.col(c) /= nrm;
            }
        }
    };
    Eigen::MatrixXd x(n, p);
    for (Index c = 0; c < p; ++c) {
        for (Index i = 0; i < n; ++i) {
            x(i, c) = std::sin(1.7 * static_cast<double>(i + 1) * static_cast<double>(c + 1) + 0.3)
                      + (c == 0 ? 1.0 : 0.0);
        }
    }
    g_orthonormalize(x);
    Eigen::MatrixXd y(n, p);
    for (int it = 0; it < 10000; ++it) {
        for (Index c = 0; c < p; ++c) {
            y.col(c) = apply_s(x.col(c));
        }
        Eigen::MatrixXd h = x.transpose() * (gm * y);
        h = 0.5 * (h + h.transpose()).eval();
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const double lambda = es.eigenvalues()(p - 1);
        if (lambda <= 0.0) {
            return 0.0;
        }
        const Vector w = es.eigenvectors().col(p - 1);
        const Vector xt = x * w;
        const Vector r = y * w - lambda * xt;
        const double rn = std::sqrt(std::max(0.0, r.dot(gm * r)));
        if (rn <= 1e-8 * lambda) {
            return std::sqrt(lambda);
        }
        x = y * es.eigenvectors().rowwise().reverse();
        g_orthonormalize(x);
    }
    throw SolverError("operator_norm_W12: subspace iteration did not converge in 10000 steps", 1.0);
}

// ---------------------------------------------------------------------------
// P1Space

P1Space::P1Space(Mesh mesh, BoundaryPartition partition)
    : mesh_(std::move(mesh)), partition_(std::move(partition))
{
    if (static_cast<Index>(partition_.dof_of_vertex.size()) != mesh_.num_vertices()) {
        throw std::invalid_argument("partition does not match mesh");
    }
    gradients_.reserve(static_cast<std::size_t>(mesh_.num_cells()));
    for (Index c = 0; c < mesh_.num_cells(); ++c) {
        gradients_.push_back(local_gradients(mesh_, c));
    }
    mass_ = assemble_mass(mesh_, partition_);
    const CoeffMatrix id = CoeffMatrix::Identity(mesh_.dimension(), mesh_.dimension());
    stiffness_id_ = assemble_stiffness(mesh_, partition_, [&](Index) { return id; });
    gram_ = stiffness_id_ + mass_;
    gram_solver_ = std::make_shared<const LinearSolver>(gram_);
}

Vector P1Space::expand(const Vector& free) const
{
    if (free.size() != num_dofs()) {
        throw std::invalid_argument("vector dimension does not match free DOFs");
    }
    Vector all = Vector::Zero(mesh_.num_vertices());
    for (Index i = 0; i < num_dofs(); ++i) {
        all[partition_.free_dofs[static_cast<std::size_t>(i)]] = free[i];
    }
    return all;
}

Vector P1Space::barycenter_values(const Vector& free) const
{
    const Vector all = expand(free);
    Vector out(mesh_.num_cells());
    for (Index c = 0; c < mesh_.num_cells(); ++c) {
        double s = 0.0;
        const auto vs = mesh_.cell(c);
        for (Index v : vs) {
            s += all[v];
        }
        out[c] = s / static_cast<double>(vs.size());
    }
    return out;
}

}  // namespace mrlab
