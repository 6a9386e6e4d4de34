#include "helpers.hpp"
#include "mrlab/coefficients.hpp"
#include "mrlab/errors.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <sstream>

using namespace mrlab;
using namespace mrlab::test;

TEST(IntervalMesh, SmallestMesh)
{
    const Mesh m = build_interval_mesh(1, 1.0);
    EXPECT_EQ(m.num_vertices(), 2);
    EXPECT_EQ(m.num_cells(), 1);
    EXPECT_DOUBLE_EQ(m.vertex(0)[0], 0.0);
    EXPECT_DOUBLE_EQ(m.vertex(1)[0], 1.0);
}

TEST(IntervalMesh, UniformSpacing)
{
    const Mesh m = build_interval_mesh(4, 2.0);
    ASSERT_EQ(m.num_vertices(), 5);
    for (Index i = 0; i < 5; ++i) {
        EXPECT_NEAR(m.vertex(i)[0], 0.5 * static_cast<double>(i), 1e-15);
    }
    const Mesh thirds = build_interval_mesh(3, 1.0);
    EXPECT_NEAR(thirds.vertex(1)[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(thirds.vertex(2)[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(thirds.measure(), 1.0, 1e-15);
}

TEST(IntervalMesh, RejectsBadInput)
{
    EXPECT_THROW(build_interval_mesh(0, 1.0), std::invalid_argument);
    EXPECT_THROW(build_interval_mesh(2, -1.0), std::invalid_argument);
}

TEST(RectMesh, Counts)
{
    const Mesh a = build_rect_mesh(1, 1, 1.0, 1.0);
    EXPECT_EQ(a.num_vertices(), 4);
    EXPECT_EQ(a.num_cells(), 2);
    const Mesh b = build_rect_mesh(2, 2, 1.0, 1.0);
    EXPECT_EQ(b.num_vertices(), 9);
    EXPECT_EQ(b.num_cells(), 8);
    const Mesh c = build_rect_mesh(3, 1, 3.0, 1.0);
    EXPECT_EQ(c.num_vertices(), 8);
    EXPECT_EQ(c.num_cells(), 6);
    EXPECT_NEAR(c.measure(), 3.0, 1e-14);
}

TEST(Mesh, DegenerateCellNamesTheCell)
{
    std::vector<Point> v{{0, 0}, {1, 0}, {0, 1}, {2, 0}};
    std::vector<std::array<Index, 3>> cells{{0, 1, 2}, {0, 1, 3}};
    try {
        Mesh m(2, v, cells);
        FAIL() << "degenerate cell accepted";
    } catch (const MeshError& e) {
        EXPECT_EQ(e.cell(), 1);
    }
}

TEST(Mesh, RoundTripThroughText)
{
    const Mesh m = build_rect_mesh(2, 3, 1.0, 2.0);
    std::stringstream s;
    write_mesh(s, m);
    const Mesh back = read_mesh(s);
    ASSERT_EQ(back.num_vertices(), m.num_vertices());
    ASSERT_EQ(back.num_cells(), m.num_cells());
    for (Index c = 0; c < m.num_cells(); ++c) {
        EXPECT_DOUBLE_EQ(back.cell_measure(c), m.cell_measure(c));
    }
}

TEST(Boundary, SelectorVariants)
{
    const Mesh m = build_interval_mesh(4, 1.0);
    const BoundaryPartition all = mark_dirichlet(m, everywhere);
    EXPECT_EQ(all.dirichlet_vertices, (std::vector<Index>{0, 4}));
    EXPECT_EQ(all.num_free(), 3);
    EXPECT_EQ(mark_dirichlet(m, nowhere).num_free(), 5);
    const BoundaryPartition left = mark_dirichlet(m, at_left);
    EXPECT_EQ(left.num_free(), 4);
    EXPECT_EQ(left.dof_of_vertex[0], -1);
}

TEST(Assembly, HandValues)
{
    const P1Space s = single_dof_space();
    ASSERT_EQ(s.num_dofs(), 1);
    EXPECT_NEAR(s.stiffness_identity().coeff(0, 0), 4.0, 1e-14);
    EXPECT_NEAR(s.mass().coeff(0, 0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.gram().coeff(0, 0), 13.0 / 3.0, 1e-14);
    const Vector psi = elliptic_solve(s.gram(), Vector::Ones(1));
    EXPECT_NEAR(psi[0], 3.0 / 13.0, 1e-15);
    EXPECT_EQ(elliptic_solve(s.gram(), Vector::Zero(1)).norm(), 0.0);
}

TEST(Assembly, LinearInCoefficient)
{
    const Mesh m = build_rect_mesh(3, 3, 1.0, 1.0);
    const BoundaryPartition p = mark_dirichlet(m, at_left);
    const auto k1 = assemble_stiffness(m, p, [](Index) { return CoeffMatrix(CoeffMatrix::Identity(2, 2)); });
    const auto k2 = assemble_stiffness(m, p, [](Index) { return CoeffMatrix(2.0 * CoeffMatrix::Identity(2, 2)); });
    const auto k0 = assemble_stiffness(m, p, [](Index) { return CoeffMatrix(CoeffMatrix::Zero(2, 2)); });
    EXPECT_EQ((k2.dense() - 2.0 * k1.dense()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(k0.dense().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(k1.symmetric());
}

TEST(Assembly, NonsymmetricCoefficientFlagged)
{
    const Mesh m = build_rect_mesh(2, 2, 1.0, 1.0);
    const BoundaryPartition p = mark_dirichlet(m, nowhere);
    CoeffMatrix a(2, 2);
    a << 1.0, 1.0, 0.0, 1.0;
    const auto k = assemble_stiffness(m, p, [&](Index) { return a; });
    EXPECT_FALSE(k.symmetric());
}

TEST(Assembly, MassPartitionOfUnityAndScaling)
{
    for (const Mesh& m : {build_interval_mesh(5, 2.0), build_rect_mesh(3, 2, 1.5, 1.0)}) {
        const auto mass = assemble_mass(m, mark_dirichlet(m, nowhere));
        EXPECT_NEAR(mass.dense().sum(), m.measure(), 1e-13);
    }
    const Mesh m = build_interval_mesh(4, 1.0);
    const auto a = assemble_mass(m, mark_dirichlet(m, nowhere)).dense();
    const Mesh big = m.scaled(2.0);
    const auto b = assemble_mass(big, mark_dirichlet(big, nowhere)).dense();
    EXPECT_LE((b - 2.0 * a).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Assembly, GramSymmetricPositive)
{
    const P1Space s = space_of(build_rect_mesh(4, 3, 1.0, 1.0), at_left);
    const Eigen::MatrixXd g = s.gram().dense();
    EXPECT_LE((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(OperatorNorm, DualityMapAndScaling)
{
    const P1Space s = space_of(build_rect_mesh(3, 3, 1.0, 1.0), everywhere);
    EXPECT_NEAR(operator_norm_W12(s.gram(), s.gram()), 1.0, 1e-8);
    EXPECT_NEAR(operator_norm_W12(2.0 * s.gram(), s.gram()), 2.0, 1e-8);
}

// Dense oracle: the V -> V* norm equals the largest singular value of L^{-1} K L^{-T}, G = L L^T.
TEST(OperatorNorm, MatchesDenseSvd)
{
    const P1Space s = space_of(build_interval_mesh(6, 1.0), everywhere);
    ASSERT_EQ(s.num_dofs(), 5);
    for (double c : {1.0, 2.5, 7.0}) {
        const SparseMatrix k = c * s.stiffness_identity() + s.mass();
        const Eigen::MatrixXd g = s.gram().dense();
        const Eigen::LLT<Eigen::MatrixXd> llt(g);
        const Eigen::MatrixXd l = llt.matrixL();
        const Eigen::MatrixXd a = l.triangularView<Eigen::Lower>().solve(
            l.triangularView<Eigen::Lower>().solve(k.dense()).transpose());
        const double oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
        const double norm = operator_norm_W12(k, s.gram());
        EXPECT_NEAR(norm, oracle, 1e-8 * oracle);
        EXPECT_LE(norm, c + 1e-8);
    }
}

TEST(OperatorNorm, NonsymmetricMatchesDenseSvd)
{
    const P1Space s = space_of(build_rect_mesh(2, 3, 1.0, 1.0), nowhere);
    CoeffMatrix a(2, 2);
    a << 1.0, 0.7, -0.3, 2.0;
    const SparseMatrix k = assemble_stiffness(s.mesh(), s.partition(), [&](Index) { return a; });
    const Eigen::MatrixXd g = s.gram().dense();
    const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(g).matrixL();
    const Eigen::MatrixXd m = l.triangularView<Eigen::Lower>().solve(
        l.triangularView<Eigen::Lower>().solve(k.dense()).transpose());
    const double oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
    EXPECT_NEAR(operator_norm_W12(k, s.gram()), oracle, 1e-7 * oracle);
}

TEST(LinearSolver, NonsymmetricSystem)
{
    Eigen::SparseMatrix<double> a(3, 3);
    a.insert(0, 0) = 4.0;
    a.insert(0, 1) = 1.0;
    a.insert(1, 1) = 3.0;
    a.insert(2, 1) = -1.0;
    a.insert(2, 2) = 2.0;
    const LinearSolver solver{SparseMatrix(a)};
    const Vector x(Eigen::Vector3d(1.0, -2.0, 0.5));
    const Vector b = a * x;
    EXPECT_LE((solver.solve(b) - x).norm(), 1e-13);
}

TEST(Coo, WritesTriplets)
{
    const P1Space s = single_dof_space();
    std::stringstream out;
    write_coo(out, s.gram());
    double v = 0.0;
    Index i = -1;
    Index j = -1;
    out >> i >> j >> v;
    EXPECT_EQ(i, 0);
    EXPECT_EQ(j, 0);
    EXPECT_DOUBLE_EQ(v, 13.0 / 3.0);
}
