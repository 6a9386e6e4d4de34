#include "helpers.hpp"
#include "mrlab/coefficients.hpp"

#include <gtest/gtest.h>

using namespace mrlab;
using namespace mrlab::test;

namespace {

CoeffMatrix mat(double a, double b, double c, double d)
{
    CoeffMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

InterfaceSpec translating(double horizon_speed = 0.1)
{
    InterfaceSpec spec;
    spec.dimension = 1;
    spec.shape = IntervalInclusion{0.1};
    spec.center_path = linear_path({0.3, 0.0}, {horizon_speed, 0.0});
    spec.inside = 1.0;
    spec.outside = 2.0;
    return spec;
}

}  // namespace

TEST(Ellipticity, ConstantBounds)
{
    EXPECT_DOUBLE_EQ(symmetric_lower_bound(mat(1, 0, 0, 1)), 1.0);
    EXPECT_DOUBLE_EQ(spectral_norm(mat(1, 0, 0, 1)), 1.0);
    EXPECT_NEAR(symmetric_lower_bound(mat(2, 0, 0, 3)), 2.0, 1e-15);
    EXPECT_NEAR(spectral_norm(mat(2, 0, 0, 3)), 3.0, 1e-15);
    const CoeffMatrix shear = mat(1, 1, 0, 1);
    EXPECT_NEAR(symmetric_lower_bound(shear), 0.5, 1e-14);
    EXPECT_NEAR(spectral_norm(shear), (1.0 + std::sqrt(5.0)) / 2.0, 1e-14);
    const CoefficientField f = constant_field(shear);
    EXPECT_NEAR(f.bounds().lower(), 0.5, 1e-14);
    EXPECT_NEAR(f.bounds().upper(), 1.618033988749895, 1e-12);
}

TEST(Ellipticity, RejectsIndefinite)
{
    EXPECT_THROW(constant_field(mat(1, 3, 0, 1)), std::invalid_argument);
    EXPECT_THROW(EllipticityBounds(2.0, 1.0), std::invalid_argument);
    EXPECT_THROW(EllipticityBounds(0.0, 1.0), std::invalid_argument);
}

TEST(Piecewise, SelectsPieceAndEnvelope)
{
    const CoefficientField one = constant_field(mat(1, 0, 0, 1));
    const CoefficientField two = constant_field(mat(2, 0, 0, 2));
    const CoefficientField f = piecewise_constant_in_time({one, two}, {0.5}, 1.0);
    EXPECT_DOUBLE_EQ(f(0.25, {0.3, 0.3})(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(f(0.75, {0.3, 0.3})(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(f.bounds().lower(), 1.0);
    EXPECT_DOUBLE_EQ(f.bounds().upper(), 2.0);
    EXPECT_EQ(f.jump_times(), std::vector<double>{0.5});

    const CoefficientField single = piecewise_constant_in_time({two}, {}, 1.0);
    EXPECT_DOUBLE_EQ(single(0.9, {0.1, 0.1})(1, 1), 2.0);
    EXPECT_THROW(piecewise_constant_in_time({one, two}, {}, 1.0), std::invalid_argument);
}

TEST(MovingInterface, Membership)
{
    const CoefficientField f = moving_interface_field(translating(), 1.0);
    EXPECT_DOUBLE_EQ(f(0.0, {0.3, 0.0})(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(f(0.0, {0.5, 0.0})(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(f(1.0, {0.45, 0.0})(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(f.bounds().lower(), 1.0);
    EXPECT_DOUBLE_EQ(f.bounds().upper(), 2.0);
}

TEST(MovingInterface, LeavingTheDomainIsRejected)
{
    EXPECT_THROW(moving_interface_field(translating(1.0), 1.0), std::invalid_argument);
}

TEST(Distances, LinfAndL1)
{
    const Mesh mesh = build_interval_mesh(256, 1.0);
    const CoefficientField f = moving_interface_field(translating(), 1.0);
    EXPECT_EQ(linf_distance(f, 0.3, 0.3, mesh), 0.0);
    EXPECT_EQ(l1_distance(f, 0.3, 0.3, mesh), 0.0);
    EXPECT_DOUBLE_EQ(linf_distance(f, 0.0, 0.5, mesh), 1.0);
    const CoefficientField c = constant_field(mat(1, 0, 0, 1));
    EXPECT_EQ(linf_distance(c, 0.0, 1.0, mesh), 0.0);
    EXPECT_EQ(l1_distance(c, 0.0, 1.0, mesh), 0.0);
    // Symmetric difference of two unit-contrast intervals shifted by 0.1 * 0.2 has measure 0.04.
    EXPECT_NEAR(l1_distance(f, 0.2, 0.4, mesh, 64), 0.04, 1.0 / 256.0 / 64.0 * 4.0);
}

TEST(Ellipticity, VerifyWitness)
{
    const Mesh mesh = build_rect_mesh(3, 3, 1.0, 1.0);
    const CoefficientField id = constant_field(mat(1, 0, 0, 1));
    EXPECT_TRUE(verify_ellipticity(id, mesh, 3, 1.0).pass);
    const EllipticityReport bad = verify_ellipticity(id.with_bounds(EllipticityBounds(2.0, 3.0)), mesh, 3, 1.0);
    EXPECT_FALSE(bad.pass);
    ASSERT_FALSE(bad.violations.empty());
    EXPECT_DOUBLE_EQ(bad.violations.front().lower, 1.0);

    const Mesh line = build_interval_mesh(64, 1.0);
    EXPECT_TRUE(verify_ellipticity(moving_interface_field(translating(), 1.0), line, 11, 1.0).pass);
}

TEST(Sampling, CellsAtBarycenters)
{
    const Mesh mesh = build_interval_mesh(10, 1.0);
    const CoefficientField f = moving_interface_field(translating(), 1.0);
    const auto vals = f.sample_cells(0.0, mesh);
    ASSERT_EQ(vals.size(), 10u);
    EXPECT_DOUBLE_EQ(vals[0](0, 0), 2.0);
    EXPECT_DOUBLE_EQ(vals[2](0, 0), 1.0);
    EXPECT_DOUBLE_EQ(vals[3](0, 0), 1.0);
    EXPECT_DOUBLE_EQ(vals[5](0, 0), 2.0);
}
