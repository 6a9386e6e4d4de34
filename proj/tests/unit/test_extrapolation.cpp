#include "mrlab/extrapolation.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mrlab;

TEST(Interp, Exponents)
{
    EXPECT_EQ(interp_exponent(4.0, 4.0 / 3.0, 0.5), 2.0);
    EXPECT_EQ(interp_exponent(5.0, 1.5, 0.0), 5.0);
    EXPECT_NEAR(interp_exponent(3.0, 3.0, 0.37), 3.0, 1e-15);
    EXPECT_NEAR(theta_from_r(2.0, 4.0, 4.0 / 3.0), 0.5, 1e-15);
    EXPECT_EQ(theta_from_r(3.0, 3.0, 3.0), 0.0);
    EXPECT_THROW(interp_exponent(1.0, 2.0, 0.5), std::invalid_argument);
    EXPECT_THROW(theta_from_r(5.0, 4.0, 4.0 / 3.0), std::invalid_argument);
}

TEST(Interp, RoundTrip)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double r0 = 1.0 + 1e-2 + 9.0 * u(rng);
        const double r1 = 1.0 + 1e-2 + 9.0 * u(rng);
        const double theta = u(rng);
        if (std::abs(1.0 / r0 - 1.0 / r1) < 1e-6) {
            continue;
        }
        EXPECT_NEAR(theta_from_r(interp_exponent(r0, r1, theta), r0, r1), theta, 1e-10);
    }
}

TEST(Sneiberg, WorkedValues)
{
    EXPECT_NEAR(sneiberg_surjectivity_radius({0.5, 3.0, 2.0}), 1.0 / 14.0, 1e-15);
    EXPECT_NEAR(sneiberg_surjectivity_radius({0.3, 3.0, 0.0}), 0.3, 1e-15);
    EXPECT_DOUBLE_EQ(sneiberg_surjectivity_radius({0.2, 1.5, 2.0}), sneiberg_surjectivity_radius({0.8, 1.5, 2.0}));
    const IsomorphismRadius iso = sneiberg_isomorphism_radius({0.5, 3.0, 2.0});
    EXPECT_NEAR(iso.radius, 1.0 / 156.0, 1e-15);
    EXPECT_DOUBLE_EQ(iso.inverse_bound, 24.0);
    const IsomorphismRadius zero = sneiberg_isomorphism_radius({0.25, 0.0, 5.0});
    EXPECT_NEAR(zero.radius, 0.25 / 6.0, 1e-15);
    EXPECT_EQ(zero.inverse_bound, 0.0);
    EXPECT_THROW(sneiberg_surjectivity_radius({1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(HilbertWindow, SurjectiveWorkedExample)
{
    const WindowResult w = hilbert_window(1.0, 1.0, 3.0, 4.0, 4.0 / 3.0, WindowMode::surjective);
    EXPECT_NEAR(w.theta, 0.5, 1e-15);
    EXPECT_NEAR(w.radius, 1.0 / 20.0, 1e-15);
    EXPECT_NEAR(w.lo, interp_exponent(4.0, 4.0 / 3.0, 11.0 / 20.0), 1e-14);
    EXPECT_NEAR(w.hi, interp_exponent(4.0, 4.0 / 3.0, 9.0 / 20.0), 1e-14);
    EXPECT_LT(w.lo, 2.0);
    EXPECT_GT(w.hi, 2.0);
}

TEST(HilbertWindow, CollapsesForLargeConstant)
{
    const WindowResult w = hilbert_window(1.0, 1.0, 1e9, 4.0, 4.0 / 3.0, WindowMode::isomorphism);
    EXPECT_NEAR(w.lo, 2.0, 1e-9);
    EXPECT_NEAR(w.hi, 2.0, 1e-9);
    EXPECT_LE(w.lo, 2.0);
    EXPECT_GE(w.hi, 2.0);
}

TEST(Kappa, WorkedExample)
{
    const KappaResult k = kappa_r0(1.0, 1.0, 3.0, 4.0);
    EXPECT_NEAR(k.kappa, 1.0 / 300.0, 1e-17);
    EXPECT_NEAR(k.r0, 600.0 / 299.0, 1e-14);
    EXPECT_NEAR(k.lo, k.r0 / (k.r0 - 1.0), 1e-14);
    EXPECT_DOUBLE_EQ(k.bound, 24.0);
}

TEST(Kappa, LimitsAndMonotonicity)
{
    EXPECT_NEAR(kappa_r0(1.0, 1.0, 3.0, 2.0 + 1e-9).r0, 2.0, 1e-10);
    double prev = 1.0;
    for (double c : {1.0, 2.0, 4.0, 8.0}) {
        const double k = kappa_r0(0.5, 2.0, c, 4.0).kappa;
        EXPECT_LT(k, prev);
        prev = k;
    }
    EXPECT_GT(kappa_r0(0.5, 2.0, 3.0, 4.0).kappa, kappa_r0(0.5, 3.0, 3.0, 4.0).kappa);
}

TEST(Kappa, HypothesisViolationNamed)
{
    try {
        kappa_r0(1.5, 2.0, 3.0, 4.0);
        FAIL() << "c_lower > 1 accepted";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("c_lower <= 1 <= c_upper"), std::string::npos);
    }
    EXPECT_THROW(kappa_r0(1.0, 1.0, 3.0, 2.0), std::invalid_argument);
}
