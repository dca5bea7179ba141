#include <gtest/gtest.h>

#include <cmath>

#include "vbwave/error.hpp"
#include "vbwave/solitary.hpp"

using namespace vbwave;

TEST(Solitary, SpeedAmplitudeRoundTrip) {
    for (double eps : {0.05, 0.1, 1.0}) {
        for (double a : {0.01, 0.1, 0.5, 2.0}) {
            const double c = speed_from_amplitude(eps, a);
            EXPECT_GT(c, 1.0);
            EXPECT_NEAR(amplitude_from_speed(eps, c), a, 1e-12 * std::max(1.0, a));
        }
    }
}

TEST(Solitary, WeakAmplitudeLimit) {
    // c = 1 + eps A / 2 + O((eps A)^2).
    const double a = 1e-4;
    EXPECT_NEAR(speed_from_amplitude(1.0, a), 1.0 + a / 2.0, 1e-8);
}

TEST(Solitary, CrestRelationHoldsForClosedFormSpeed) {
    for (double eps : {0.1, 0.5}) {
        const double a = 0.4;
        const double c = speed_from_amplitude(eps, a);
        const double b = u_amplitude(eps, a, c);
        EXPECT_NEAR(b, a * c / (1 + eps * a), 1e-15);
        EXPECT_LT(std::abs(crest_relation_residual(eps, c, b)), 1e-10);
    }
}

TEST(Solitary, NewtonProfileSatisfiesOdeAndRelations) {
    for (double eps : {0.1, 1.0}) {
        const double mu = eps;
        const double c = 1.18112;
        const SolitaryWave w = solve_profile(eps, mu, c);
        EXPECT_LT(w.ode_residual, 1e-10);
        EXPECT_NEAR(w.amplitude, amplitude_from_speed(eps, c), 1e-8);
        EXPECT_NEAR(w.u_amplitude, u_amplitude(eps, w.amplitude, c), 1e-8);
        EXPECT_LT(w.first_integral_residual, 1e-10);
        EXPECT_LT(w.asymmetry(), 1e-12);
        EXPECT_NEAR(w.zeta(0.0), w.amplitude, 1e-10);
        // Off-grid check of the ODE through the interpolant derivatives.
        for (double x : {0.37, 1.9, -4.2}) {
            const double u = w.u(x);
            const double r = c * mu / 3.0 * w.u(x, 2) + eps / 2.0 * u * u - c * u + u / (c - eps * u);
            EXPECT_LT(std::abs(r), 1e-9) << x;
            EXPECT_NEAR(w.zeta(x), u / (c - eps * u), 1e-15);
            EXPECT_LT(std::abs(first_integral(eps, mu, c, u, w.u(x, 1))), 1e-10);
        }
        EXPECT_EQ(w.u(w.half_length + 1.0), 0.0);
    }
}

TEST(Solitary, RejectsSubcriticalSpeedAndOddGrid) {
    EXPECT_THROW((void)solve_profile(1.0, 1.0, 0.9), InvalidArgument);
    SolitaryOptions o;
    o.points = 101;
    EXPECT_THROW((void)solve_profile(1.0, 1.0, 1.1, o), InvalidArgument);
}

TEST(KdvPulse, ShapesAndVelocities) {
    KdvPulse p{0.1, 30.0, KdvPulse::Geometry::FlatDepth};
    EXPECT_DOUBLE_EQ(p.zeta(30.0), 0.1);
    const double x = 31.0;
    const double z = 0.1 / std::pow(std::cosh(std::sqrt(0.3) / 2.0 * 1.0), 2);
    EXPECT_NEAR(p.zeta(x), z, 1e-15);
    EXPECT_NEAR(p.u(x), 1.05 * z / (1 + z), 1e-15);

    KdvPulse s{0.1, 30.0, KdvPulse::Geometry::Slope, 1.0 / 30.0};
    EXPECT_NEAR(s.u(x), -1.05 * z / (x / 30.0 + z), 1e-15);

    KdvPulse d{-0.1, 30.0, KdvPulse::Geometry::Rest};
    EXPECT_DOUBLE_EQ(d.zeta(30.0), -0.1);
    EXPECT_EQ(d.u(x), 0.0);
}
