#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracle.hpp"
#include "vbwave/assembly.hpp"
#include "vbwave/error.hpp"

using namespace vbwave;

namespace {

// Dense matrix of (m v, w) + (s v', w') on the clamped cubic basis.
Eigen::MatrixXd dense_form(double a, double b, int n, const std::function<double(double)>& m,
                           const std::function<double(double)>& s) {
    const auto t = oracle::clamped_knots(a, b, n);
    const int dim = n + 3;
    const oracle::Rule r = oracle::gauss(30);
    const double h = (b - a) / n;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (int e = 0; e < n; ++e) {
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            const double x = a + h * (e + r.x[q]);
            const double w = h * r.w[q];
            for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dim; ++j) {
                    out(i, j) += w * (m(x) * oracle::bspline(t, i, 4, x) * oracle::bspline(t, j, 4, x) +
                                      s(x) * oracle::bspline_d(t, i, 4, x, 1) * oracle::bspline_d(t, j, 4, x, 1));
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST(Assembly, GramMatrixMatchesDenseOracle) {
    const SplineSpace s = SplineSpace::cubic(Partition(0.0, 2.0, 6));
    // Products of cubics have degree 6: 4 points are exact, the production
    // 3-point rule is off by O(h) relative to the entries.
    const BandedMatrix g = gram_matrix(s, {}, 4);
    const BandedMatrix g3 = gram_matrix(s);
    const Eigen::MatrixXd ref = dense_form(0.0, 2.0, 6, [](double) { return 1.0; }, [](double) { return 0.0; });
    for (int i = 0; i < s.dim(); ++i) {
        for (int j = 0; j < s.dim(); ++j) {
            EXPECT_NEAR(g(i, j), ref(i, j), 1e-14);
            EXPECT_NEAR(g3(i, j), ref(i, j), 1e-3);
        }
    }
}

TEST(Assembly, H1FormMatchesDenseOracle) {
    const double mu = 0.3;
    const SplineSpace s = SplineSpace::cubic(Partition(-1.0, 1.0, 5));
    const BandedMatrix m = form_matrix(s, h1_form(mu), 4);
    const Eigen::MatrixXd ref =
        dense_form(-1.0, 1.0, 5, [](double) { return 1.0; }, [mu](double) { return mu / 3.0; });
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j) EXPECT_NEAR(m(i, j), ref(i, j), 1e-13);
}

TEST(Assembly, CbsFormOnLinearBottomIsExact) {
    // eta_b linear: the A form integrands are polynomials of degree <= 7,
    // so 4 Gauss points integrate them exactly.
    const double mu = 1.0;
    const Bathymetry bathy = Bathymetry::make(UniformSlope{0.1}, 2.0, 8.0);
    const SplineSpace s = SplineSpace::cubic(Partition(2.0, 8.0, 6));
    const BandedMatrix m = weighted_mass_A(s, bathy, mu, false, 4);
    const Eigen::MatrixXd ref = dense_form(
        2.0, 8.0, 6, [&](double x) { return bathy.depth(x); },
        [&](double x) { return mu / 3.0 * std::pow(bathy.depth(x), 3); });
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j) EXPECT_NEAR(m(i, j), ref(i, j), 1e-12);
}

TEST(Assembly, ProjectionsReproduceCubics) {
    const SplineSpace s = SplineSpace::cubic(Partition(0.0, 1.0, 8));
    const auto p = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x; };
    const auto dp = [](double x) { return -2.0 + 1.5 * x * x; };
    const auto c = l2_project(s, p);
    const auto e = elliptic_project(s, h1_form(0.5), p, dp);
    for (int k = 0; k <= 40; ++k) {
        const double x = k / 40.0;
        EXPECT_NEAR(s.evaluate(c, x), p(x), 1e-12);
        EXPECT_NEAR(s.evaluate(e, x), p(x), 1e-12);
    }
}

TEST(Assembly, EllipticProjectionIsGalerkinOrthogonal) {
    const SplineSpace s = SplineSpace::cubic(Partition(0.0, 2.0, 10), EndpointCondition::ZeroEndpoints);
    const SymmetricForm f = h1_form(0.2);
    const auto v = [](double x) { return std::sin(3.0 * x) * x * (2.0 - x); };
    const auto dv = [](double x) { return 3.0 * std::cos(3.0 * x) * x * (2.0 - x) + std::sin(3.0 * x) * (2.0 - 2.0 * x); };
    const auto c = elliptic_project(s, f, v, dv, 5);
    const BandedMatrix m = form_matrix(s, f, 5);
    const auto lhs = m.multiply(c);
    const auto rhs = form_load(s, f, v, dv, 5);
    for (int i = 0; i < s.dim(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12);
}

TEST(Assembly, CoercivityReport) {
    const CoercivityReport ok = coercivity_check(Bathymetry::make(SineShelf{70.0, 0.6, 3.0}, 0.0, 140.0), 0.05);
    EXPECT_TRUE(ok.satisfied);
    EXPECT_NEAR(ok.c1, 0.4, 1e-12);
    EXPECT_GT(ok.c_mu, 0.0);
    // A sharp bridge with large mu makes eta_b - mu/2 eta_b^2 eta_b'' negative.
    const Bathymetry sharp = Bathymetry::make(SineShelf{5.0, 0.9, 0.3}, 0.0, 10.0);
    const CoercivityReport bad = coercivity_check(sharp, 1.0);
    EXPECT_FALSE(bad.satisfied);
    EXPECT_LT(bad.c2, 0.0);
    const SplineSpace s = SplineSpace::cubic(Partition(0.0, 10.0, 40));
    EXPECT_THROW((void)weighted_mass_A(s, sharp, 1.0), CoercivityError);
}
