#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "vbwave/error.hpp"
#include "vbwave/spline_space.hpp"

using namespace vbwave;

TEST(Partition, NodesAndElementLookup) {
    const Partition p(0.0, 1.0, 10);
    EXPECT_DOUBLE_EQ(p.h(), 0.1);
    EXPECT_EQ(p.node(10), 1.0);
    EXPECT_EQ(p.element_of(0.0), 0);
    EXPECT_EQ(p.element_of(0.1), 1);  // half-open elements
    EXPECT_EQ(p.element_of(1.0), 9);  // last element closed
    EXPECT_THROW((void)p.element_of(1.5), InvalidArgument);
    EXPECT_THROW(Partition(1.0, 0.0, 4), InvalidArgument);
    EXPECT_THROW(Partition(0.0, 1.0, 0), InvalidArgument);
}

TEST(GaussRule, ExactThroughDegree2nMinus1) {
    for (int n = 1; n <= 10; ++n) {
        const QuadratureRule r = gauss_rule(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
            EXPECT_NEAR(s, 1.0 / (deg + 1), 1e-14) << "n=" << n << " deg=" << deg;
        }
    }
    EXPECT_THROW((void)gauss_rule(0), InvalidArgument);
}

TEST(GaussRule, MatchesGolubWelsch) {
    for (int n : {3, 5, 8}) {
        const QuadratureRule r = gauss_rule(n);
        const oracle::Rule o = oracle::gauss(n);
        for (int i = 0; i < n; ++i) {
            EXPECT_NEAR(r.nodes[i], o.x[i], 1e-13);
            EXPECT_NEAR(r.weights[i], o.w[i], 1e-13);
        }
    }
}

TEST(SplineSpace, CubicDimensions) {
    const SplineSpace s = SplineSpace::cubic(Partition(0.0, 2.0, 8));
    EXPECT_EQ(s.full_dim(), 11);
    EXPECT_EQ(s.dim(), 11);
    const SplineSpace z = s.with_endpoint_condition(EndpointCondition::ZeroEndpoints);
    EXPECT_EQ(z.dim(), 9);
    EXPECT_EQ(z.space_index(0), -1);
    EXPECT_EQ(z.space_index(10), -1);
    EXPECT_EQ(z.space_index(3), 2);
    EXPECT_EQ(z.full_index(2), 3);
}

TEST(SplineSpace, BasisMatchesCoxDeBoor) {
    const double a = -1.0, b = 2.0;
    const int n = 7;
    const SplineSpace s = SplineSpace::cubic(Partition(a, b, n));
    const auto knots = oracle::clamped_knots(a, b, n);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(a, b);
    std::vector<double> vals(3 * 4);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = trial == 0 ? a : (trial == 1 ? b : ux(rng));
        const int e = s.partition().element_of(x);
        s.local_basis(e, x, 2, vals);
        for (int j = 0; j < 4; ++j) {
            const int i = s.first_function(e) + j;
            for (int d = 0; d <= 2; ++d) {
                EXPECT_NEAR(vals[d * 4 + j], oracle::bspline_d(knots, i, 4, x, d), 1e-11)
                    << "x=" << x << " i=" << i << " d=" << d;
            }
        }
    }
}

TEST(SplineSpace, EvaluateMatchesOracleSum) {
    const SplineSpace s = SplineSpace::cubic(Partition(0.0, 1.0, 5));
    const auto knots = oracle::clamped_knots(0.0, 1.0, 5);
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    std::vector<double> c(s.dim());
    for (auto& v : c) v = nd(rng);
    for (int k = 0; k <= 50; ++k) {
        const double x = k / 50.0;
        for (int d = 0; d <= 2; ++d) {
            double ref = 0.0;
            for (int i = 0; i < s.dim(); ++i) ref += c[i] * oracle::bspline_d(knots, i, 4, x, d);
            EXPECT_NEAR(s.evaluate(c, x, d), ref, 1e-10);
        }
    }
}

TEST(SplineSpace, PartitionOfUnityAndEndpointSupport) {
    const SplineSpace s = SplineSpace::cubic(Partition(0.0, 3.0, 6));
    const std::vector<double> ones(s.dim(), 1.0);
    for (int k = 0; k <= 30; ++k) {
        EXPECT_NEAR(s.evaluate(ones, 0.1 * k), 1.0, 1e-14);
        EXPECT_NEAR(s.evaluate(ones, 0.1 * k, 1), 0.0, 1e-12);
    }
    // Only the first (last) basis function is nonzero at a (b).
    std::vector<double> e(s.dim(), 0.0);
    for (int i = 0; i < s.dim(); ++i) {
        std::fill(e.begin(), e.end(), 0.0);
        e[i] = 1.0;
        EXPECT_NEAR(s.evaluate(e, 0.0), i == 0 ? 1.0 : 0.0, 1e-15);
        EXPECT_NEAR(s.evaluate(e, 3.0), i == s.dim() - 1 ? 1.0 : 0.0, 1e-15);
    }
}

TEST(SplineSpace, BasisIntegralsMatchDenseQuadrature) {
    const double a = 0.5, b = 2.5;
    const int n = 6;
    const SplineSpace s = SplineSpace::cubic(Partition(a, b, n));
    const auto knots = oracle::clamped_knots(a, b, n);
    const auto ints = s.basis_integrals();
    const oracle::Rule r = oracle::gauss(20);
    const double h = (b - a) / n;
    for (int i = 0; i < s.dim(); ++i) {
        double ref = 0.0;
        for (int e = 0; e < n; ++e) {
            for (std::size_t q = 0; q < r.x.size(); ++q) {
                ref += h * r.w[q] * oracle::bspline(knots, i, 4, a + h * (e + r.x[q]));
            }
        }
        EXPECT_NEAR(ints[i], ref, 1e-13);
    }
}

TEST(SplineSpace, RejectsBadParameters) {
    EXPECT_THROW(SplineSpace(Partition(0, 1, 4), 4, 3, EndpointCondition::Free), InvalidArgument);
    EXPECT_THROW(SplineSpace(Partition(0, 1, 4), 1, 0, EndpointCondition::Free), InvalidArgument);
}

TEST(SplineSpace, LowerSmoothnessSpaceHasMoreFunctions) {
    // C^1 cubics: two functions per interior node.
    const SplineSpace s(Partition(0.0, 1.0, 4), 4, 1, EndpointCondition::Free);
    EXPECT_EQ(s.full_dim(), 10);
    const std::vector<double> ones(s.dim(), 1.0);
    EXPECT_NEAR(s.evaluate(ones, 0.37), 1.0, 1e-14);
}
