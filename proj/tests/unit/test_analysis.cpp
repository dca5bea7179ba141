#include <gtest/gtest.h>

#include <cmath>

#include "vbwave/analysis.hpp"
#include "vbwave/assembly.hpp"

using namespace vbwave;

namespace {

std::vector<double> project(const SplineSpace& s, const ScalarFunction& f) { return l2_project(s, f, 5); }

// Smoothed box of height H on [x1, x2]; edges of width ~1/k.
ScalarFunction box(double height, double x1, double x2, double k = 40.0) {
    return [=](double x) { return height * 0.5 * (std::tanh(k * (x - x1)) - std::tanh(k * (x - x2))); };
}

}  // namespace

TEST(Analysis, ErrorNormsOfExactCubicVanish) {
    const SplineSpace s = SplineSpace::cubic(Partition(0, 1, 4));
    const auto f = [](double x) { return x * x * x - x; };
    const auto df = [](double x) { return 3 * x * x - 1; };
    const ErrorTriple e = error_norms(s, project(s, f), f, df);
    EXPECT_LT(e.l2, 1e-14);
    EXPECT_LT(e.linf, 1e-14);
    EXPECT_LT(e.h1semi, 1e-13);
    const ErrorTriple z = error_norms(s, std::vector<double>(s.dim(), 0.0), [](double) { return 1.0; },
                                      [](double) { return 0.0; });
    EXPECT_NEAR(z.l2, 1.0, 1e-14);
    EXPECT_NEAR(z.linf, 1.0, 1e-14);
}

TEST(Analysis, ConvergenceRatesOfPowerLaw) {
    std::vector<std::pair<int, ErrorTriple>> e;
    for (int n : {64, 128, 256, 512}) e.push_back({n, {3.0 * std::pow(n, -4.0), std::pow(n, -3.5), 0.0}});
    const ConvergenceTable t = convergence_rates(e);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_FALSE(t.rows[0].rate_l2.has_value());
    EXPECT_NEAR(*t.rows[1].rate_l2, 4.0, 1e-12);
    EXPECT_NEAR(*t.rows[3].rate_linf, 3.5, 1e-12);
    EXPECT_FALSE(t.rows[2].rate_h1.has_value());
    EXPECT_NEAR(*t.fitted_l2, 4.0, 1e-12);
    EXPECT_FALSE(t.fitted_h1.has_value());
}

TEST(Analysis, CrestOfGaussian) {
    const SplineSpace s = SplineSpace::cubic(Partition(0, 10, 400));
    const auto zc = project(s, [](double x) { return 0.3 * std::exp(-(x - 4.321) * (x - 4.321)); });
    const CrestMetrics c = crest_metrics(s, zc);
    EXPECT_NEAR(c.x_crest, 4.321, 1e-5);
    EXPECT_NEAR(c.zeta_max, 0.3, 1e-7);
    EXPECT_LE(c.coarse_max, c.zeta_max);
    const CrestMetrics w = crest_metrics(s, zc, std::make_pair(6.0, 9.0));
    EXPECT_NEAR(w.x_crest, 6.0, s.partition().h());
}

TEST(Analysis, BoxPulseReflectionMetrics) {
    // Flat-topped wave of height H and width W: the superlevel-set mean is H
    // and the half-height width is W.
    const double height = 0.02, x1 = 12.0, x2 = 17.0;
    const SplineSpace s = SplineSpace::cubic(Partition(0, 30, 3000));
    const auto zc = project(s, box(height, x1, x2));
    const ReflectionMetrics r = reflected_wave_metrics(s, zc, 5.0, 25.0);
    // The tanh edges between 0.8 H and H pull the mean down by about
    // (edge width) / W.
    EXPECT_NEAR(r.amplitude, height, 2e-3 * height);
    EXPECT_NEAR(r.crest_height, height, 1e-4 * height);
    EXPECT_NEAR(r.wavelength, x2 - x1, 0.02);
    EXPECT_GT(r.superlevel_measure, x2 - x1 - 0.1);
    EXPECT_LT(r.superlevel_measure, x2 - x1);
}

TEST(Analysis, ClosedFormEstimates) {
    EXPECT_NEAR(reflection_estimate(1.0 / 20, 0.1), 0.025 * std::sqrt(0.1 / 3), 1e-16);
    EXPECT_NEAR(greens_law(0.5), std::pow(2.0, 0.25), 1e-15);
}

TEST(Analysis, MassAndSteepness) {
    const SplineSpace s = SplineSpace::cubic(Partition(0, 2, 16));
    const auto zc = project(s, [](double x) { return x * x; });
    EXPECT_NEAR(conserved_mass(s, zc), 8.0 / 3.0, 1e-14);
    const Bathymetry bathy = Bathymetry::make(UniformSlope{1.0}, 1.0, 3.0);
    const SplineSpace s2 = SplineSpace::cubic(Partition(1, 3, 16));
    const auto ones = project(s2, [](double) { return 0.5; });
    EXPECT_NEAR(max_steepness_ratio(s2, ones, bathy), 0.5 / (1.0 + 0.125 * 0.046910077030668004),
                1e-12);  // first 5-point node
}

TEST(Analysis, CountCrestsAndDifference) {
    const SplineSpace s = SplineSpace::cubic(Partition(0, 20, 400));
    const auto two = project(s, [](double x) {
        return std::exp(-(x - 5) * (x - 5)) + 0.5 * std::exp(-(x - 12) * (x - 12)) +
               0.1 * std::exp(-(x - 17) * (x - 17));
    });
    EXPECT_EQ(count_crests(s, two, 0.25), 2);
    EXPECT_EQ(count_crests(s, two, 0.05), 3);
    // Inside the window the threshold is relative to the window maximum.
    EXPECT_EQ(count_crests(s, two, 0.25, std::make_pair(10.0, 20.0)), 1);
    EXPECT_EQ(count_crests(s, two, 0.15, std::make_pair(10.0, 20.0)), 2);
    std::vector<double> shifted(two);
    for (auto& v : shifted) v += 0.125;
    EXPECT_NEAR(max_difference(s, two, shifted), 0.125, 1e-14);
}

TEST(Analysis, RunupIsGaugeMaximum) {
    GaugeSeries g;
    g.t = {0, 1, 2, 3};
    g.zeta = {0.0, 0.3, 0.7, -0.1};
    EXPECT_DOUBLE_EQ(runup_max(g), 0.7);
}

TEST(Analysis, CompareSeries) {
    std::vector<double> t, z, z8, zs;
    for (int i = 0; i <= 400; ++i) {
        const double ti = 0.05 * i;
        t.push_back(ti);
        z.push_back(std::exp(-(ti - 10) * (ti - 10)));
        z8.push_back(1.08 * z.back());
        zs.push_back(std::exp(-(ti - 10.3) * (ti - 10.3)));
    }
    const ReferenceComparison same = compare_series(t, z, t, z);
    EXPECT_DOUBLE_EQ(same.amplitude_ratio, 1.0);
    EXPECT_EQ(same.l2_deviation, 0.0);
    EXPECT_EQ(same.best_shift, 0.0);
    const ReferenceComparison scaled = compare_series(t, z8, t, z);
    EXPECT_NEAR(scaled.amplitude_ratio, 1.08, 1e-14);
    EXPECT_GT(scaled.l2_deviation, 0.0);
    const ReferenceComparison lag = compare_series(t, zs, t, z, 1.0);
    EXPECT_NEAR(lag.best_shift, 0.3, 0.01);
    EXPECT_LT(lag.shifted_l2_deviation, 1e-3);
    EXPECT_GT(lag.l2_deviation, 0.05);
}

TEST(Analysis, ShoalingTrackerStartsAtCrossingAndStops) {
    const Bathymetry bathy = Bathymetry::make(UniformSlope{0.1}, 0, 20);
    const SplineSpace s = SplineSpace::cubic(Partition(0, 20, 200));
    ShoalingTracker tr(s, bathy, 0.1, 10.0, 0.5);
    State st;
    const auto at = [&](double xc, double a) {
        st.zc = project(s, [=](double x) { return a * std::exp(-(x - xc) * (x - xc)); });
        return tr.observe(st);
    };
    EXPECT_TRUE(at(14.0, 0.1));
    EXPECT_TRUE(tr.curve().empty());
    EXPECT_TRUE(at(10.0, 0.12));
    ASSERT_EQ(tr.curve().size(), 1u);
    EXPECT_NEAR(tr.curve()[0].amplification, 1.2, 1e-5);
    EXPECT_NEAR(tr.curve()[0].depth, 1.0, 1e-5);
    EXPECT_FALSE(at(5.0, 0.3));  // ratio 0.3/0.5 = 0.6 > 0.5
    EXPECT_TRUE(tr.stopped());
}
