#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "vbwave/error.hpp"
#include "vbwave/models.hpp"
#include "vbwave/timestep.hpp"

using namespace vbwave;

namespace {

State random_state(const SemidiscreteSystem& sys, std::mt19937& rng, double scale = 0.1) {
    std::uniform_real_distribution<double> u(-scale, scale);
    State s = sys.zero_state(0.0);
    for (auto& v : s.zc) v = u(rng);
    for (auto& v : s.uc) v = u(rng);
    return s;
}

}  // namespace

TEST(Models, ParseAndPrintKinds) {
    for (auto k : {ModelKind::SW, ModelKind::CB, ModelKind::CBw, ModelKind::CBs}) {
        EXPECT_EQ(parse_model_kind(to_string(k)), k);
    }
    EXPECT_THROW((void)parse_model_kind("kdv"), InvalidArgument);
    EXPECT_EQ(parse_boundary_kind("absorbing"), BoundaryKind::Absorbing);
    EXPECT_THROW((void)parse_boundary_kind("open"), InvalidArgument);
}

TEST(Models, RhsMatchesDenseOracleWithExactQuadrature) {
    std::mt19937 rng(42);
    struct Case {
        Bathymetry bathy;
        BoundarySpec bc;
    };
    const std::vector<Case> cases = {
        {Bathymetry::flat(0.0, 4.0), {BoundaryKind::Absorbing, BoundaryKind::Absorbing, false, false}},
        {Bathymetry::make(UniformSlope{0.2}, 1.0, 5.0), {BoundaryKind::Reflective, BoundaryKind::Absorbing, true, false}},
        {Bathymetry::make(ShelfRamp{1.0, 0.25, 0.5}, 0.0, 4.0), {}},
    };
    for (const auto& c : cases) {
        for (auto kind : {ModelKind::SW, ModelKind::CB, ModelKind::CBw, ModelKind::CBs}) {
            const ModelParams p{kind, 0.7, 0.4};
            const Partition part(c.bathy.a(), c.bathy.b(), 8);
            const SemidiscreteSystem sys(part, c.bathy, p, c.bc, std::nullopt, 5);
            for (int trial = 0; trial < 3; ++trial) {
                const State s = random_state(sys, rng);
                const State r = sys.rhs(s);
                const oracle::DenseRhs o =
                    oracle::rhs(c.bathy, part.a(), part.b(), 8, p, c.bc, s.zc, s.uc);
                for (int i = 0; i < sys.dim(); ++i) {
                    EXPECT_NEAR(r.zc[i], o.zt(i), 1e-10) << c.bathy.name() << " " << to_string(kind);
                    EXPECT_NEAR(r.uc[i], o.ut(i), 1e-10) << c.bathy.name() << " " << to_string(kind);
                }
            }
        }
    }
}

TEST(Models, AbsorbingValueIsOutgoingInvariant) {
    // Right-going simple wave: u = 2(sqrt(1 + eps zeta) - 1)/eps.
    const double eps = 0.5;
    const double z = 0.3;
    EXPECT_NEAR(absorbing_bc_value(eps, z, Side::Right), 2.0 / eps * (std::sqrt(1 + eps * z) - 1.0), 1e-15);
    EXPECT_NEAR(absorbing_bc_value(eps, z, Side::Left), -2.0 / eps * (std::sqrt(1 + eps * z) - 1.0), 1e-15);
    // Small zeta: linear limit u = zeta (no cancellation).
    EXPECT_NEAR(absorbing_bc_value(1.0, 1e-12, Side::Right), 1e-12, 1e-24);
    EXPECT_THROW((void)absorbing_bc_value(1.0, -2.0, Side::Right), DepthError);
}

TEST(Models, ConstrainSetsEndpointCoefficients) {
    const SemidiscreteSystem sys(Partition(0, 1, 6), Bathymetry::flat(0, 1), {ModelKind::CB, 1.0, 1.0},
                                 {BoundaryKind::Reflective, BoundaryKind::Absorbing});
    State s = sys.zero_state();
    s.zc.back() = 0.2;
    s.uc.front() = 5.0;
    sys.constrain(s);
    EXPECT_EQ(s.uc.front(), 0.0);
    EXPECT_NEAR(s.uc.back(), absorbing_bc_value(1.0, 0.2, Side::Right), 1e-15);
}

TEST(Models, MassRateEqualsMinusOutflow) {
    std::mt19937 rng(9);
    const SemidiscreteSystem sys(Partition(0, 10, 20), Bathymetry::flat(0, 10), {ModelKind::CB, 1.0, 1.0},
                                 {BoundaryKind::Absorbing, BoundaryKind::Absorbing});
    State s = random_state(sys, rng);
    sys.constrain(s);
    const State r = sys.rhs(s);
    EXPECT_NEAR(sys.mass(r), -sys.outflow(s), 1e-12);
}

TEST(Models, DepthLossIsReported) {
    const SemidiscreteSystem sys(Partition(0, 1, 4), Bathymetry::flat(0, 1), {ModelKind::CB, 1.0, 1.0});
    State s = sys.zero_state();
    for (auto& v : s.zc) v = -2.0;
    EXPECT_THROW((void)sys.rhs(s), DepthError);
}

TEST(Models, RejectsInconsistentSetups) {
    const Partition p(0, 10, 10);
    EXPECT_THROW(SemidiscreteSystem(p, Bathymetry::flat(0, 5), {}), InvalidArgument);
    const Bathymetry slope = Bathymetry::make(UniformSlope{0.1}, 0, 10);
    // Shoreline needs the explicit allowance, and absorbing over a slope too.
    EXPECT_THROW(SemidiscreteSystem(p, slope, {ModelKind::CBs, 1, 1}), InvalidArgument);
    EXPECT_THROW(SemidiscreteSystem(p, slope, {ModelKind::CBs, 1, 1},
                                    {BoundaryKind::Reflective, BoundaryKind::Absorbing, false, true}),
                 InvalidArgument);
    EXPECT_NO_THROW(SemidiscreteSystem(p, slope, {ModelKind::CBs, 1, 1},
                                       {BoundaryKind::Reflective, BoundaryKind::Absorbing, true, true}));
    EXPECT_THROW(SemidiscreteSystem(p, Bathymetry::flat(0, 10), {ModelKind::CB, 0.0, 1.0}), InvalidArgument);
}

TEST(Models, ManufacturedForcingMakesExactSolutionNearlySteady) {
    // The residual of the exact fields in the semidiscrete equations is a
    // projection error, O(h^4) for u: compare two meshes.
    const Bathymetry bathy = Bathymetry::make(SineBottom{0.1, M_PI}, 0.0, 1.0);
    for (auto kind : {ModelKind::CBw, ModelKind::CBs}) {
        const ModelParams p{kind, 1.0, 0.1};
        double prev = 0.0;
        for (int n : {16, 32}) {
            const SemidiscreteSystem sys(Partition(0, 1, n), bathy, p, {}, manufactured_forcing(p, bathy), 5);
            State s = sys.project_initial([](double x) { return ManufacturedSolution::zeta(x, 0.0); },
                                          [](double x) { return ManufacturedSolution::u(x, 0.0); },
                                          [](double x) { return ManufacturedSolution::u(x, 0.0, 1); }, true);
            const State r = sys.rhs(s);
            double err = 0.0;
            for (int k = 0; k <= 200; ++k) {
                const double x = k / 200.0;
                err = std::max(err, std::abs(sys.space().evaluate(r.zc, x) - 2.0 * ManufacturedSolution::zeta(x, 0.0)));
            }
            if (prev > 0.0) EXPECT_LT(err, prev / 4.0) << to_string(kind);
            prev = err;
        }
    }
}
