#include <gtest/gtest.h>

#include <cmath>

#include "vbwave/error.hpp"
#include "vbwave/timestep.hpp"

using namespace vbwave;

namespace {

// y' = lambda y on one component, with a constant outflow of 1.
struct Linear {
    double lambda;
    void rhs(const State& y, State& dy) const {
        dy = y;
        dy.zc[0] = lambda * y.zc[0];
        dy.uc[0] = lambda * y.uc[0];
    }
    void constrain(State&) const {}
    double outflow(const State&) const { return 1.0; }
};

}  // namespace

TEST(Rk4, FourthOrderOnLinearOde) {
    const Linear sys{-1.3};
    double prev = 0.0;
    for (int steps : {10, 20, 40}) {
        State y;
        y.zc = {1.0};
        y.uc = {2.0};
        const double k = 1.0 / steps;
        double out = 0.0;
        for (int i = 0; i < steps; ++i) out += rk4_step(sys, y, k);
        const double err = std::abs(y.zc[0] - std::exp(-1.3));
        if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 4.0, 0.1);
        prev = err;
        EXPECT_NEAR(out, 1.0, 1e-14);
        EXPECT_NEAR(y.t, 1.0, 1e-14);
    }
}

TEST(Rk4, PlanSteps) {
    const StepPlan p = plan_steps(1.0, 0.25, 1.0 / 64);
    EXPECT_EQ(p.steps, 256);
    EXPECT_DOUBLE_EQ(p.k, 1.0 / 256);
    const StepPlan q = plan_steps(1.0, 0.3, 0.1);  // 1/0.03 = 33.3 -> 34 steps
    EXPECT_EQ(q.steps, 34);
    EXPECT_LE(q.k, 0.03);
    EXPECT_THROW((void)plan_steps(1.0, 0.0, 0.1), InvalidArgument);
}

TEST(Integrate, GaugesSnapshotsAndMassTrace) {
    const SemidiscreteSystem sys(Partition(0, 20, 80), Bathymetry::flat(0, 20), {ModelKind::CB, 1.0, 1.0});
    const State s0 = sys.project_initial([](double x) { return 0.1 * std::exp(-(x - 10) * (x - 10)); },
                                         [](double) { return 0.0; });
    RunConfig rc;
    rc.T = 2.0;
    rc.courant = 0.5;
    rc.gauges = {5.0, 10.0};
    rc.snapshot_times = {1.0, 0.0, 2.0};
    rc.mass_every = 4;
    const RunRecord rec = integrate(sys, s0, rc);
    EXPECT_EQ(rec.steps_taken, rec.steps_planned);
    ASSERT_EQ(rec.snapshots.size(), 3u);
    EXPECT_NEAR(rec.snapshots[1].t, 1.0, 1e-12);
    ASSERT_EQ(rec.gauges.size(), 2u);
    EXPECT_EQ(rec.gauges[0].t.size(), static_cast<std::size_t>(rec.steps_taken + 1));
    EXPECT_NEAR(rec.gauges[1].zeta.front(), 0.1, 1e-4);
    EXPECT_LT(rec.max_mass_drift, 1e-14);
    EXPECT_NEAR(rec.final_state.t, 2.0, 1e-14);
}

TEST(Integrate, ObserverStopsEarly) {
    const SemidiscreteSystem sys(Partition(0, 1, 8), Bathymetry::flat(0, 1), {ModelKind::SW, 1.0, 0.0});
    RunConfig rc;
    rc.T = 1.0;
    rc.observer = [](const State&, long step) { return step < 3; };
    const RunRecord rec = integrate(sys, sys.zero_state(), rc);
    EXPECT_TRUE(rec.stopped_early);
    EXPECT_EQ(rec.steps_taken, 3);
}

TEST(Integrate, DepthLossAbortsWithStep) {
    const SemidiscreteSystem sys(Partition(0, 10, 40), Bathymetry::flat(0, 10), {ModelKind::SW, 1.0, 0.0});
    // A deep trough with a strong outward flow dries out quickly.
    State s0 = sys.project_initial([](double x) { return -0.95 * std::exp(-(x - 5) * (x - 5)); },
                                   [](double x) { return 2.0 * (x - 5) * std::exp(-(x - 5) * (x - 5)); });
    RunConfig rc;
    rc.T = 5.0;
    try {
        (void)integrate(sys, s0, rc);
        FAIL() << "expected RunAborted";
    } catch (const RunAborted& e) {
        EXPECT_GT(e.step(), 0);
        EXPECT_GT(e.time(), 0.0);
    }
}

TEST(Integrate, RejectsBadGauge) {
    const SemidiscreteSystem sys(Partition(0, 1, 8), Bathymetry::flat(0, 1), {});
    RunConfig rc;
    rc.T = 0.1;
    rc.gauges = {2.0};
    EXPECT_THROW((void)integrate(sys, sys.zero_state(), rc), InvalidArgument);
}
