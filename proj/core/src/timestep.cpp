#include "vbwave/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vbwave/error.hpp"

namespace vbwave {

StepPlan plan_steps(double T, double courant, double h) {
    if (T < 0.0) {
        throw InvalidArgument("run: final time must be non-negative");
    }
    if (!(courant > 0.0) || !(h > 0.0)) {
        throw InvalidArgument("run: courant ratio and mesh size must be positive");
    }
    StepPlan plan;
    if (T == 0.0) {
        return plan;
    }
    const double kmax = courant * h;
    plan.steps = static_cast<long>(std::ceil(T / kmax - 1e-9));
    plan.steps = std::max(plan.steps, 1L);
    plan.k = T / static_cast<double>(plan.steps);
    return plan;
}

namespace {

void sample_gauges(const SemidiscreteSystem& sys, const State& s, std::vector<GaugeSeries>& gauges) {
    for (auto& g : gauges) {
        g.t.push_back(s.t);
        g.zeta.push_back(sys.space().evaluate(s.zc, g.x));
        g.u.push_back(sys.space().evaluate(s.uc, g.x));
    }
}

}  // namespace

RunRecord integrate(const SemidiscreteSystem& sys, const State& initial, const RunConfig& cfg) {
    const StepPlan plan = plan_steps(cfg.T, cfg.courant, sys.space().partition().h());
    RunRecord rec;
    rec.k = plan.k;
    rec.steps_planned = plan.steps;
    for (double x : cfg.gauges) {
        if (!sys.space().partition().contains(x)) {
            throw InvalidArgument("run: gauge position outside the domain");
        }
        rec.gauges.push_back(GaugeSeries{x, {}, {}, {}});
    }

    // Snapshot i is taken at the step closest to its requested time.
    std::vector<std::pair<long, double>> snaps;
    for (double ts : cfg.snapshot_times) {
        if (ts < 0.0 || ts > cfg.T * (1.0 + 1e-12)) {
            throw InvalidArgument("run: snapshot time outside [0, T]");
        }
        const long step = plan.steps == 0 ? 0 : std::lround(ts / plan.k);
        snaps.emplace_back(step, ts);
    }
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;

    State y = initial;
    y.t = 0.0;
    sys.constrain(y);
    rec.initial_mass = sys.mass(y);
    double out = 0.0;
    const auto record = [&](long step) {
        while (next_snap < snaps.size() && snaps[next_snap].first == step) {
            rec.snapshots.push_back(Snapshot{y.t, y});
            ++next_snap;
        }
        if (!rec.gauges.empty() && (step % std::max(1, cfg.gauge_every) == 0 || step == plan.steps)) {
            sample_gauges(sys, y, rec.gauges);
        }
        if (step % std::max(1, cfg.mass_every) == 0 || step == plan.steps) {
            const double m = sys.mass(y);
            rec.mass_t.push_back(y.t);
            rec.mass.push_back(m);
            rec.outflow.push_back(out);
        }
        const double m = sys.mass(y);
        rec.max_mass_drift = std::max(rec.max_mass_drift, std::abs(m + out - rec.initial_mass));
    };

    record(0);
    bool keep_going = !cfg.observer || cfg.observer(y, 0);
    Rk4Workspace ws;
    long step = 0;
    while (keep_going && step < plan.steps) {
        try {
            out += rk4_step(sys, y, plan.k, ws);
        } catch (const Error& err) {
            std::ostringstream msg;
            msg << "run aborted at step " << step + 1 << " (t = " << y.t + plan.k << "): " << err.what();
            throw RunAborted(msg.str(), step + 1, y.t + plan.k);
        }
        ++step;
        // Pin the clock to the step grid to avoid accumulated roundoff.
        y.t = plan.k * static_cast<double>(step);
        record(step);
        if (cfg.observer && !cfg.observer(y, step)) {
            keep_going = false;
        }
    }
    rec.steps_taken = step;
    rec.stopped_early = step < plan.steps;
    rec.final_state = std::move(y);
    return rec;
}

}  // namespace vbwave
