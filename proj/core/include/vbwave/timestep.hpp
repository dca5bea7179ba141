#pragma once

// Classical four-stage Runge-Kutta time stepping with k = courant * h
// (reduced so that T/k is an integer), plus the run driver used by the
// experiments: gauges, snapshots, mass trace and early stopping.

#include <cmath>
#include <concepts>
#include <functional>
#include <vector>

#include "vbwave/models.hpp"

namespace vbwave {

/// Anything with State-valued right-hand side, boundary constraint and
/// outflow rate. SemidiscreteSystem is the production model.
template <class S>
concept OdeSystem = requires(const S& sys, const State& y, State& dy, State& ym) {
    sys.rhs(y, dy);
    sys.constrain(ym);
    { sys.outflow(y) } -> std::convertible_to<double>;
};

namespace detail {
inline void combine(State& out, const State& y, double a, const State& s) {
    out.zc.resize(y.zc.size());
    out.uc.resize(y.uc.size());
    for (std::size_t i = 0; i < y.zc.size(); ++i) out.zc[i] = y.zc[i] + a * s.zc[i];
    for (std::size_t i = 0; i < y.uc.size(); ++i) out.uc[i] = y.uc[i] + a * s.uc[i];
}
}  // namespace detail

/// Stage storage reused across steps.
struct Rk4Workspace {
    State s1, s2, s3, s4, stage;
};

/// One RK4 step of size k in place. The boundary constraint is re-applied to
/// every stage value and to the result. Returns the stage-weighted outflow
/// k/6 (o1 + 2 o2 + 2 o3 + o4), so that mass(y_new) = mass(y) - returned value.
template <OdeSystem S>
double rk4_step(const S& sys, State& y, double k, Rk4Workspace& ws) {
    const double t = y.t;
    sys.constrain(y);
    const double o1 = sys.outflow(y);
    sys.rhs(y, ws.s1);

    detail::combine(ws.stage, y, 0.5 * k, ws.s1);
    ws.stage.t = t + 0.5 * k;
    sys.constrain(ws.stage);
    const double o2 = sys.outflow(ws.stage);
    sys.rhs(ws.stage, ws.s2);

    detail::combine(ws.stage, y, 0.5 * k, ws.s2);
    ws.stage.t = t + 0.5 * k;
    sys.constrain(ws.stage);
    const double o3 = sys.outflow(ws.stage);
    sys.rhs(ws.stage, ws.s3);

    detail::combine(ws.stage, y, k, ws.s3);
    ws.stage.t = t + k;
    sys.constrain(ws.stage);
    const double o4 = sys.outflow(ws.stage);
    sys.rhs(ws.stage, ws.s4);

    const double c = k / 6.0;
    for (std::size_t i = 0; i < y.zc.size(); ++i) {
        y.zc[i] += c * (ws.s1.zc[i] + 2.0 * ws.s2.zc[i] + 2.0 * ws.s3.zc[i] + ws.s4.zc[i]);
    }
    for (std::size_t i = 0; i < y.uc.size(); ++i) {
        y.uc[i] += c * (ws.s1.uc[i] + 2.0 * ws.s2.uc[i] + 2.0 * ws.s3.uc[i] + ws.s4.uc[i]);
    }
    y.t = t + k;
    sys.constrain(y);
    return c * (o1 + 2.0 * o2 + 2.0 * o3 + o4);
}

template <OdeSystem S>
double rk4_step(const S& sys, State& y, double k) {
    Rk4Workspace ws;
    return rk4_step(sys, y, k, ws);
}

/// Number of steps and step size: k = T / ceil(T / (courant h)).
struct StepPlan {
    long steps = 0;
    double k = 0.0;
};
StepPlan plan_steps(double T, double courant, double h);

struct GaugeSeries {
    double x = 0.0;
    std::vector<double> t;
    std::vector<double> zeta;
    std::vector<double> u;
};

struct Snapshot {
    double t = 0.0;
    State state;
};

struct RunConfig {
    double T = 0.0;
    double courant = 0.5;
    std::vector<double> gauges;
    int gauge_every = 1;  ///< sample gauges every this many steps
    std::vector<double> snapshot_times;
    int mass_every = 1;   ///< record the mass trace every this many steps
    /// Called after every step (and once for the initial state); returning
    /// false stops the run early.
    std::function<bool(const State&, long step)> observer;
};

struct RunRecord {
    State final_state;
    long steps_taken = 0;
    long steps_planned = 0;
    double k = 0.0;
    bool stopped_early = false;
    std::vector<GaugeSeries> gauges;
    std::vector<Snapshot> snapshots;
    std::vector<double> mass_t;
    std::vector<double> mass;
    /// Cumulative volume that left the domain, matching mass_t.
    std::vector<double> outflow;
    double initial_mass = 0.0;
    /// max over the trace of |mass + outflow - initial_mass|.
    double max_mass_drift = 0.0;
};

/// Fixed-step march to cfg.T. A DepthError (or any library error) raised
/// during the march is rethrown as RunAborted carrying the step and time.
RunRecord integrate(const SemidiscreteSystem& sys, const State& initial, const RunConfig& cfg);

}  // namespace vbwave
