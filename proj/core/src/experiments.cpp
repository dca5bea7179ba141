#include "vbwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "vbwave/error.hpp"
#include "vbwave/io.hpp"
#include "vbwave/solitary.hpp"
#include "vbwave/timestep.hpp"

namespace vbwave {

void ExperimentResult::set(const std::string& key, double value) {
    for (auto& [k, v] : metrics) {
        if (k == key) {
            v = value;
            return;
        }
    }
    metrics.emplace_back(key, value);
}

std::optional<double> ExperimentResult::metric(const std::string& key) const {
    for (const auto& [k, v] : metrics) {
        if (k == key) return v;
    }
    return std::nullopt;
}

double ExperimentResult::at(const std::string& key) const {
    const auto v = metric(key);
    if (!v) {
        throw Error("experiment '" + name + "' has no metric '" + key + "'");
    }
    return *v;
}

const OutputFile* ExperimentResult::file(const std::string& file_name) const {
    for (const auto& f : files) {
        if (f.name == file_name) return &f;
    }
    return nullptr;
}

std::string ExperimentResult::metrics_text() const {
    std::string out;
    for (const auto& [k, v] : metrics) {
        out += k + "=" + format_double(v) + "\n";
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs fn(0..n-1) on up to `jobs` threads; the first exception is rethrown.
template <class F>
void parallel_for(int n, int jobs, F&& fn) {
    if (jobs <= 0) {
        jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    jobs = std::min(jobs, n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// Model-unit problem built from a config.
struct Problem {
    Partition partition;
    SemidiscreteSystem system;
    State initial;
};

Problem make_problem(const ExperimentConfig& c, const ModelParams& params, const Bathymetry& bathy) {
    const ScalingLayer& s = c.scaling;
    Partition partition(s.to_model(c.a, Unit::Length), s.to_model(c.b, Unit::Length), c.elements);
    std::optional<Forcing> forcing;
    if (c.initial.kind == InitialKind::Manufactured) {
        forcing = manufactured_forcing(params, bathy);
    }
    SemidiscreteSystem sys(partition, bathy, params, c.boundary, forcing, c.quadrature_points);

    const double x0 = s.to_model(c.initial.center, Unit::Length);
    const double amp = s.to_model(c.initial.amplitude, Unit::Length);
    State initial;
    switch (c.initial.kind) {
        case InitialKind::Rest: initial = sys.zero_state(); break;
        case InitialKind::Manufactured:
            initial = sys.project_initial([](double x) { return ManufacturedSolution::zeta(x, 0.0); },
                                          [](double x) { return ManufacturedSolution::u(x, 0.0); },
                                          [](double x) { return ManufacturedSolution::u(x, 0.0, 1); },
                                          c.initial.elliptic_u);
            break;
        case InitialKind::KdvPulse: {
            KdvPulse pulse{amp, x0, KdvPulse::Geometry::FlatDepth, 0.0};
            if (c.initial.velocity == PulseVelocity::Slope) {
                pulse.geometry = KdvPulse::Geometry::Slope;
                pulse.alpha = std::get<UniformSlope>(c.bathymetry).alpha;
            } else if (c.initial.velocity == PulseVelocity::Zero) {
                pulse.geometry = KdvPulse::Geometry::Rest;
            }
            // The elliptic projection needs u0'; a centred difference is ample.
            const auto u0 = [pulse](double x) { return pulse.u(x); };
            const auto du0 = [pulse](double x) {
                constexpr double d = 1e-5;
                return (pulse.u(x + d) - pulse.u(x - d)) / (2.0 * d);
            };
            initial = sys.project_initial([pulse](double x) { return pulse.zeta(x); }, u0, du0, c.initial.elliptic_u);
            break;
        }
        case InitialKind::CbSolitary: {
            const double speed = c.initial.speed > 0.0 ? s.to_model(c.initial.speed, Unit::Speed)
                                                       : speed_from_amplitude(params.epsilon, amp);
            SolitaryOptions opt;
            opt.points = c.initial.points;
            const SolitaryWave wave = solve_profile(params.epsilon, params.mu, speed, opt);
            initial = sys.project_initial([&](double x) { return wave.zeta(x - x0); },
                                          [&](double x) { return wave.u(x - x0); },
                                          [&](double x) { return wave.u(x - x0, 1); }, c.initial.elliptic_u);
            break;
        }
    }
    return Problem{partition, std::move(sys), std::move(initial)};
}

std::string time_tag(double t) {
    return format_double(t);
}

// Samples x, zeta, u, eta_b at four points per element, in physical units.
std::string snapshot_csv(const SemidiscreteSystem& sys, const State& st, const ScalingLayer& s) {
    const Partition& p = sys.space().partition();
    CsvTable table({"x", "zeta", "u", "eta_b"});
    const int n = 4 * p.elements();
    for (int i = 0; i <= n; ++i) {
        const double x = i == n ? p.b() : p.a() + p.length() * i / n;
        table.add_row({s.to_physical(x, Unit::Length), s.to_physical(sys.space().evaluate(st.zc, x), Unit::Length),
                       s.to_physical(sys.space().evaluate(st.uc, x), Unit::Speed),
                       s.to_physical(sys.bathymetry().depth(x), Unit::Length)});
    }
    return table.str();
}

const Snapshot& snapshot_near(const RunRecord& rec, double t) {
    const Snapshot* best = nullptr;
    for (const auto& sn : rec.snapshots) {
        if (!best || std::abs(sn.t - t) < std::abs(best->t - t)) best = &sn;
    }
    if (!best) {
        throw Error("internal: missing snapshot");
    }
    return *best;
}

double slope_of(const std::vector<double>& t, const std::vector<double>& x) {
    const double n = static_cast<double>(t.size());
    double st = 0, sx = 0, stt = 0, stx = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sx += x[i];
        stt += t[i] * t[i];
        stx += t[i] * x[i];
    }
    const double den = n * stt - st * st;
    return den != 0.0 ? (n * stx - st * sx) / den : 0.0;
}

std::optional<double> profile_slope(const ProfileSpec& p) {
    if (const auto* u = std::get_if<UniformSlope>(&p)) return u->alpha;
    if (const auto* r = std::get_if<ShelfRamp>(&p)) return r->alpha;
    if (const auto* w = std::get_if<BeachWall>(&p)) return w->slope;
    return std::nullopt;
}

}  // namespace

std::string convergence_csv(const ConvergenceTable& zeta, const ConvergenceTable& u) {
    std::string out =
        "N,zeta_L2,zeta_L2_rate,zeta_Linf,zeta_Linf_rate,zeta_H1,zeta_H1_rate,"
        "u_L2,u_L2_rate,u_Linf,u_Linf_rate,u_H1,u_H1_rate\n";
    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (std::size_t i = 0; i < zeta.rows.size(); ++i) {
        const auto& z = zeta.rows[i];
        const auto& w = u.rows[i];
        out += std::to_string(z.n);
        for (const auto* r : {&z, &w}) {
            out += "," + format_double(r->error.l2) + "," + cell(r->rate_l2) + "," + format_double(r->error.linf) + "," +
                   cell(r->rate_linf) + "," + format_double(r->error.h1semi) + "," + cell(r->rate_h1);
        }
        out += "\n";
    }
    return out;
}

ExperimentResult run_convergence(const ExperimentConfig& c) {
    const auto t0 = Clock::now();
    ExperimentResult res;
    res.name = c.name;
    const Bathymetry bathy = model_bathymetry(c);
    ExperimentConfig cc = c;
    cc.initial.kind = InitialKind::Manufactured;
    std::vector<std::pair<int, ErrorTriple>> ez_out(c.levels.size()), eu_out(c.levels.size());
    parallel_for(static_cast<int>(c.levels.size()), c.jobs == 0 ? 1 : c.jobs, [&](int i) {
        ExperimentConfig lc = cc;
        lc.elements = c.levels[static_cast<std::size_t>(i)];
        Problem pb = make_problem(lc, c.model, bathy);
        RunConfig rc;
        rc.T = c.scaling.to_model(c.T, Unit::Time);
        rc.courant = c.courant;
        const RunRecord rec = integrate(pb.system, pb.initial, rc);
        const double T = rec.final_state.t;
        const SplineSpace& sp = pb.system.space();
        ez_out[static_cast<std::size_t>(i)] = {
            lc.elements, error_norms(sp, rec.final_state.zc, [T](double x) { return ManufacturedSolution::zeta(x, T); },
                                     [T](double x) { return ManufacturedSolution::zeta(x, T, 1); })};
        eu_out[static_cast<std::size_t>(i)] = {
            lc.elements, error_norms(sp, rec.final_state.uc, [T](double x) { return ManufacturedSolution::u(x, T); },
                                     [T](double x) { return ManufacturedSolution::u(x, T, 1); })};
    });
    const ConvergenceTable tz = convergence_rates(ez_out);
    const ConvergenceTable tu = convergence_rates(eu_out);
    for (std::size_t i = 0; i < ez_out.size(); ++i) {
        const std::string n = std::to_string(ez_out[i].first);
        res.set("zeta_l2_N" + n, ez_out[i].second.l2);
        res.set("zeta_linf_N" + n, ez_out[i].second.linf);
        res.set("zeta_h1_N" + n, ez_out[i].second.h1semi);
        res.set("u_l2_N" + n, eu_out[i].second.l2);
        res.set("u_linf_N" + n, eu_out[i].second.linf);
        res.set("u_h1_N" + n, eu_out[i].second.h1semi);
    }
    auto put = [&](const std::string& key, const std::optional<double>& v) {
        if (v) res.set(key, *v);
    };
    put("rate_zeta_l2", tz.fitted_l2);
    put("rate_zeta_linf", tz.fitted_linf);
    put("rate_zeta_h1", tz.fitted_h1);
    put("rate_u_l2", tu.fitted_l2);
    put("rate_u_linf", tu.fitted_linf);
    put("rate_u_h1", tu.fitted_h1);
    res.files.push_back({"convergence.csv", convergence_csv(tz, tu)});
    res.convergence = tz;
    res.seconds = seconds_since(t0);
    res.set("seconds", res.seconds);
    return res;
}

ExperimentResult run_propagation(const ExperimentConfig& c) {
    const auto t0 = Clock::now();
    const ScalingLayer& s = c.scaling;
    ExperimentResult res;
    res.name = c.name;
    const Bathymetry bathy = model_bathymetry(c);
    Problem pb = make_problem(c, c.model, bathy);
    const SemidiscreteSystem& sys = pb.system;
    const SplineSpace& space = sys.space();
    auto L = [&](double v) { return s.to_model(v, Unit::Length); };
    auto Lp = [&](double v) { return s.to_physical(v, Unit::Length); };
    auto Tm = [&](double v) { return s.to_model(v, Unit::Time); };
    auto Tp = [&](double v) { return s.to_physical(v, Unit::Time); };

    RunConfig rc;
    rc.T = Tm(c.T);
    rc.courant = c.courant;
    rc.gauge_every = c.gauge_every;
    rc.mass_every = c.mass_every;
    for (double x : c.gauges) rc.gauges.push_back(L(x));
    if (c.runup) rc.gauges.push_back(L(c.runup->x));
    for (double t : c.snapshots) rc.snapshot_times.push_back(Tm(t));
    for (double t : c.amplitude_times) rc.snapshot_times.push_back(Tm(t));
    if (c.reflection) rc.snapshot_times.push_back(Tm(c.reflection->time));

    std::optional<ShoalingTracker> tracker;
    if (c.shoaling) {
        tracker.emplace(space, bathy, L(c.shoaling->reference_amplitude), L(c.shoaling->x_start),
                        c.shoaling->stop_ratio);
    }
    std::vector<double> track_t, track_x, track_a;
    double next_track = c.crest_track ? Tm(c.crest_track->start) : 0.0;
    if (tracker || c.crest_track) {
        rc.observer = [&](const State& st, long) {
            if (c.crest_track && st.t >= next_track - 1e-9 && next_track <= Tm(c.crest_track->end) + 1e-9) {
                const CrestMetrics cm = crest_metrics(space, st.zc);
                track_t.push_back(st.t);
                track_x.push_back(cm.x_crest);
                track_a.push_back(cm.zeta_max);
                next_track += Tm(c.crest_track->every);
            }
            // The shoaling stop ends the curve, not the run.
            if (tracker && !tracker->stopped()) tracker->observe(st);
            return true;
        };
    }

    const RunRecord rec = integrate(sys, pb.initial, rc);
    const State& fin = rec.final_state;

    res.set("final_time", Tp(fin.t));
    res.set("steps", static_cast<double>(rec.steps_taken));
    res.set("k", Tp(rec.k));
    res.set("h", Lp(pb.partition.h()));
    res.set("mass_initial", rec.initial_mass);
    res.set("mass_drift", rec.max_mass_drift);
    res.set("mass_drift_relative", rec.max_mass_drift / std::max(1.0, std::abs(rec.initial_mass)));
    {
        const CrestMetrics cm = crest_metrics(space, fin.zc);
        res.set("final_amplitude", Lp(cm.zeta_max));
        res.set("final_x_crest", Lp(cm.x_crest));
    }

    for (double t : c.amplitude_times) {
        const CrestMetrics cm = crest_metrics(space, snapshot_near(rec, Tm(t)).state.zc);
        res.set("amplitude_t" + time_tag(t), Lp(cm.zeta_max));
        res.set("x_crest_t" + time_tag(t), Lp(cm.x_crest));
    }
    if (c.reflection) {
        const auto& r = *c.reflection;
        const ReflectionMetrics m =
            reflected_wave_metrics(space, snapshot_near(rec, Tm(r.time)).state.zc, L(r.lo), L(r.hi), r.theta);
        res.set("reflection_amplitude", Lp(m.amplitude));
        res.set("reflection_wavelength", Lp(m.wavelength));
        res.set("reflection_crest_height", Lp(m.crest_height));
        res.set("reflection_superlevel_measure", Lp(m.superlevel_measure));
        if (const auto alpha = profile_slope(c.bathymetry); alpha && c.initial.amplitude > 0.0) {
            res.set("reflection_estimate", Lp(reflection_estimate(*alpha, L(c.initial.amplitude))));
        }
    }
    if (c.crest_track) {
        CsvTable table({"t", "x_crest", "zeta_max"});
        for (std::size_t i = 0; i < track_t.size(); ++i) {
            table.add_row({Tp(track_t[i]), Lp(track_x[i]), Lp(track_a[i])});
        }
        if (track_t.size() >= 2) {
            res.set("crest_speed", s.to_physical(slope_of(track_t, track_x), Unit::Speed));
            res.set("crest_amplitude_end", Lp(track_a.back()));
        }
        res.files.push_back({"crest_track.csv", table.str()});
    }
    if (tracker) {
        const auto& curve = tracker->curve();
        CsvTable table({"t", "x_crest", "eta_b", "amplification", "greens_law", "steepness_ratio"});
        double margin = -std::numeric_limits<double>::infinity();
        for (const auto& p : curve) {
            table.add_row({Tp(p.t), Lp(p.x_crest), Lp(p.depth), p.amplification, greens_law(p.depth), p.ratio});
            if (p.depth > c.shoaling->green_min_depth) {
                margin = std::max(margin, p.amplification - greens_law(p.depth));
            }
        }
        res.set("shoaling_points", static_cast<double>(curve.size()));
        if (!curve.empty()) {
            res.set("shoaling_initial", curve.front().amplification);
            res.set("shoaling_final", curve.back().amplification);
            res.set("shoaling_final_depth", Lp(curve.back().depth));
        }
        if (std::isfinite(margin)) {
            res.set("green_margin", margin);
        }
        res.set("shoaling_stopped", tracker->stopped() ? 1.0 : 0.0);
        res.files.push_back({"shoaling.csv", table.str()});
    }
    if (c.residual) {
        double m = 0.0;
        const double lo = L(c.residual->lo);
        const double hi = L(c.residual->hi);
        constexpr int kSamples = 20001;
        for (int i = 0; i < kSamples; ++i) {
            const double x = lo + (hi - lo) * i / (kSamples - 1);
            m = std::max(m, std::abs(space.evaluate(fin.zc, x)));
        }
        res.set("residual_max_zeta", Lp(m));
        res.set("residual_max", Lp(c.model.epsilon * m));
    }
    if (c.runup) {
        res.set("runup", Lp(runup_max(rec.gauges.back())));
    }
    if (c.crest_fraction) {
        res.set("crest_count", count_crests(space, fin.zc, *c.crest_fraction));
    }

    for (double t : c.snapshots) {
        const Snapshot& sn = snapshot_near(rec, Tm(t));
        res.files.push_back({"snapshot_t" + time_tag(t) + ".csv", snapshot_csv(sys, sn.state, s)});
    }
    for (std::size_t g = 0; g < c.gauges.size(); ++g) {
        const GaugeSeries& gs = rec.gauges[g];
        CsvTable table({"t", "zeta"});
        for (std::size_t i = 0; i < gs.t.size(); ++i) table.add_row({Tp(gs.t[i]), Lp(gs.zeta[i])});
        res.files.push_back({"gauge_" + std::to_string(g) + ".csv", table.str()});
        res.set("gauge_" + std::to_string(g) + "_max", Lp(runup_max(gs)));
    }
    {
        CsvTable table({"t", "mass", "outflow"});
        for (std::size_t i = 0; i < rec.mass_t.size(); ++i) {
            table.add_row({Tp(rec.mass_t[i]), rec.mass[i], rec.outflow[i]});
        }
        res.files.push_back({"mass.csv", table.str()});
    }
    if (c.reference) {
        const GaugeSeries& gs = rec.gauges[static_cast<std::size_t>(c.reference->gauge)];
        std::vector<double> t, z;
        for (std::size_t i = 0; i < gs.t.size(); ++i) {
            t.push_back(Tp(gs.t[i]));
            z.push_back(Lp(gs.zeta[i]));
        }
        const ReferenceComparison cmp = compare_reference(t, z, c.reference->file, c.reference->max_shift);
        res.set("reference_amplitude_ratio", cmp.amplitude_ratio);
        res.set("reference_l2_deviation", cmp.l2_deviation);
        res.set("reference_best_shift", cmp.best_shift);
        res.set("reference_shifted_l2_deviation", cmp.shifted_l2_deviation);
    }
    res.seconds = seconds_since(t0);
    res.set("seconds", res.seconds);
    return res;
}

ExperimentResult run_steepness(const ExperimentConfig& c) {
    const auto t0 = Clock::now();
    ExperimentResult res;
    res.name = c.name;
    const ScalingLayer& s = c.scaling;
    const std::size_t nb = c.betas.size();
    std::vector<State> finals(2 * nb);
    std::vector<std::optional<Problem>> problems(2 * nb);
    parallel_for(static_cast<int>(2 * nb), c.jobs, [&](int job) {
        const std::size_t i = static_cast<std::size_t>(job) / 2;
        const std::size_t m = static_cast<std::size_t>(job) % 2;
        ExperimentConfig jc = c;
        std::get<SineShelf>(jc.bathymetry).beta = c.betas[i];
        ModelParams params = c.model;
        params.kind = c.sweep_models[m];
        Problem pb = make_problem(jc, params, model_bathymetry(jc));
        RunConfig rc;
        rc.T = s.to_model(c.T, Unit::Time);
        rc.courant = c.courant;
        finals[static_cast<std::size_t>(job)] = integrate(pb.system, pb.initial, rc).final_state;
        problems[static_cast<std::size_t>(job)].emplace(std::move(pb));
    });
    const double fraction = c.crest_fraction.value_or(0.25);
    const std::string m0 = to_string(c.sweep_models[0]);
    const std::string m1 = to_string(c.sweep_models[1]);
    CsvTable table({"beta", "linf_difference", "crests_" + m0, "crests_" + m1, "max_" + m0, "max_" + m1});
    for (std::size_t i = 0; i < nb; ++i) {
        const SemidiscreteSystem& sys = problems[2 * i]->system;
        const auto& a = finals[2 * i];
        const auto& b = finals[2 * i + 1];
        const std::string tag = "_beta" + format_double(c.betas[i]);
        const double diff = max_difference(sys.space(), a.zc, b.zc);
        const int ca = count_crests(sys.space(), a.zc, fraction);
        const int cb = count_crests(sys.space(), b.zc, fraction);
        const double ma = crest_metrics(sys.space(), a.zc).zeta_max;
        const double mb = crest_metrics(sys.space(), b.zc).zeta_max;
        res.set("linf_difference" + tag, s.to_physical(diff, Unit::Length));
        res.set("crest_count_" + m0 + tag, ca);
        res.set("crest_count_" + m1 + tag, cb);
        table.add_row({c.betas[i], s.to_physical(diff, Unit::Length), static_cast<double>(ca),
                       static_cast<double>(cb), s.to_physical(ma, Unit::Length), s.to_physical(mb, Unit::Length)});
        res.files.push_back({"final" + tag + "_" + m0 + ".csv", snapshot_csv(sys, a, s)});
        res.files.push_back(
            {"final" + tag + "_" + m1 + ".csv", snapshot_csv(problems[2 * i + 1]->system, b, s)});
    }
    res.files.insert(res.files.begin(), OutputFile{"steepness.csv", table.str()});
    res.seconds = seconds_since(t0);
    res.set("seconds", res.seconds);
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    switch (config.kind) {
        case ExperimentKind::Convergence: return run_convergence(config);
        case ExperimentKind::Steepness: return run_steepness(config);
        case ExperimentKind::Propagation: break;
    }
    return run_propagation(config);
}

void write_outputs(const ExperimentResult& result, const ExperimentConfig& config, const std::string& dir) {
    // "seconds" varies between runs; keep metrics.txt byte-identical.
    std::string metrics;
    for (const auto& [k, v] : result.metrics) {
        if (k != "seconds") metrics += k + "=" + format_double(v) + "\n";
    }
    const std::filesystem::path base(dir);
    for (const auto& f : result.files) {
        write_file_atomic((base / f.name).string(), f.content);
    }
    write_file_atomic((base / "config.echo").string(), echo_config(config));
    write_file_atomic((base / "metrics.txt").string(), metrics);
}

std::string resolve_output_dir(const ExperimentConfig& config, const std::string& override_dir) {
    if (!override_dir.empty()) {
        return override_dir;
    }
    if (const char* env = std::getenv("VBWAVE_OUTPUT_DIR"); env && *env) {
        return (std::filesystem::path(env) / config.output_dir).string();
    }
    return config.output_dir;
}

std::vector<JobOutcome> run_parallel(const std::vector<ExperimentConfig>& configs, int jobs) {
    std::vector<JobOutcome> out(configs.size());
    parallel_for(static_cast<int>(configs.size()), jobs, [&](int i) {
        auto& o = out[static_cast<std::size_t>(i)];
        try {
            o.result = run_experiment(configs[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
            o.error = e.what();
        }
    });
    return out;
}

ReferenceComparison compare_reference(std::span<const double> t, std::span<const double> zeta,
                                      const std::string& reference_csv, double max_shift) {
    const CsvData data = read_csv(reference_csv);
    try {
        return compare_series(t, zeta, data.column("t"), data.column("zeta"), max_shift);
    } catch (const InvalidArgument& e) {
        throw ConfigError(reference_csv + ": " + e.what());
    }
}

}  // namespace vbwave
