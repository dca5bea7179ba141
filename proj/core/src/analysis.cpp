#include "vbwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vbwave/error.hpp"

namespace vbwave {

ErrorTriple error_norms(const SplineSpace& space, std::span<const double> coeffs, const ScalarFunction& exact,
                        const ScalarFunction& dexact, int points) {
    const QuadratureTable table(space, gauss_rule(points));
    const auto v = values_at_points(space, table, coeffs, 0);
    const auto dv = values_at_points(space, table, coeffs, 1);
    ErrorTriple err;
    double l2 = 0.0;
    double h1 = 0.0;
    for (int e = 0; e < table.elements(); ++e) {
        for (int q = 0; q < table.points(); ++q) {
            const std::size_t i = static_cast<std::size_t>(e) * table.points() + q;
            const double x = table.x(e, q);
            const double d = v[i] - exact(x);
            l2 += table.weight(e, q) * d * d;
            err.linf = std::max(err.linf, std::abs(d));
            if (dexact) {
                const double dd = dv[i] - dexact(x);
                h1 += table.weight(e, q) * dd * dd;
            }
        }
    }
    err.l2 = std::sqrt(l2);
    err.h1semi = std::sqrt(h1);
    return err;
}

std::optional<double> fitted_rate(std::span<const int> n, std::span<const double> e) {
    if (n.size() != e.size() || n.size() < 2) {
        return std::nullopt;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(e[i] > 0.0)) {
            return std::nullopt;
        }
        const double x = std::log(static_cast<double>(n[i]));
        const double y = -std::log(e[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = m * sxx - sx * sx;
    if (den == 0.0) {
        return std::nullopt;
    }
    return (m * sxy - sx * sy) / den;
}

ConvergenceTable convergence_rates(const std::vector<std::pair<int, ErrorTriple>>& errors) {
    ConvergenceTable table;
    const auto rate = [](double prev, double cur, int nprev, int ncur) -> std::optional<double> {
        if (!(prev > 0.0) || !(cur > 0.0)) {
            return std::nullopt;
        }
        return std::log(prev / cur) / std::log(static_cast<double>(ncur) / nprev);
    };
    std::vector<int> ns;
    std::vector<double> l2, li, h1;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        ConvergenceRow row;
        row.n = errors[i].first;
        row.error = errors[i].second;
        if (i > 0) {
            const auto& p = errors[i - 1];
            if (row.n <= p.first) {
                throw InvalidArgument("convergence_rates: N must increase");
            }
            row.rate_l2 = rate(p.second.l2, row.error.l2, p.first, row.n);
            row.rate_linf = rate(p.second.linf, row.error.linf, p.first, row.n);
            row.rate_h1 = rate(p.second.h1semi, row.error.h1semi, p.first, row.n);
        }
        ns.push_back(row.n);
        l2.push_back(row.error.l2);
        li.push_back(row.error.linf);
        h1.push_back(row.error.h1semi);
        table.rows.push_back(row);
    }
    table.fitted_l2 = fitted_rate(ns, l2);
    table.fitted_linf = fitted_rate(ns, li);
    table.fitted_h1 = fitted_rate(ns, h1);
    return table;
}

CrestMetrics crest_metrics(const SplineSpace& space, std::span<const double> zc,
                           std::optional<std::pair<double, double>> window) {
    const Partition& part = space.partition();
    double lo = part.a();
    double hi = part.b();
    if (window) {
        lo = std::max(lo, window->first);
        hi = std::min(hi, window->second);
        if (!(hi > lo)) {
            throw InvalidArgument("crest_metrics: empty window");
        }
    }
    const QuadratureRule rule = gauss_rule(kNormPoints);
    const int e0 = part.element_of(lo);
    const int e1 = part.element_of(hi);
    CrestMetrics out;
    out.coarse_max = -std::numeric_limits<double>::infinity();
    // Candidate points: window ends plus quadrature nodes inside the window.
    const auto consider = [&](double x) {
        const double v = space.evaluate(zc, x);
        if (v > out.coarse_max) {
            out.coarse_max = v;
            out.x_crest = x;
        }
    };
    if (window) {
        consider(lo);
    }
    for (int e = e0; e <= e1; ++e) {
        for (int q = 0; q < rule.size(); ++q) {
            const double x = part.node(e) + rule.nodes[q] * part.h();
            if (x >= lo && x <= hi) {
                consider(x);
            }
        }
    }
    if (window) {
        consider(hi);
    }
    out.zeta_max = out.coarse_max;

    // Golden-section refinement of -zeta on one cell around the coarse maximiser.
    double a = std::max(lo, out.x_crest - part.h());
    double b = std::min(hi, out.x_crest + part.h());
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = space.evaluate(zc, c);
    double fd = space.evaluate(zc, d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = space.evaluate(zc, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = space.evaluate(zc, d);
        }
    }
    const double xr = 0.5 * (a + b);
    const double vr = space.evaluate(zc, xr);
    if (vr > out.zeta_max) {
        out.zeta_max = vr;
        out.x_crest = xr;
    }
    return out;
}

namespace {

struct Superlevel {
    double measure = 0.0;
    double integral = 0.0;
};

// Measure of {z > level} and the integral of z over it, from samples with
// spacing dx, crossings located by linear interpolation.
Superlevel superlevel(const std::vector<double>& z, double dx, double level) {
    Superlevel s;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double z0 = z[i] - level;
        const double z1 = z[i + 1] - level;
        if (z0 > 0.0 && z1 > 0.0) {
            s.measure += dx;
            s.integral += 0.5 * (z[i] + z[i + 1]) * dx;
        } else if (z0 > 0.0 || z1 > 0.0) {
            const double len = (z0 > 0.0 ? z0 : z1) / std::abs(z1 - z0) * dx;
            const double top = z0 > 0.0 ? z[i] : z[i + 1];
            s.measure += len;
            s.integral += 0.5 * (top + level) * len;
        }
    }
    return s;
}

}  // namespace

ReflectionMetrics reflected_wave_metrics(const SplineSpace& space, std::span<const double> zc, double lo,
                                         double hi, double theta) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw InvalidArgument("reflected_wave_metrics: threshold must lie in (0, 1)");
    }
    if (!(hi > lo)) {
        throw InvalidArgument("reflected_wave_metrics: empty window");
    }
    ReflectionMetrics m;
    m.threshold = theta;
    const CrestMetrics crest = crest_metrics(space, zc, std::make_pair(lo, hi));
    m.crest_height = crest.zeta_max;
    m.x_crest = crest.x_crest;
    if (!(m.crest_height > 0.0)) {
        throw InvalidArgument("reflected_wave_metrics: no elevation wave in the window");
    }
    constexpr int kSamples = 2001;
    const double dx = (hi - lo) / (kSamples - 1);
    std::vector<double> z(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        z[i] = space.evaluate(zc, lo + i * dx);
    }
    const Superlevel top = superlevel(z, dx, theta * m.crest_height);
    if (!(top.measure > 0.0)) {
        throw InvalidArgument("reflected_wave_metrics: empty superlevel set");
    }
    m.superlevel_measure = top.measure;
    m.amplitude = top.integral / top.measure;
    m.wavelength = superlevel(z, dx, 0.5 * m.crest_height).measure;
    return m;
}

double reflection_estimate(double alpha, double a0) {
    if (alpha < 0.0 || a0 < 0.0) {
        throw InvalidArgument("reflection_estimate: alpha and a0 must be non-negative");
    }
    return 0.5 * alpha * std::sqrt(a0 / 3.0);
}

double greens_law(double depth) {
    if (!(depth > 0.0)) {
        throw InvalidArgument("greens_law: depth must be positive");
    }
    return std::pow(depth, -0.25);
}

double conserved_mass(const SplineSpace& space, std::span<const double> zc) {
    const auto w = space.basis_integrals();
    double m = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        m += w[i] * zc[i];
    }
    return m;
}

double max_steepness_ratio(const SplineSpace& space, std::span<const double> zc, const Bathymetry& bathy) {
    const QuadratureTable table(space, gauss_rule(kNormPoints));
    const auto v = values_at_points(space, table, zc, 0);
    double r = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < table.elements(); ++e) {
        for (int q = 0; q < table.points(); ++q) {
            const double d = bathy.depth(table.x(e, q));
            if (d > 0.0) {
                r = std::max(r, v[static_cast<std::size_t>(e) * table.points() + q] / d);
            }
        }
    }
    return r;
}

ShoalingTracker::ShoalingTracker(const SplineSpace& space, const Bathymetry& bathy, double a0, double x_start,
                                 double stop_ratio)
    : space_(&space), bathy_(&bathy), a0_(a0), x_start_(x_start), stop_ratio_(stop_ratio) {}

bool ShoalingTracker::observe(const State& state) {
    if (stopped_) {
        return false;
    }
    const double ratio = max_steepness_ratio(*space_, state.zc, *bathy_);
    if (ratio >= stop_ratio_) {
        stopped_ = true;
        return false;
    }
    const CrestMetrics crest = crest_metrics(*space_, state.zc);
    if (!started_) {
        if (side_ == 0) {
            // A crest starting within one cell of x_start counts as already there.
            const double tol = space_->partition().h();
            side_ = crest.x_crest < x_start_ - tol ? 1 : (crest.x_crest > x_start_ + tol ? -1 : 2);
        }
        // Start once the crest reaches x_start from whichever side it began on.
        started_ = side_ == 2 || (side_ == 1 && crest.x_crest >= x_start_) || (side_ == -1 && crest.x_crest <= x_start_);
    }
    if (started_) {
        curve_.push_back(ShoalingPoint{state.t, crest.x_crest, bathy_->depth(crest.x_crest), crest.zeta_max / a0_,
                                       ratio});
    }
    return true;
}

double runup_max(const GaugeSeries& gauge) {
    double m = -std::numeric_limits<double>::infinity();
    for (double z : gauge.zeta) {
        m = std::max(m, z);
    }
    return gauge.zeta.empty() ? 0.0 : m;
}

int count_crests(const SplineSpace& space, std::span<const double> zc, double fraction,
                 std::optional<std::pair<double, double>> window, int samples) {
    double lo = space.partition().a();
    double hi = space.partition().b();
    if (window) {
        lo = std::max(lo, window->first);
        hi = std::min(hi, window->second);
    }
    std::vector<double> z(static_cast<std::size_t>(samples));
    double zmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        z[i] = space.evaluate(zc, lo + (hi - lo) * i / (samples - 1));
        zmax = std::max(zmax, z[i]);
    }
    if (!(zmax > 0.0)) {
        return 0;
    }
    const double level = fraction * zmax;
    int count = 0;
    for (int i = 1; i + 1 < samples; ++i) {
        if (z[i] > level && z[i] > z[i - 1] && z[i] >= z[i + 1]) {
            ++count;
        }
    }
    return count;
}

double max_difference(const SplineSpace& space, std::span<const double> f, std::span<const double> g,
                      int samples) {
    const double lo = space.partition().a();
    const double hi = space.partition().b();
    double m = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * i / (samples - 1);
        m = std::max(m, std::abs(space.evaluate(f, x) - space.evaluate(g, x)));
    }
    return m;
}

namespace {

double interp(std::span<const double> t, std::span<const double> z, double x) {
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    if (it == t.begin()) {
        return z.front();
    }
    if (it == t.end()) {
        return z.back();
    }
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - w) * z[i - 1] + w * z[i];
}

void check_series(std::span<const double> t, std::span<const double> z, const char* what) {
    if (t.size() != z.size() || t.size() < 2) {
        throw InvalidArgument(std::string("compare_series: ") + what + " needs at least two samples");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw InvalidArgument(std::string("compare_series: ") + what + " times must increase");
        }
    }
}

}  // namespace

ReferenceComparison compare_series(std::span<const double> t_model, std::span<const double> z_model,
                                   std::span<const double> t_ref, std::span<const double> z_ref,
                                   double max_shift) {
    check_series(t_model, z_model, "model series");
    check_series(t_ref, z_ref, "reference series");
    ReferenceComparison out;
    const auto rms = [&](double shift, double* zm_max, double* zr_max) {
        const double t0 = std::max(t_model.front(), t_ref.front() + shift);
        const double t1 = std::min(t_model.back(), t_ref.back() + shift);
        double s = 0.0;
        long cnt = 0;
        for (std::size_t i = 0; i < t_model.size(); ++i) {
            const double t = t_model[i];
            if (t < t0 || t > t1) {
                continue;
            }
            const double zr = interp(t_ref, z_ref, t - shift);
            const double d = z_model[i] - zr;
            s += d * d;
            ++cnt;
            if (zm_max) *zm_max = std::max(*zm_max, z_model[i]);
            if (zr_max) *zr_max = std::max(*zr_max, zr);
        }
        if (cnt == 0) {
            return std::numeric_limits<double>::infinity();
        }
        return std::sqrt(s / cnt);
    };
    out.overlap_start = std::max(t_model.front(), t_ref.front());
    out.overlap_end = std::min(t_model.back(), t_ref.back());
    if (!(out.overlap_end > out.overlap_start)) {
        throw InvalidArgument("compare_series: the series do not overlap in time");
    }
    double zm = -std::numeric_limits<double>::infinity();
    double zr = -std::numeric_limits<double>::infinity();
    out.l2_deviation = rms(0.0, &zm, &zr);
    out.amplitude_ratio = zr != 0.0 ? zm / zr : std::numeric_limits<double>::infinity();
    out.best_shift = 0.0;
    out.shifted_l2_deviation = out.l2_deviation;
    if (max_shift > 0.0) {
        constexpr int kGrid = 401;
        for (int i = 0; i < kGrid; ++i) {
            const double s = -max_shift + 2.0 * max_shift * i / (kGrid - 1);
            const double r = rms(s, nullptr, nullptr);
            if (r < out.shifted_l2_deviation) {
                out.shifted_l2_deviation = r;
                out.best_shift = s;
            }
        }
    }
    return out;
}

}  // namespace vbwave
