#pragma once

// Diagnostics on spline fields: error norms, convergence rates, crest and
// reflected-wave measurements, shoaling curves, runup, crest counting and
// comparison with reference gauge records.

#include <optional>
#include <span>
#include <vector>

#include "vbwave/assembly.hpp"
#include "vbwave/bathymetry.hpp"
#include "vbwave/spline_space.hpp"
#include "vbwave/timestep.hpp"

namespace vbwave {

struct ErrorTriple {
    double l2 = 0.0;
    double linf = 0.0;
    double h1semi = 0.0;
};

/// L2 and H1-seminorm errors by per-element Gauss quadrature (5 points by
/// default); Linf is the maximum error over the same quadrature points.
ErrorTriple error_norms(const SplineSpace& space, std::span<const double> coeffs, const ScalarFunction& exact,
                        const ScalarFunction& dexact, int points = kNormPoints);

struct ConvergenceRow {
    int n = 0;
    ErrorTriple error;
    std::optional<double> rate_l2;  ///< log2(e_prev / e) against the previous row
    std::optional<double> rate_linf;
    std::optional<double> rate_h1;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    /// Least-squares slopes of -log e against log N over all rows.
    std::optional<double> fitted_l2;
    std::optional<double> fitted_linf;
    std::optional<double> fitted_h1;
};

/// Rates for a sequence of (N, errors) with N doubling. Rates involving a
/// zero error are left empty.
ConvergenceTable convergence_rates(const std::vector<std::pair<int, ErrorTriple>>& errors);
/// Least-squares slope of -log(e) against log(n); empty if any e <= 0.
std::optional<double> fitted_rate(std::span<const int> n, std::span<const double> e);

struct CrestMetrics {
    double zeta_max = 0.0;
    double x_crest = 0.0;
    double coarse_max = 0.0;
};

/// Coarse maximum over the 5-point quadrature nodes of the elements meeting
/// [lo, hi], refined by golden-section search on the spline within one mesh
/// cell on either side. Ties go to the leftmost node.
CrestMetrics crest_metrics(const SplineSpace& space, std::span<const double> zc,
                           std::optional<std::pair<double, double>> window = std::nullopt);

struct ReflectionMetrics {
    /// Mean height over the superlevel set I; the ripples riding on a flat
    /// reflected wave make the pointwise maximum a poor amplitude.
    double amplitude = 0.0;
    double crest_height = 0.0;  ///< max zeta in the window
    double x_crest = 0.0;
    double wavelength = 0.0;    ///< measure of {zeta > crest_height / 2}
    double superlevel_measure = 0.0;  ///< |I|
    double threshold = 0.8;
};

/// I = {x in window : zeta > theta * crest_height}, evaluated on 2001 uniform
/// samples with linear interpolation at the crossings.
ReflectionMetrics reflected_wave_metrics(const SplineSpace& space, std::span<const double> zc, double lo,
                                         double hi, double theta = 0.8);

/// Linear shallow-water estimate of the reflected amplitude off a slope:
/// (alpha/2) sqrt(a0/3).
double reflection_estimate(double alpha, double a0);

/// Green's law amplitude ratio eta_b^(-1/4).
double greens_law(double depth);

/// int zeta_h dx from the exact basis integrals.
double conserved_mass(const SplineSpace& space, std::span<const double> zc);

/// max_x zeta/eta_b over the 5-point quadrature nodes.
double max_steepness_ratio(const SplineSpace& space, std::span<const double> zc, const Bathymetry& bathy);

struct ShoalingPoint {
    double t = 0.0;
    double x_crest = 0.0;
    double depth = 0.0;      ///< eta_b at the crest
    double amplification = 0.0;  ///< zeta_max / a0
    double ratio = 0.0;      ///< max_x zeta / eta_b
};

/// Observer that samples the shoaling curve once the crest has reached
/// `x_start` (moving in either direction) and requests a stop when
/// max_x zeta/eta_b reaches stop_ratio.
class ShoalingTracker {
public:
    ShoalingTracker(const SplineSpace& space, const Bathymetry& bathy, double a0, double x_start,
                    double stop_ratio);
    /// Returns false once the stopping criterion is met.
    bool observe(const State& state);
    [[nodiscard]] const std::vector<ShoalingPoint>& curve() const noexcept { return curve_; }
    [[nodiscard]] bool stopped() const noexcept { return stopped_; }

private:
    const SplineSpace* space_;
    const Bathymetry* bathy_;
    double a0_;
    double x_start_;
    double stop_ratio_;
    int side_ = 0;
    bool started_ = false;
    bool stopped_ = false;
    std::vector<ShoalingPoint> curve_;
};

/// max_t zeta at the gauge.
double runup_max(const GaugeSeries& gauge);

/// Local maxima of zeta above fraction*max(zeta) on a dense sample of [lo, hi].
int count_crests(const SplineSpace& space, std::span<const double> zc, double fraction,
                 std::optional<std::pair<double, double>> window = std::nullopt, int samples = 20001);

/// max_x |f - g| over a dense sample of two splines on the same space.
double max_difference(const SplineSpace& space, std::span<const double> f, std::span<const double> g,
                      int samples = 20001);

struct ReferenceComparison {
    double amplitude_ratio = 0.0;  ///< max model / max reference over the overlap
    double l2_deviation = 0.0;     ///< RMS difference over the overlap, no shift
    double best_shift = 0.0;       ///< time shift s minimising RMS of model(t) - ref(t - s)
    double shifted_l2_deviation = 0.0;
    double overlap_start = 0.0;
    double overlap_end = 0.0;
};

/// Compares two time series on the model's sample times inside the common
/// range, interpolating the reference linearly. max_shift bounds the search.
ReferenceComparison compare_series(std::span<const double> t_model, std::span<const double> z_model,
                                   std::span<const double> t_ref, std::span<const double> z_ref,
                                   double max_shift = 0.0);

}  // namespace vbwave
