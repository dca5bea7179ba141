#pragma once

// Closed-form bottom profiles. The undisturbed depth is eta_b = 1 - beta*b(x).
// Profiles defined directly through their depth (slopes, ramps, walls) use
// beta = 1 and b = 1 - eta_b, so eta_b' = -beta*b' holds for every kind.

#include <string>
#include <variant>
#include <vector>

namespace vbwave {

struct FlatBottom {};

/// eta_b = alpha*x (shoreline at x = 0).
struct UniformSlope {
    double alpha;
};

/// Depth 1 up to x_b, linear ramp of slope alpha up to the shelf depth h1.
struct ShelfRamp {
    double x_b;
    double alpha;
    double h1;
};

/// b bridges 0 and 1 by a half sine over [center - width/2, center + width/2];
/// with width 3 this is the C^1 shelf profile of the steepness experiments.
struct SineShelf {
    double center;
    double beta;
    double width = 3.0;
};

/// Depth 1 up to x_b, then eta_b = 1 - slope*(x - x_b) up to the end of the domain.
struct BeachWall {
    double x_b;
    double slope;
};

/// b = sin(wavenumber*x); eta_b = 1 - beta*sin(wavenumber*x).
struct SineBottom {
    double beta;
    double wavenumber;
};

/// Plateau b = 1 between two sine bridges centred at `left` and `right`.
struct Hump {
    double left;
    double right;
    double width;
    double beta;
};

/// Step into deeper water: b bridges 0 to -1 around `center`.
struct DepressionStep {
    double center;
    double width;
    double beta;
};

using ProfileSpec =
    std::variant<FlatBottom, UniformSlope, ShelfRamp, SineShelf, BeachWall, SineBottom, Hump, DepressionStep>;

class Bathymetry {
public:
    /// Validated profile on [a, b]. Rejects eta_b <= 0 inside the domain; a
    /// zero depth is accepted only at a domain endpoint (a shoreline).
    static Bathymetry make(const ProfileSpec& spec, double a, double b);
    static Bathymetry flat(double a, double b) { return make(FlatBottom{}, a, b); }

    [[nodiscard]] const ProfileSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::string name() const;
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] bool is_flat() const noexcept { return std::holds_alternative<FlatBottom>(spec_); }

    /// d-th derivative (0, 1, 2) of b; right limit at breakpoints.
    [[nodiscard]] double bottom(double x, int deriv = 0) const;
    /// d-th derivative of eta_b = 1 - beta*b.
    [[nodiscard]] double depth(double x, int deriv = 0) const;

    /// Locations where the piecewise definition changes, inside [a, b].
    [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

    /// True when eta_b is constant on the `width` nearest the given endpoint.
    [[nodiscard]] bool flat_near_left(double width) const;
    [[nodiscard]] bool flat_near_right(double width) const;

private:
    Bathymetry(ProfileSpec spec, double a, double b);

    ProfileSpec spec_;
    double a_;
    double b_;
    double beta_ = 1.0;
    std::vector<double> breakpoints_;
};

}  // namespace vbwave
