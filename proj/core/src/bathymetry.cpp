#include "vbwave/bathymetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vbwave/error.hpp"

namespace vbwave {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Half-sine bridge from 0 to 1 over [c - w/2, c + w/2].
double bridge(double x, double c, double w, int deriv) {
    const double lo = c - 0.5 * w;
    const double hi = c + 0.5 * w;
    if (x < lo) {
        return 0.0;
    }
    if (x >= hi) {
        return deriv == 0 ? 1.0 : 0.0;
    }
    const double k = std::numbers::pi / w;
    const double s = k * (x - c);
    switch (deriv) {
        case 0: return 0.5 * (1.0 + std::sin(s));
        case 1: return 0.5 * k * std::cos(s);
        default: return -0.5 * k * k * std::sin(s);
    }
}

// Depth of a piecewise-linear profile: 1 before x0, slope down to `floor`.
double ramp_depth(double x, double x0, double slope, double floor, int deriv) {
    if (x < x0) {
        return deriv == 0 ? 1.0 : 0.0;
    }
    const double d = 1.0 - slope * (x - x0);
    if (d <= floor) {
        return deriv == 0 ? floor : 0.0;
    }
    switch (deriv) {
        case 0: return d;
        case 1: return -slope;
        default: return 0.0;
    }
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw InvalidArgument(what);
    }
}

}  // namespace

Bathymetry::Bathymetry(ProfileSpec spec, double a, double b) : spec_(std::move(spec)), a_(a), b_(b) {}

Bathymetry Bathymetry::make(const ProfileSpec& spec, double a, double b) {
    require(b > a, "bathymetry: need a < b");
    Bathymetry out(spec, a, b);
    std::vector<double> bp;
    std::visit(Overloaded{
                   [&](const FlatBottom&) {},
                   [&](const UniformSlope& s) { require(s.alpha > 0.0, "UniformSlope: alpha must be positive"); },
                   [&](const ShelfRamp& s) {
                       require(s.alpha > 0.0, "ShelfRamp: alpha must be positive");
                       require(s.h1 > 0.0 && s.h1 < 1.0, "ShelfRamp: shelf depth must be in (0, 1)");
                       bp = {s.x_b, s.x_b + (1.0 - s.h1) / s.alpha};
                   },
                   [&](const SineShelf& s) {
                       require(s.width > 0.0, "SineShelf: bridge width must be positive");
                       out.beta_ = s.beta;
                       bp = {s.center - 0.5 * s.width, s.center + 0.5 * s.width};
                   },
                   [&](const BeachWall& s) {
                       require(s.slope > 0.0, "BeachWall: slope must be positive");
                       bp = {s.x_b};
                   },
                   [&](const SineBottom& s) { out.beta_ = s.beta; },
                   [&](const Hump& s) {
                       require(s.width > 0.0 && s.right - s.left >= s.width, "Hump: bridges overlap");
                       out.beta_ = s.beta;
                       bp = {s.left - 0.5 * s.width, s.left + 0.5 * s.width, s.right - 0.5 * s.width,
                             s.right + 0.5 * s.width};
                   },
                   [&](const DepressionStep& s) {
                       require(s.width > 0.0, "DepressionStep: bridge width must be positive");
                       out.beta_ = s.beta;
                       bp = {s.center - 0.5 * s.width, s.center + 0.5 * s.width};
                   },
               },
               spec);
    for (double x : bp) {
        if (x > a && x < b) {
            out.breakpoints_.push_back(x);
        }
    }

    // Depth must be positive inside the domain; zero is allowed only at an
    // endpoint (shoreline of a uniform slope).
    constexpr int kSamples = 2001;
    std::vector<double> xs;
    xs.reserve(kSamples + out.breakpoints_.size());
    for (int i = 0; i < kSamples; ++i) {
        xs.push_back(a + (b - a) * i / (kSamples - 1));
    }
    xs.insert(xs.end(), out.breakpoints_.begin(), out.breakpoints_.end());
    for (double x : xs) {
        const double d = out.depth(x);
        const bool endpoint = (x == a || x == b);
        if (d < 0.0 || (d == 0.0 && !endpoint)) {
            throw InvalidArgument("bathymetry: undisturbed depth eta_b = " + std::to_string(d) +
                                  " <= 0 at x = " + std::to_string(x));
        }
    }
    return out;
}

std::string Bathymetry::name() const {
    return std::visit(Overloaded{
                          [](const FlatBottom&) { return std::string("flat"); },
                          [](const UniformSlope&) { return std::string("uniform_slope"); },
                          [](const ShelfRamp&) { return std::string("shelf_ramp"); },
                          [](const SineShelf&) { return std::string("sine_shelf"); },
                          [](const BeachWall&) { return std::string("beach_wall"); },
                          [](const SineBottom&) { return std::string("sine_bottom"); },
                          [](const Hump&) { return std::string("hump"); },
                          [](const DepressionStep&) { return std::string("depression_step"); },
                      },
                      spec_);
}

double Bathymetry::bottom(double x, int deriv) const {
    if (deriv < 0 || deriv > 2) {
        throw InvalidArgument("bathymetry: derivative order must be 0, 1 or 2");
    }
    return std::visit(
        Overloaded{
            [&](const FlatBottom&) { return 0.0; },
            [&](const UniformSlope& s) {
                switch (deriv) {
                    case 0: return 1.0 - s.alpha * x;
                    case 1: return -s.alpha;
                    default: return 0.0;
                }
            },
            [&](const ShelfRamp& s) {
                const double d = ramp_depth(x, s.x_b, s.alpha, s.h1, deriv);
                return deriv == 0 ? 1.0 - d : -d;
            },
            [&](const SineShelf& s) { return bridge(x, s.center, s.width, deriv); },
            [&](const BeachWall& s) {
                const double d = ramp_depth(x, s.x_b, s.slope, -1e300, deriv);
                return deriv == 0 ? 1.0 - d : -d;
            },
            [&](const SineBottom& s) {
                const double k = s.wavenumber;
                switch (deriv) {
                    case 0: return std::sin(k * x);
                    case 1: return k * std::cos(k * x);
                    default: return -k * k * std::sin(k * x);
                }
            },
            [&](const Hump& s) { return bridge(x, s.left, s.width, deriv) - bridge(x, s.right, s.width, deriv); },
            [&](const DepressionStep& s) { return -bridge(x, s.center, s.width, deriv); },
        },
        spec_);
}

double Bathymetry::depth(double x, int deriv) const {
    const double bx = bottom(x, deriv);
    return (deriv == 0 ? 1.0 : 0.0) - beta_ * bx;
}

bool Bathymetry::flat_near_left(double width) const {
    constexpr int kSamples = 101;
    const double d0 = depth(a_);
    for (int i = 0; i <= kSamples; ++i) {
        const double x = a_ + width * i / kSamples;
        if (std::abs(depth(x) - d0) > 1e-14 || depth(x, 1) != 0.0) {
            return false;
        }
    }
    return true;
}

bool Bathymetry::flat_near_right(double width) const {
    constexpr int kSamples = 101;
    const double d0 = depth(b_);
    for (int i = 0; i <= kSamples; ++i) {
        const double x = b_ - width * i / kSamples;
        if (std::abs(depth(x) - d0) > 1e-14 || depth(x, 1) != 0.0) {
            return false;
        }
    }
    return true;
}

}  // namespace vbwave
