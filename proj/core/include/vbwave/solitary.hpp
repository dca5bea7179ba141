#pragma once

// Solitary waves of the flat-bottom classical Boussinesq system.
// u_s solves (c mu/3) u'' + (eps/2) u^2 - c u + u/(c - eps u) = 0 and
// zeta_s = u_s / (c - eps u_s). The profile is computed by Newton's method on
// a Fourier collocation grid over a periodic box [-L, L) wide enough for the
// exponential tails to vanish to roundoff.

#include <functional>
#include <string>
#include <vector>

namespace vbwave {

/// c_s(A) = sqrt6 (1+eA)/sqrt(3+2eA) * sqrt((1+eA) ln(1+eA) - eA) / (eA), e = eps.
double speed_from_amplitude(double epsilon, double amplitude);
/// Inverse of speed_from_amplitude for c_s > 1.
double amplitude_from_speed(double epsilon, double speed);
/// Crest value of u_s: B = A c_s / (1 + eps A).
double u_amplitude(double epsilon, double amplitude, double speed);
/// Residual of the crest relation (u_s' = 0 in the first integral) at u = B:
/// (eps/6) B^3 - (c/2) B^2 - B/eps - (c/eps^2) ln((c - eps B)/c).
double crest_relation_residual(double epsilon, double speed, double b);
/// Exponential decay rate of the tails, sqrt(3 (c - 1/c) / (c mu)).
double tail_decay_rate(double mu, double speed);

struct SolitaryOptions {
    double half_length = 0.0;  ///< 0: 40 / tail_decay_rate
    int points = 1024;         ///< collocation points (even)
    double tolerance = 1e-13;  ///< Newton stop on max |residual| relative to B
    int max_iterations = 40;
};

struct SolitaryWave {
    double epsilon = 0.0;
    double mu = 0.0;
    double speed = 0.0;
    double amplitude = 0.0;     ///< max zeta_s
    double u_amplitude = 0.0;   ///< max u_s
    double half_length = 0.0;
    std::vector<double> xi;     ///< collocation points, -L + 2L j / n
    std::vector<double> u_grid; ///< u_s at xi
    int newton_iterations = 0;
    double ode_residual = 0.0;  ///< max |ODE residual| at the collocation points
    double first_integral_residual = 0.0;

    /// Trigonometric interpolant of u_s (and derivative); zero outside [-L, L].
    [[nodiscard]] double u(double x, int deriv = 0) const;
    [[nodiscard]] double zeta(double x) const;
    [[nodiscard]] double zeta_derivative(double x) const;
    /// max_j |u_s(xi_j) - u_s(-xi_j)|.
    [[nodiscard]] double asymmetry() const;

    // Half-spectrum coefficients of the interpolant.
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;
};

SolitaryWave solve_profile(double epsilon, double mu, double speed, const SolitaryOptions& options = {});

/// Pointwise first-integral residual
/// (c mu/6)(u')^2 + (eps/6) u^3 - (c/2) u^2 - u/eps - (c/eps^2) ln((c - eps u)/c).
double first_integral(double epsilon, double mu, double speed, double u, double du);

/// KdV-type initial pulse zeta0 = a0 sech^2(sqrt(3 |a0|)/2 (x - x0)) with a
/// matching velocity. A negative a0 gives a wave of depression.
struct KdvPulse {
    enum class Geometry { Slope, FlatDepth, Rest };
    double a0 = 0.1;
    double x0 = 0.0;
    Geometry geometry = Geometry::FlatDepth;
    double alpha = 0.0;  ///< beach slope for Geometry::Slope

    [[nodiscard]] double zeta(double x) const;
    /// Slope: -(1 + a0/2) zeta0 / (alpha x + zeta0) (moving toward the shoreline);
    /// FlatDepth: (1 + a0/2) zeta0 / (1 + zeta0) (moving right); Rest: 0.
    [[nodiscard]] double u(double x) const;
};

/// CSV with columns xi,u,zeta.
void write_profile_csv(const SolitaryWave& wave, const std::string& path);

}  // namespace vbwave
