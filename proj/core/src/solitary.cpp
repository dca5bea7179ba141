#include "vbwave/solitary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "vbwave/error.hpp"
#include "vbwave/io.hpp"

namespace vbwave {
namespace {

constexpr double kPi = std::numbers::pi;

// (1+z) ln(1+z) - z, accurate for small z.
double xlogx_excess(double z) {
    if (std::abs(z) < 0.1) {
        double s = 0.0;
        double zk = z * z;
        for (int k = 2; k < 40; ++k) {
            s += ((k % 2 == 0) ? 1.0 : -1.0) * zk / (k * (k - 1.0));
            zk *= z;
        }
        return s;
    }
    return (1.0 + z) * std::log1p(z) - z;
}

// -z - ln(1 - z) = sum_{k>=2} z^k / k.
double log_excess(double z) {
    if (std::abs(z) < 0.1) {
        double s = 0.0;
        double zk = z * z;
        for (int k = 2; k < 40; ++k) {
            s += zk / k;
            zk *= z;
        }
        return s;
    }
    return -z - std::log1p(-z);
}

}  // namespace

double speed_from_amplitude(double epsilon, double amplitude) {
    const double z = epsilon * amplitude;
    if (!(z > 0.0)) {
        throw InvalidArgument("speed_from_amplitude: eps*A must be positive");
    }
    return std::sqrt(6.0) * (1.0 + z) / std::sqrt(3.0 + 2.0 * z) * std::sqrt(xlogx_excess(z)) / z;
}

double amplitude_from_speed(double epsilon, double speed) {
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("amplitude_from_speed: eps must be positive");
    }
    if (!(speed > 1.0)) {
        throw InvalidArgument("amplitude_from_speed: no solitary wave for c_s <= 1");
    }
    // Work in z = eps A; c(z) is increasing with c(0+) = 1.
    double lo = 0.0;
    double hi = 1.0;
    while (speed_from_amplitude(1.0, hi) < speed) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) {
            throw InvalidArgument("amplitude_from_speed: speed out of range");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (speed_from_amplitude(1.0, mid) < speed) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double z = (lo == 0.0) ? hi : 0.5 * (lo + hi);
    return z / epsilon;
}

double u_amplitude(double epsilon, double amplitude, double speed) {
    return amplitude * speed / (1.0 + epsilon * amplitude);
}

double crest_relation_residual(double epsilon, double speed, double b) {
    return epsilon / 6.0 * b * b * b - 0.5 * speed * b * b + speed / (epsilon * epsilon) * log_excess(epsilon * b / speed);
}

double tail_decay_rate(double mu, double speed) {
    return std::sqrt(3.0 * (speed - 1.0 / speed) / (speed * mu));
}

double first_integral(double epsilon, double mu, double speed, double u, double du) {
    return speed * mu / 6.0 * du * du + epsilon / 6.0 * u * u * u - 0.5 * speed * u * u +
           speed / (epsilon * epsilon) * log_excess(epsilon * u / speed);
}

double SolitaryWave::u(double x, int deriv) const {
    if (x < -half_length || x > half_length) {
        return 0.0;
    }
    const double omega = kPi / half_length;
    const double theta = omega * (x + half_length);
    const std::complex<double> step(std::cos(theta), std::sin(theta));
    std::complex<double> e(1.0, 0.0);
    double s = deriv == 0 ? 0.5 * cos_coef[0] : 0.0;
    const int m = static_cast<int>(cos_coef.size()) - 1;  // Nyquist index
    for (int k = 1; k <= m; ++k) {
        e *= step;
        if (k % 64 == 0) {
            e = std::polar(1.0, k * theta);
        }
        const double wk = k * omega;
        if (k == m) {
            if (deriv == 0) {
                s += 0.5 * cos_coef[k] * e.real();
            }
            break;
        }
        if (deriv == 0) {
            s += cos_coef[k] * e.real() + sin_coef[k] * e.imag();
        } else if (deriv == 1) {
            s += wk * (-cos_coef[k] * e.imag() + sin_coef[k] * e.real());
        } else {
            s -= wk * wk * (cos_coef[k] * e.real() + sin_coef[k] * e.imag());
        }
    }
    return s;
}

double SolitaryWave::zeta(double x) const {
    const double us = u(x);
    return us / (speed - epsilon * us);
}

double SolitaryWave::zeta_derivative(double x) const {
    const double us = u(x);
    const double d = speed - epsilon * us;
    return speed * u(x, 1) / (d * d);
}

double SolitaryWave::asymmetry() const {
    const int n = static_cast<int>(u_grid.size());
    double a = 0.0;
    for (int j = 1; j < n; ++j) {
        a = std::max(a, std::abs(u_grid[j] - u_grid[n - j]));
    }
    return a;
}

SolitaryWave solve_profile(double epsilon, double mu, double speed, const SolitaryOptions& options) {
    if (!(epsilon > 0.0) || !(mu > 0.0)) {
        throw InvalidArgument("solve_profile: eps and mu must be positive");
    }
    if (!(speed > 1.0)) {
        throw InvalidArgument("solve_profile: no solitary wave for c_s <= 1");
    }
    const int n = options.points;
    if (n < 16 || n % 2 != 0) {
        throw InvalidArgument("solve_profile: collocation count must be even and >= 16");
    }
    const double kappa = tail_decay_rate(mu, speed);
    const double L = options.half_length > 0.0 ? options.half_length : 40.0 / kappa;
    const double c = speed;

    // Fourier differentiation matrices on the 2L-periodic grid.
    const double dth = 2.0 * kPi / n;
    const double scale = kPi / L;
    Eigen::MatrixXd d1(n, n);
    Eigen::MatrixXd d2(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                d1(i, j) = 0.0;
                d2(i, j) = (-kPi * kPi / (3.0 * dth * dth) - 1.0 / 6.0) * scale * scale;
                continue;
            }
            const int k = i - j;
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            const double half = 0.5 * k * dth;
            d1(i, j) = 0.5 * sgn / std::tan(half) * scale;
            d2(i, j) = -0.5 * sgn / (std::sin(half) * std::sin(half)) * scale * scale;
        }
    }

    Eigen::VectorXd xi(n);
    for (int j = 0; j < n; ++j) {
        xi(j) = -L + 2.0 * L * j / n;
    }

    const auto residual = [&](const Eigen::VectorXd& u, double cs) {
        Eigen::VectorXd r = (cs * mu / 3.0) * (d2 * u);
        for (int j = 0; j < n; ++j) {
            r(j) += 0.5 * epsilon * u(j) * u(j) - cs * u(j) + u(j) / (cs - epsilon * u(j));
        }
        return r;
    };

    // Newton on the collocation equations bordered by the phase condition
    // p.u = 0 (p odd), which removes the translation null direction.
    const auto newton = [&](Eigen::VectorXd u, double cs, int& iters) -> std::pair<Eigen::VectorXd, bool> {
        const double bscale = std::max(1.0, u.lpNorm<Eigen::Infinity>());
        const Eigen::VectorXd p = d1 * u;
        const double pn = p.norm();
        double lambda = 0.0;
        Eigen::MatrixXd jac(n + 1, n + 1);
        Eigen::VectorXd rhs(n + 1);
        double prev = std::numeric_limits<double>::infinity();
        for (iters = 1; iters <= options.max_iterations; ++iters) {
            const Eigen::VectorXd r = residual(u, cs) + lambda * p / pn;
            const double rmax = r.lpNorm<Eigen::Infinity>();
            if (rmax < options.tolerance * bscale) {
                return {u, true};
            }
            jac.topLeftCorner(n, n) = (cs * mu / 3.0) * d2;
            for (int j = 0; j < n; ++j) {
                const double d = cs - epsilon * u(j);
                if (!(d > 0.0)) {
                    return {u, false};
                }
                jac(j, j) += epsilon * u(j) - cs + cs / (d * d);
            }
            jac.col(n).head(n) = p / pn;
            jac.row(n).head(n) = p.transpose() / pn;
            jac(n, n) = 0.0;
            rhs.head(n) = -r;
            rhs(n) = -p.dot(u) / pn;
            const Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);
            u += delta.head(n);
            lambda += delta(n);
            const double dmax = delta.head(n).lpNorm<Eigen::Infinity>();
            if (dmax < 1e-14 * bscale && rmax >= 0.5 * prev) {
                return {u, true};  // stagnated at roundoff
            }
            prev = rmax;
        }
        return {u, false};
    };

    const auto guess = [&](double cs, double factor) {
        const double a = amplitude_from_speed(epsilon, cs);
        const double b0 = u_amplitude(epsilon, a, cs) * factor;
        const double k = tail_decay_rate(mu, cs);
        Eigen::VectorXd u(n);
        for (int j = 0; j < n; ++j) {
            const double s = 1.0 / std::cosh(0.5 * k * xi(j));
            u(j) = b0 * s * s;
        }
        return u;
    };
    const auto collapsed = [](const Eigen::VectorXd& u) { return u.maxCoeff() < 1e-8; };

    int iters = 0;
    auto [u, ok] = newton(guess(c, 1.0), c, iters);
    int total_iters = iters;
    if (ok && collapsed(u)) {
        std::tie(u, ok) = newton(guess(c, 1.5), c, iters);
        total_iters += iters;
        ok = ok && !collapsed(u);
    }
    if (!ok) {
        // Continuation in the speed from a small-amplitude wave.
        constexpr int kSteps = 20;
        u = guess(1.0 + (c - 1.0) / kSteps, 1.0);
        ok = true;
        for (int s = 1; s <= kSteps && ok; ++s) {
            std::tie(u, ok) = newton(u, 1.0 + (c - 1.0) * s / kSteps, iters);
            total_iters += iters;
        }
        if (!ok || collapsed(u)) {
            throw NewtonError("solitary profile: Newton iteration did not converge for c_s = " + std::to_string(c));
        }
    }

    SolitaryWave w;
    w.epsilon = epsilon;
    w.mu = mu;
    w.speed = c;
    w.half_length = L;
    w.newton_iterations = total_iters;
    w.xi.assign(xi.data(), xi.data() + n);
    w.u_grid.assign(u.data(), u.data() + n);
    w.ode_residual = residual(u, c).lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd du = d1 * u;
    for (int j = 0; j < n; ++j) {
        w.first_integral_residual =
            std::max(w.first_integral_residual, std::abs(first_integral(epsilon, mu, c, u(j), du(j))));
    }

    // Real DFT coefficients of the interpolant.
    const int m = n / 2;
    w.cos_coef.assign(static_cast<std::size_t>(m) + 1, 0.0);
    w.sin_coef.assign(static_cast<std::size_t>(m) + 1, 0.0);
    for (int k = 0; k <= m; ++k) {
        double a = 0.0;
        double b = 0.0;
        for (int j = 0; j < n; ++j) {
            const double th = dth * static_cast<double>((static_cast<long>(k) * j) % n);
            a += u(j) * std::cos(th);
            b += u(j) * std::sin(th);
        }
        w.cos_coef[k] = 2.0 * a / n;
        w.sin_coef[k] = 2.0 * b / n;
    }

    // Crest: the grid point at xi = 0 is the maximizer by the phase condition;
    // refine with the interpolant in case of a small offset.
    double xc = 0.0;
    double hstep = 2.0 * L / n;
    for (int it = 0; it < 60; ++it) {
        const double d1v = w.u(xc, 1);
        const double d2v = w.u(xc, 2);
        if (d2v >= 0.0) {
            break;
        }
        const double step = -d1v / d2v;
        xc += std::clamp(step, -hstep, hstep);
        if (std::abs(step) < 1e-15 * L) {
            break;
        }
    }
    w.u_amplitude = w.u(xc);
    w.amplitude = w.u_amplitude / (c - epsilon * w.u_amplitude);
    return w;
}

double KdvPulse::zeta(double x) const {
    const double s = 1.0 / std::cosh(0.5 * std::sqrt(3.0 * std::abs(a0)) * (x - x0));
    return a0 * s * s;
}

double KdvPulse::u(double x) const {
    if (geometry == Geometry::Rest) {
        return 0.0;
    }
    const double z = zeta(x);
    if (geometry == Geometry::Slope) {
        const double denom = alpha * x + z;
        return denom > 0.0 ? -(1.0 + 0.5 * a0) * z / denom : 0.0;
    }
    return (1.0 + 0.5 * a0) * z / (1.0 + z);
}

void write_profile_csv(const SolitaryWave& wave, const std::string& path) {
    CsvTable t({"xi", "u", "zeta"});
    for (std::size_t j = 0; j < wave.xi.size(); ++j) {
        const double u = wave.u_grid[j];
        t.add_row({wave.xi[j], u, u / (wave.speed - wave.epsilon * u)});
    }
    t.write(path);
}

}  // namespace vbwave
