#pragma once

// Independent reference implementations used by the tests: Cox-de Boor
// recursion on an explicit knot vector, Golub-Welsch Gauss rules, and a
// dense assembly of the semidiscrete right-hand side solved with Eigen LU.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "vbwave/bathymetry.hpp"
#include "vbwave/models.hpp"

namespace oracle {

/// Clamped knot vector of a C^2 cubic spline space on N uniform elements.
inline std::vector<double> clamped_knots(double a, double b, int n) {
    std::vector<double> t(4, a);
    for (int i = 1; i < n; ++i) t.push_back(a + (b - a) * i / n);
    for (int i = 0; i < 4; ++i) t.push_back(b);
    return t;
}

/// Order-k B-spline i at x by the Cox-de Boor recursion. The last nonempty
/// interval is closed so that x = b is covered.
inline double bspline(const std::vector<double>& t, int i, int k, double x) {
    if (k == 1) {
        const double lo = t[i];
        const double hi = t[i + 1];
        if (lo == hi) return 0.0;
        if (x >= lo && x < hi) return 1.0;
        return (x == hi && hi == t.back()) ? 1.0 : 0.0;
    }
    double v = 0.0;
    const double d1 = t[i + k - 1] - t[i];
    const double d2 = t[i + k] - t[i + 1];
    if (d1 > 0.0) v += (x - t[i]) / d1 * bspline(t, i, k - 1, x);
    if (d2 > 0.0) v += (t[i + k] - x) / d2 * bspline(t, i + 1, k - 1, x);
    return v;
}

/// d-th derivative of the order-k B-spline i.
inline double bspline_d(const std::vector<double>& t, int i, int k, double x, int d) {
    if (d == 0) return bspline(t, i, k, x);
    double v = 0.0;
    const double d1 = t[i + k - 1] - t[i];
    const double d2 = t[i + k] - t[i + 1];
    if (d1 > 0.0) v += (k - 1) / d1 * bspline_d(t, i, k - 1, x, d - 1);
    if (d2 > 0.0) v -= (k - 1) / d2 * bspline_d(t, i + 1, k - 1, x, d - 1);
    return v;
}

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [0, 1] from the Jacobi matrix eigenproblem.
inline Rule gauss(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    for (int i = 0; i < n; ++i) {
        r.x.push_back(0.5 * (es.eigenvalues()(i) + 1.0));
        const double v0 = es.eigenvectors()(0, i);
        r.w.push_back(v0 * v0);  // 2 v0^2 on [-1, 1], halved on [0, 1]
    }
    return r;
}

struct DenseRhs {
    Eigen::VectorXd zt;
    Eigen::VectorXd ut;
};

/// Right-hand side of the Galerkin system assembled densely with `points`
/// Gauss points per element, straight from the weak form:
///   (zeta_t, phi) = ((eta_b + eps zeta) u, phi') - [(eta_b + eps zeta) u phi]_a^b
///   B(u_t, chi)   = (w (-zeta_x - eps u u_x), chi)       chi vanishing at a, b
/// with B the model's u form, w = eta_b for CBs and 1 otherwise; the u
/// endpoint coefficients are the boundary values and their time derivatives.
inline DenseRhs rhs(const vbwave::Bathymetry& bathy, double a, double b, int n, const vbwave::ModelParams& p,
                    const vbwave::BoundarySpec& bc, const std::vector<double>& zc, std::vector<double> uc,
                    int points = 50) {
    using vbwave::BoundaryKind;
    const auto t = clamped_knots(a, b, n);
    const int dim = n + 3;
    const double eps = p.epsilon;
    const double mu = p.kind == vbwave::ModelKind::SW ? 0.0 : p.mu;
    const bool cbs = p.kind == vbwave::ModelKind::CBs;
    const double dl = bathy.depth(a);
    const double dr = bathy.depth(b);
    const auto riemann = [&](double z, double d, bool left) {
        const double v = 2.0 / eps * (std::sqrt(d + eps * z) - std::sqrt(d));
        return left ? -v : v;
    };
    if (bc.left == BoundaryKind::Absorbing) uc[0] = riemann(zc[0], dl, true);
    else uc[0] = 0.0;
    if (bc.right == BoundaryKind::Absorbing) uc[dim - 1] = riemann(zc[dim - 1], dr, false);
    else uc[dim - 1] = 0.0;

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd fz = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd fu = Eigen::VectorXd::Zero(dim);
    const Rule r = gauss(points);
    const double h = (b - a) / n;
    std::vector<double> phi(dim), dphi(dim);
    for (int e = 0; e < n; ++e) {
        for (int q = 0; q < points; ++q) {
            const double x = a + h * (e + r.x[q]);
            const double w = h * r.w[q];
            double z = 0, zx = 0, u = 0, ux = 0;
            for (int i = 0; i < dim; ++i) {
                phi[i] = bspline(t, i, 4, x);
                dphi[i] = bspline_d(t, i, 4, x, 1);
                z += zc[i] * phi[i];
                zx += zc[i] * dphi[i];
                u += uc[i] * phi[i];
                ux += uc[i] * dphi[i];
            }
            const double d = bathy.depth(x);
            const double mw = cbs ? d - 0.5 * mu * d * d * bathy.depth(x, 2) : 1.0;
            const double sw = cbs ? mu / 3.0 * d * d * d : mu / 3.0;
            const double weight = cbs ? d : 1.0;
            for (int i = 0; i < dim; ++i) {
                fz(i) += w * (d + eps * z) * u * dphi[i];
                fu(i) += w * weight * (-zx - eps * u * ux) * phi[i];
                for (int j = 0; j < dim; ++j) {
                    M(i, j) += w * phi[i] * phi[j];
                    B(i, j) += w * (mw * phi[i] * phi[j] + sw * dphi[i] * dphi[j]);
                }
            }
        }
    }
    fz(0) += (dl + eps * zc[0]) * uc[0];
    fz(dim - 1) -= (dr + eps * zc[dim - 1]) * uc[dim - 1];
    DenseRhs out;
    out.zt = M.partialPivLu().solve(fz);

    double ul_t = 0.0, ur_t = 0.0;
    if (bc.left == BoundaryKind::Absorbing) ul_t = -out.zt(0) / std::sqrt(dl + eps * zc[0]);
    if (bc.right == BoundaryKind::Absorbing) ur_t = out.zt(dim - 1) / std::sqrt(dr + eps * zc[dim - 1]);
    const int m = dim - 2;
    Eigen::VectorXd rhs_inner = fu.segment(1, m) - B.block(1, 0, m, 1) * ul_t - B.block(1, dim - 1, m, 1) * ur_t;
    const Eigen::VectorXd inner = B.block(1, 1, m, m).partialPivLu().solve(rhs_inner);
    out.ut.resize(dim);
    out.ut(0) = ul_t;
    out.ut.segment(1, m) = inner;
    out.ut(dim - 1) = ur_t;
    return out;
}

}  // namespace oracle
