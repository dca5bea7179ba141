#include "vbwave/spline_space.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "vbwave/error.hpp"

namespace vbwave {

QuadratureRule gauss_rule(int n) {
    if (n < 1 || n > 10) {
        throw InvalidArgument("gauss_rule: unsupported point count " + std::to_string(n));
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // map [-1,1] -> [0,1], ascending order
        rule.nodes[i] = 0.5 * (1.0 - z);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.5;
    }
    return rule;
}

Partition::Partition(double a, double b, int elements) : a_(a), b_(b), n_(elements) {
    if (!(b > a)) {
        throw InvalidArgument("Partition: need a < b");
    }
    if (elements < 2) {
        throw InvalidArgument("Partition: need at least 2 elements, got " + std::to_string(elements));
    }
    h_ = (b - a) / elements;
}

bool Partition::contains(double x) const noexcept {
    const double tol = 1e-12 * (b_ - a_);
    return x >= a_ - tol && x <= b_ + tol;
}

int Partition::element_of(double x) const {
    if (!contains(x)) {
        throw InvalidArgument("point " + std::to_string(x) + " outside [" + std::to_string(a_) + ", " +
                              std::to_string(b_) + "]");
    }
    const auto e = static_cast<int>(std::floor((x - a_) / h_));
    if (e < 0) {
        return 0;
    }
    return e >= n_ ? n_ - 1 : e;
}

SplineSpace::SplineSpace(Partition partition, int order, int smoothness, EndpointCondition bc)
    : partition_(partition), order_(order), smoothness_(smoothness), bc_(bc) {
    if (order < 2 || order > kMaxOrder) {
        throw InvalidArgument("SplineSpace: order r must be in [2, " + std::to_string(kMaxOrder) + "]");
    }
    if (smoothness < 0 || smoothness > order - 2) {
        throw InvalidArgument("SplineSpace: smoothness k must satisfy 0 <= k <= r-2");
    }
    const int p = order - 1;
    const int n = partition.elements();
    full_dim_ = n * (p - smoothness) + smoothness + 1;
    if (bc == EndpointCondition::ZeroEndpoints && full_dim_ < 3) {
        throw InvalidArgument("SplineSpace: mesh too coarse for a space with zero endpoints");
    }
    knots_.reserve(static_cast<std::size_t>(full_dim_ + p + 1));
    for (int i = 0; i <= p; ++i) {
        knots_.push_back(partition.a());
    }
    for (int i = 1; i < n; ++i) {
        for (int m = 0; m < p - smoothness; ++m) {
            knots_.push_back(partition.node(i));
        }
    }
    for (int i = 0; i <= p; ++i) {
        knots_.push_back(partition.b());
    }
}

SplineSpace SplineSpace::cubic(Partition partition, EndpointCondition bc) {
    return SplineSpace(partition, 4, 2, bc);
}

int SplineSpace::space_index(int full_index) const noexcept {
    if (bc_ == EndpointCondition::Free) {
        return full_index;
    }
    if (full_index <= 0 || full_index >= full_dim_ - 1) {
        return -1;
    }
    return full_index - 1;
}

void SplineSpace::local_basis(int element, double x, int nderiv, std::span<double> out) const {
    const int p = degree();
    const int span = p + element * (p - smoothness_);
    const int nd = nderiv < p ? nderiv : p;
    constexpr int M = kMaxOrder;
    std::array<std::array<double, M>, M> ndu{};
    std::array<double, M> left{};
    std::array<double, M> right{};
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - knots_[span + 1 - j];
        right[j] = knots_[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    const int stride = p + 1;
    for (int j = 0; j <= p; ++j) {
        out[j] = ndu[j][p];
    }
    std::array<std::array<double, M>, 2> a{};
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= nd; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            out[k * stride + r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= nd; ++k) {
        for (int j = 0; j <= p; ++j) {
            out[k * stride + j] *= factor;
        }
        factor *= (p - k);
    }
    for (int k = nd + 1; k <= nderiv; ++k) {
        for (int j = 0; j <= p; ++j) {
            out[k * stride + j] = 0.0;
        }
    }
}

double SplineSpace::evaluate(std::span<const double> coeffs, double x, int deriv) const {
    if (deriv < 0 || deriv > 2) {
        throw InvalidArgument("SplineSpace::evaluate: derivative order must be 0, 1 or 2");
    }
    if (static_cast<int>(coeffs.size()) != dim()) {
        throw InvalidArgument("SplineSpace::evaluate: coefficient vector has wrong length");
    }
    const int e = partition_.element_of(x);
    const double xc = x < partition_.a() ? partition_.a() : (x > partition_.b() ? partition_.b() : x);
    std::array<double, 3 * kMaxOrder> buf{};
    local_basis(e, xc, deriv, buf);
    const int first = first_function(e);
    double sum = 0.0;
    for (int j = 0; j < order_; ++j) {
        const int s = space_index(first + j);
        if (s >= 0) {
            sum += coeffs[s] * buf[deriv * order_ + j];
        }
    }
    return sum;
}

std::vector<double> SplineSpace::basis_integrals() const {
    // A clamped B-spline of degree p on knots t_i..t_{i+p+1} integrates to
    // (t_{i+p+1} - t_i)/(p+1).
    const int p = degree();
    std::vector<double> out(static_cast<std::size_t>(dim()));
    for (int i = 0; i < full_dim_; ++i) {
        const int s = space_index(i);
        if (s >= 0) {
            out[s] = (knots_[i + p + 1] - knots_[i]) / (p + 1);
        }
    }
    return out;
}

QuadratureTable::QuadratureTable(const SplineSpace& space, const QuadratureRule& rule)
    : elements_(space.partition().elements()), points_(rule.size()), local_(space.local_count()) {
    const auto& part = space.partition();
    const auto total = static_cast<std::size_t>(elements_) * points_;
    x_.resize(total);
    w_.resize(total);
    phi_.resize(total * 3 * local_);
    for (int e = 0; e < elements_; ++e) {
        const double x0 = part.node(e);
        const double x1 = part.node(e + 1);
        for (int q = 0; q < points_; ++q) {
            const std::size_t idx = static_cast<std::size_t>(e) * points_ + q;
            const double x = x0 + rule.nodes[q] * (x1 - x0);
            x_[idx] = x;
            w_[idx] = rule.weights[q] * (x1 - x0);
            space.local_basis(e, x, 2, std::span<double>(phi_.data() + idx * 3 * local_, 3 * local_));
        }
    }
}

std::vector<double> values_at_points(const SplineSpace& space, const QuadratureTable& table,
                                     std::span<const double> coeffs, int deriv) {
    std::vector<double> out(static_cast<std::size_t>(table.elements()) * table.points());
    const int local = table.local_count();
    for (int e = 0; e < table.elements(); ++e) {
        const int first = space.first_function(e);
        for (int q = 0; q < table.points(); ++q) {
            const auto phi = table.phi(e, q, deriv);
            double v = 0.0;
            for (int j = 0; j < local; ++j) {
                const int s = space.space_index(first + j);
                if (s >= 0) {
                    v += coeffs[s] * phi[j];
                }
            }
            out[static_cast<std::size_t>(e) * table.points() + q] = v;
        }
    }
    return out;
}

}  // namespace vbwave
