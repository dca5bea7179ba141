#pragma once

// Uniform partitions, clamped B-spline finite element spaces and Gauss rules.

#include <span>
#include <vector>

namespace vbwave {

/// Gauss-Legendre rule mapped to the reference element [0, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Legendre rule on [0, 1], n in 1..10. Exact through degree 2n-1.
QuadratureRule gauss_rule(int n);

/// Uniform partition of [a, b] into N elements.
class Partition {
public:
    Partition(double a, double b, int elements);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] int elements() const noexcept { return n_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double length() const noexcept { return b_ - a_; }

    /// x_i = a + i*h, with x_N returned as b exactly.
    [[nodiscard]] double node(int i) const noexcept { return i == n_ ? b_ : a_ + i * h_; }

    /// Element containing x under the half-open convention [x_i, x_{i+1});
    /// the last element is closed. Throws for x outside [a, b].
    [[nodiscard]] int element_of(double x) const;

    [[nodiscard]] bool contains(double x) const noexcept;

private:
    double a_;
    double b_;
    int n_;
    double h_;
};

enum class EndpointCondition { Free, ZeroEndpoints };

/// C^k piecewise polynomials of degree r-1 on a uniform partition, with a
/// clamped B-spline basis. Only the first (last) basis function is nonzero at
/// a (b), so ZeroEndpoints is the Free space with those two functions removed.
///
/// Coefficient vectors are indexed by "space index" 0..dim()-1. The underlying
/// clamped basis uses "full index" 0..full_dim()-1; for ZeroEndpoints,
/// space index = full index - 1.
class SplineSpace {
public:
    static constexpr int kMaxOrder = 8;

    SplineSpace(Partition partition, int order, int smoothness, EndpointCondition bc);

    /// Cubic C^2 splines, the default space of the solvers.
    static SplineSpace cubic(Partition partition, EndpointCondition bc = EndpointCondition::Free);

    [[nodiscard]] const Partition& partition() const noexcept { return partition_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] int degree() const noexcept { return order_ - 1; }
    [[nodiscard]] int smoothness() const noexcept { return smoothness_; }
    [[nodiscard]] EndpointCondition endpoint_condition() const noexcept { return bc_; }
    [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }

    [[nodiscard]] int full_dim() const noexcept { return full_dim_; }
    [[nodiscard]] int dim() const noexcept {
        return bc_ == EndpointCondition::Free ? full_dim_ : full_dim_ - 2;
    }
    /// Number of basis functions nonzero on one element.
    [[nodiscard]] int local_count() const noexcept { return order_; }

    /// Full index of the first basis function supported on `element`.
    [[nodiscard]] int first_function(int element) const noexcept {
        return element * (degree() - smoothness_);
    }
    /// Space index for a full index, or -1 when the function was dropped.
    [[nodiscard]] int space_index(int full_index) const noexcept;
    [[nodiscard]] int full_index(int space_index) const noexcept {
        return bc_ == EndpointCondition::Free ? space_index : space_index + 1;
    }

    /// Values and derivatives (0..nderiv) of the local_count() functions that
    /// are nonzero on `element`, at x. Row d of `out` (stride local_count())
    /// holds the d-th derivatives. Derivatives above the degree are zero.
    void local_basis(int element, double x, int nderiv, std::span<double> out) const;

    /// sum_i c_i phi_i^(deriv)(x) for deriv in {0, 1, 2}.
    [[nodiscard]] double evaluate(std::span<const double> coeffs, double x, int deriv = 0) const;

    /// Exact integrals of each basis function (space indexing).
    [[nodiscard]] std::vector<double> basis_integrals() const;

    [[nodiscard]] SplineSpace with_endpoint_condition(EndpointCondition bc) const {
        return SplineSpace(partition_, order_, smoothness_, bc);
    }

private:
    Partition partition_;
    int order_;
    int smoothness_;
    EndpointCondition bc_;
    int full_dim_;
    std::vector<double> knots_;
};

/// Basis values/derivatives at the quadrature points of every element.
class QuadratureTable {
public:
    QuadratureTable(const SplineSpace& space, const QuadratureRule& rule);

    [[nodiscard]] int elements() const noexcept { return elements_; }
    [[nodiscard]] int points() const noexcept { return points_; }
    [[nodiscard]] int local_count() const noexcept { return local_; }

    [[nodiscard]] double x(int e, int q) const noexcept { return x_[e * points_ + q]; }
    /// Physical weight (reference weight times h).
    [[nodiscard]] double weight(int e, int q) const noexcept { return w_[e * points_ + q]; }
    /// d-th derivatives (d <= 2) of the local basis functions at point (e, q).
    [[nodiscard]] std::span<const double> phi(int e, int q, int d) const noexcept {
        return {phi_.data() + ((static_cast<std::size_t>(e) * points_ + q) * 3 + d) * local_, static_cast<std::size_t>(local_)};
    }

private:
    int elements_;
    int points_;
    int local_;
    std::vector<double> x_;
    std::vector<double> w_;
    std::vector<double> phi_;
};

/// Values of the spline with space coefficients `coeffs` (or its d-th
/// derivative) at every point of the table, in (element, point) order.
std::vector<double> values_at_points(const SplineSpace& space, const QuadratureTable& table,
                                     std::span<const double> coeffs, int deriv);

}  // namespace vbwave
