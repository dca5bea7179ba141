#pragma once

// Galerkin forms on spline spaces: Gram and weighted H^1 matrices, load
// vectors, L^2 and elliptic projections, and the coercivity report of the
// CBs mass form
//   A(v, w) = ((eta_b - mu/2 eta_b^2 eta_b'') v, w) + mu/3 (eta_b^3 v', w').

#include <functional>
#include <span>
#include <vector>

#include "vbwave/banded_matrix.hpp"
#include "vbwave/bathymetry.hpp"
#include "vbwave/spline_space.hpp"

namespace vbwave {

using ScalarFunction = std::function<double(double)>;

inline constexpr int kAssemblyPoints = 3;
inline constexpr int kNormPoints = 5;

/// B(v, w) = (m v, w) + (s v', w') with pointwise weights m and s.
/// An empty weight function means "identically zero" for s and "one" for m.
struct SymmetricForm {
    ScalarFunction mass_weight;
    ScalarFunction stiffness_weight;
};

/// a(v, w) = (v, w) + mu/3 (v', w').
SymmetricForm h1_form(double mu);
/// The CBs form A(v, w) for the given bottom.
SymmetricForm a_form(const Bathymetry& bathy, double mu);

struct CoercivityReport {
    double c1 = 0.0;        ///< min eta_b
    double c2 = 0.0;        ///< min (eta_b - mu/2 eta_b^2 eta_b'')
    double c_mu = 0.0;      ///< min(c2, mu c1^3 / 3)
    double argmin_c1 = 0.0;
    double argmin_c2 = 0.0;
    bool satisfied = false; ///< c1 > 0 and c2 > 0
};

/// Minima over 2001 uniform samples plus breakpoints (both one-sided limits)
/// and, when given, the nodes of `partition`.
CoercivityReport coercivity_check(const Bathymetry& bathy, double mu, const Partition* partition = nullptr);

/// M_ij = int w phi_i phi_j (w = 1 when empty).
BandedMatrix gram_matrix(const SplineSpace& space, const ScalarFunction& weight = {},
                         int points = kAssemblyPoints);

/// Matrix of a symmetric form on the basis of `space`.
BandedMatrix form_matrix(const SplineSpace& space, const SymmetricForm& form, int points = kAssemblyPoints);

/// Matrix of A on `space`; throws CoercivityError when the report is not
/// satisfied. With `allow_shoreline`, a depth that vanishes only at a domain
/// endpoint is accepted provided every other sample is positive.
BandedMatrix weighted_mass_A(const SplineSpace& space, const Bathymetry& bathy, double mu,
                             bool allow_shoreline = false, int points = kAssemblyPoints);

/// F_i = int g phi_i.
std::vector<double> assemble_load(const SplineSpace& space, const ScalarFunction& g, int points = kAssemblyPoints);

/// F_i = B(v, phi_i) computed from v and v' at quadrature points.
std::vector<double> form_load(const SplineSpace& space, const SymmetricForm& form, const ScalarFunction& v,
                              const ScalarFunction& dv, int points = kAssemblyPoints);

/// L^2 projection onto `space`.
std::vector<double> l2_project(const SplineSpace& space, const ScalarFunction& f, int points = kAssemblyPoints);

/// Galerkin projection with respect to `form`: B(R v, chi) = B(v, chi) for all chi in `space`.
std::vector<double> elliptic_project(const SplineSpace& space, const SymmetricForm& form, const ScalarFunction& v,
                                     const ScalarFunction& dv, int points = kAssemblyPoints);

}  // namespace vbwave
