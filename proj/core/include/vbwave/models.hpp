#pragma once

// Galerkin semidiscretizations of the variable-bottom Boussinesq family
//
//   zeta_t + ((eta_b + eps zeta) u)_x = f_zeta
//   M[u_t] + w (zeta_x + eps u u_x) = w f_u
//
// with M the identity (SW), I - mu/3 d_xx (CB, CBw) or the eta_b-weighted
// operator of the A form (CBs, w = eta_b).
//
// zeta lives on the full cubic space S_h. u is stored with the same Free
// basis; its two endpoint coefficients are slaved to the boundary condition
// (zero for a reflecting wall, the outgoing Riemann invariant for an
// absorbing end), so only the interior block of the u mass matrix is solved.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vbwave/assembly.hpp"
#include "vbwave/banded_matrix.hpp"
#include "vbwave/bathymetry.hpp"
#include "vbwave/spline_space.hpp"

namespace vbwave {

enum class ModelKind { SW, CB, CBw, CBs };
enum class BoundaryKind { Reflective, Absorbing };
enum class Side { Left, Right };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);
std::string to_string(BoundaryKind kind);
BoundaryKind parse_boundary_kind(const std::string& name);

struct ModelParams {
    ModelKind kind = ModelKind::CB;
    double epsilon = 1.0;
    double mu = 1.0;
};

struct BoundarySpec {
    BoundaryKind left = BoundaryKind::Reflective;
    BoundaryKind right = BoundaryKind::Reflective;
    /// Accept an absorbing end over a non-horizontal bottom; the Riemann
    /// invariant is then built on the local depth at that end.
    bool allow_sloping_absorbing = false;
    /// Accept a dry endpoint (eta_b = 0) at a reflecting end.
    bool allow_shoreline = false;
};

/// Source terms f(x, t); either may be empty.
struct Forcing {
    std::function<double(double, double)> f_zeta;
    std::function<double(double, double)> f_u;
};

struct State {
    double t = 0.0;
    std::vector<double> zc;
    std::vector<double> uc;
};

/// u on an absorbing end from the Riemann invariant with a quiescent far
/// field of depth `depth`: left u = (2/eps)(sqrt(d) - sqrt(d + eps zeta)),
/// right u = (2/eps)(sqrt(d + eps zeta) - sqrt(d)).
double absorbing_bc_value(double epsilon, double zeta, Side side, double depth = 1.0);
/// Time derivative of the above: u_t = -+ zeta_t / sqrt(d + eps zeta).
double absorbing_bc_rate(double epsilon, double zeta, double zeta_t, Side side, double depth = 1.0);

class SemidiscreteSystem {
public:
    SemidiscreteSystem(const Partition& partition, Bathymetry bathy, ModelParams params, BoundarySpec bc = {},
                       std::optional<Forcing> forcing = std::nullopt, int quadrature_points = kAssemblyPoints);

    [[nodiscard]] const SplineSpace& space() const noexcept { return space_; }
    [[nodiscard]] const Bathymetry& bathymetry() const noexcept { return bathy_; }
    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
    [[nodiscard]] const BoundarySpec& boundary() const noexcept { return bc_; }
    [[nodiscard]] int dim() const noexcept { return space_.dim(); }
    [[nodiscard]] State zero_state(double t = 0.0) const;

    /// Overwrites the u endpoint coefficients with the boundary values implied by zc.
    void constrain(State& state) const;

    /// (dzeta/dt, du/dt) coefficient rates; `state` need not be constrained.
    /// Throws DepthError when eta_b + eps zeta <= 0 at a quadrature point.
    void rhs(const State& state, State& rate) const;
    [[nodiscard]] State rhs(const State& state) const;

    /// Net volume flux out of the domain, [eta u] from a to b, at the constrained state.
    [[nodiscard]] double outflow(const State& state) const;

    /// int zeta_h dx.
    [[nodiscard]] double mass(const State& state) const;

    /// Discrete initial data: zeta by L^2 projection; u by L^2 projection
    /// or by the elliptic projection of the model's u mass form.
    [[nodiscard]] State project_initial(const ScalarFunction& zeta0, const ScalarFunction& u0,
                                        const ScalarFunction& du0 = {}, bool elliptic_u = false) const;

    [[nodiscard]] const BandedMatrix& zeta_mass() const noexcept { return zeta_mass_; }
    /// Assembled (unfactored) u mass over the full Free basis.
    [[nodiscard]] const BandedMatrix& u_mass_full() const noexcept { return u_mass_full_; }
    [[nodiscard]] SymmetricForm u_form() const;

private:
    [[nodiscard]] double boundary_u(Side side, double zeta) const;

    SplineSpace space_;
    Bathymetry bathy_;
    ModelParams params_;
    BoundarySpec bc_;
    std::optional<Forcing> forcing_;
    QuadratureTable table_;
    std::vector<double> depth_q_;   // eta_b at quadrature points
    std::vector<double> ddepth_q_;  // eta_b' at quadrature points
    double depth_left_;
    double depth_right_;
    std::vector<double> basis_integrals_;
    BandedMatrix zeta_mass_;
    BandedMatrix u_mass_full_;
    BandedMatrix u_mass_inner_;
};

/// Exact fields of the manufactured test on [0, 1]:
/// zeta = e^{2t}(cos pi x + x + 2), u = e^{xt}(sin pi x + x^3 - x^2).
struct ManufacturedSolution {
    static double zeta(double x, double t, int dx = 0);
    static double u(double x, double t, int dx = 0);
};

/// Forcing that makes the manufactured fields exact for `params` over `bathy`.
/// For CBs, f_u is the forcing of the un-weighted momentum equation, so the
/// weak load (eta_b f_u, chi) matches the eta_b-multiplied strong form.
Forcing manufactured_forcing(const ModelParams& params, const Bathymetry& bathy);

}  // namespace vbwave
