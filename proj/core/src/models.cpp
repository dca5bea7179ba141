#include "vbwave/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vbwave/error.hpp"

namespace vbwave {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::SW: return "sw";
        case ModelKind::CB: return "cb";
        case ModelKind::CBw: return "cbw";
        case ModelKind::CBs: return "cbs";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "sw") return ModelKind::SW;
    if (name == "cb") return ModelKind::CB;
    if (name == "cbw") return ModelKind::CBw;
    if (name == "cbs") return ModelKind::CBs;
    throw InvalidArgument("unknown model '" + name + "' (expected sw, cb, cbw or cbs)");
}

std::string to_string(BoundaryKind kind) {
    return kind == BoundaryKind::Reflective ? "reflective" : "absorbing";
}

BoundaryKind parse_boundary_kind(const std::string& name) {
    if (name == "reflective") return BoundaryKind::Reflective;
    if (name == "absorbing") return BoundaryKind::Absorbing;
    throw InvalidArgument("unknown boundary condition '" + name + "' (expected reflective or absorbing)");
}

namespace {

double checked_total_depth(double epsilon, double zeta, double depth) {
    const double eta = depth + epsilon * zeta;
    if (!(eta > 0.0)) {
        throw DepthError("absorbing boundary: vacuum state, depth + eps*zeta = " + std::to_string(eta), 0.0, eta);
    }
    return eta;
}

}  // namespace

double absorbing_bc_value(double epsilon, double zeta, Side side, double depth) {
    const double eta = checked_total_depth(epsilon, zeta, depth);
    // sqrt(eta) - sqrt(d) written without cancellation.
    const double diff = epsilon * zeta / (std::sqrt(eta) + std::sqrt(depth));
    const double u = 2.0 / epsilon * diff;
    return side == Side::Left ? -u : u;
}

double absorbing_bc_rate(double epsilon, double zeta, double zeta_t, Side side, double depth) {
    const double eta = checked_total_depth(epsilon, zeta, depth);
    const double r = zeta_t / std::sqrt(eta);
    return side == Side::Left ? -r : r;
}

SemidiscreteSystem::SemidiscreteSystem(const Partition& partition, Bathymetry bathy, ModelParams params,
                                       BoundarySpec bc, std::optional<Forcing> forcing, int quadrature_points)
    : space_(SplineSpace::cubic(partition)),
      bathy_(std::move(bathy)),
      params_(params),
      bc_(bc),
      forcing_(std::move(forcing)),
      table_(space_, gauss_rule(quadrature_points)),
      depth_left_(bathy_.depth(partition.a())),
      depth_right_(bathy_.depth(partition.b())),
      basis_integrals_(space_.basis_integrals()),
      zeta_mass_(1, 0),
      u_mass_full_(1, 0),
      u_mass_inner_(1, 0) {
    if (!(params_.epsilon > 0.0)) {
        throw InvalidArgument("model: epsilon must be positive");
    }
    if (params_.mu < 0.0) {
        throw InvalidArgument("model: mu must be non-negative");
    }
    if (params_.kind == ModelKind::SW) {
        params_.mu = 0.0;
    }
    if (std::abs(bathy_.a() - partition.a()) > 1e-12 * partition.length() ||
        std::abs(bathy_.b() - partition.b()) > 1e-12 * partition.length()) {
        throw InvalidArgument("model: bathymetry and mesh cover different intervals");
    }

    const auto check_end = [&](BoundaryKind kind, double depth, bool flat, const char* name) {
        if (depth <= 0.0) {
            if (kind == BoundaryKind::Absorbing || !bc_.allow_shoreline) {
                throw InvalidArgument(std::string("model: dry ") + name +
                                      " endpoint requires a reflecting end and allow_shoreline");
            }
        }
        if (kind == BoundaryKind::Absorbing && !flat && !bc_.allow_sloping_absorbing) {
            throw InvalidArgument(std::string("model: absorbing ") + name +
                                  " end over a sloping bottom (Riemann invariants assume a horizontal bottom)");
        }
    };
    const double flat_width = std::min(1.0, 0.25 * partition.length());
    check_end(bc_.left, depth_left_, bathy_.flat_near_left(flat_width), "left");
    check_end(bc_.right, depth_right_, bathy_.flat_near_right(flat_width), "right");

    const int npts = table_.elements() * table_.points();
    depth_q_.resize(npts);
    ddepth_q_.resize(npts);
    for (int e = 0; e < table_.elements(); ++e) {
        for (int q = 0; q < table_.points(); ++q) {
            depth_q_[e * table_.points() + q] = bathy_.depth(table_.x(e, q));
            ddepth_q_[e * table_.points() + q] = bathy_.depth(table_.x(e, q), 1);
        }
    }

    zeta_mass_ = gram_matrix(space_, {}, quadrature_points);
    zeta_mass_.factor();
    if (params_.kind == ModelKind::CBs) {
        u_mass_full_ = weighted_mass_A(space_, bathy_, params_.mu, bc_.allow_shoreline, quadrature_points);
    } else {
        u_mass_full_ = form_matrix(space_, u_form(), quadrature_points);
    }
    u_mass_inner_ = u_mass_full_.block(1, space_.dim() - 1);
    u_mass_inner_.factor();
}

SymmetricForm SemidiscreteSystem::u_form() const {
    if (params_.kind == ModelKind::CBs) {
        return a_form(bathy_, params_.mu);
    }
    if (params_.mu == 0.0) {
        return SymmetricForm{};
    }
    return h1_form(params_.mu);
}

State SemidiscreteSystem::zero_state(double t) const {
    State s;
    s.t = t;
    s.zc.assign(static_cast<std::size_t>(dim()), 0.0);
    s.uc.assign(static_cast<std::size_t>(dim()), 0.0);
    return s;
}

double SemidiscreteSystem::boundary_u(Side side, double zeta) const {
    const bool left = side == Side::Left;
    if ((left ? bc_.left : bc_.right) == BoundaryKind::Reflective) {
        return 0.0;
    }
    return absorbing_bc_value(params_.epsilon, zeta, side, left ? depth_left_ : depth_right_);
}

void SemidiscreteSystem::constrain(State& state) const {
    const int n = dim();
    state.uc[0] = boundary_u(Side::Left, state.zc[0]);
    state.uc[n - 1] = boundary_u(Side::Right, state.zc[n - 1]);
}

State SemidiscreteSystem::rhs(const State& state) const {
    State rate = zero_state(state.t);
    rhs(state, rate);
    return rate;
}

void SemidiscreteSystem::rhs(const State& state, State& rate) const {
    const int n = dim();
    if (static_cast<int>(state.zc.size()) != n || static_cast<int>(state.uc.size()) != n) {
        throw InvalidArgument("model: state has wrong dimension");
    }
    rate.t = state.t;
    rate.zc.assign(static_cast<std::size_t>(n), 0.0);
    rate.uc.assign(static_cast<std::size_t>(n), 0.0);

    const double eps = params_.epsilon;
    const double t = state.t;
    const bool cbs = params_.kind == ModelKind::CBs;
    const double u_left = boundary_u(Side::Left, state.zc[0]);
    const double u_right = boundary_u(Side::Right, state.zc[n - 1]);
    const auto ucoef = [&](int i) { return i == 0 ? u_left : (i == n - 1 ? u_right : state.uc[i]); };
    const bool has_fz = forcing_ && forcing_->f_zeta;
    const bool has_fu = forcing_ && forcing_->f_u;

    const int local = space_.local_count();
    std::vector<double>& fz = rate.zc;
    std::vector<double>& fu = rate.uc;
    for (int e = 0; e < table_.elements(); ++e) {
        const int first = space_.first_function(e);
        for (int q = 0; q < table_.points(); ++q) {
            const auto phi = table_.phi(e, q, 0);
            const auto dphi = table_.phi(e, q, 1);
            double z = 0.0, zx = 0.0, u = 0.0, ux = 0.0;
            for (int j = 0; j < local; ++j) {
                const double zcj = state.zc[first + j];
                const double ucj = ucoef(first + j);
                z += zcj * phi[j];
                zx += zcj * dphi[j];
                u += ucj * phi[j];
                ux += ucj * dphi[j];
            }
            const double x = table_.x(e, q);
            const double w = table_.weight(e, q);
            const double db = depth_q_[e * table_.points() + q];
            const double eta = db + eps * z;
            if (!(eta > 0.0)) {
                std::ostringstream msg;
                msg << "total depth eta_b + eps*zeta = " << eta << " <= 0 at x = " << x << ", t = " << t;
                throw DepthError(msg.str(), x, eta);
            }
            // Continuity equation after integration by parts: (eta u, phi').
            const double flux = w * eta * u;
            const double src = has_fz ? w * forcing_->f_zeta(x, t) : 0.0;
            const double weight_u = cbs ? db : 1.0;
            double mom = -zx - eps * u * ux;
            if (has_fu) {
                mom += forcing_->f_u(x, t);
            }
            mom *= w * weight_u;
            for (int j = 0; j < local; ++j) {
                fz[first + j] += flux * dphi[j] + src * phi[j];
                fu[first + j] += mom * phi[j];
            }
        }
    }
    fz[0] += (depth_left_ + eps * state.zc[0]) * u_left;
    fz[n - 1] -= (depth_right_ + eps * state.zc[n - 1]) * u_right;
    zeta_mass_.solve_in_place(fz);

    double du_left = 0.0;
    double du_right = 0.0;
    if (bc_.left == BoundaryKind::Absorbing) {
        du_left = absorbing_bc_rate(eps, state.zc[0], fz[0], Side::Left, depth_left_);
    }
    if (bc_.right == BoundaryKind::Absorbing) {
        du_right = absorbing_bc_rate(eps, state.zc[n - 1], fz[n - 1], Side::Right, depth_right_);
    }
    const int bw = u_mass_full_.bandwidth();
    std::vector<double> inner(fu.begin() + 1, fu.end() - 1);
    for (int i = 1; i <= std::min(bw, n - 2); ++i) {
        inner[i - 1] -= u_mass_full_(i, 0) * du_left;
    }
    for (int i = std::max(1, n - 1 - bw); i <= n - 2; ++i) {
        inner[i - 1] -= u_mass_full_(i, n - 1) * du_right;
    }
    u_mass_inner_.solve_in_place(inner);
    fu[0] = du_left;
    std::copy(inner.begin(), inner.end(), fu.begin() + 1);
    fu[n - 1] = du_right;
}

double SemidiscreteSystem::outflow(const State& state) const {
    const int n = dim();
    const double eps = params_.epsilon;
    const double ul = boundary_u(Side::Left, state.zc[0]);
    const double ur = boundary_u(Side::Right, state.zc[n - 1]);
    return (depth_right_ + eps * state.zc[n - 1]) * ur - (depth_left_ + eps * state.zc[0]) * ul;
}

double SemidiscreteSystem::mass(const State& state) const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i) {
        m += state.zc[i] * basis_integrals_[i];
    }
    return m;
}

State SemidiscreteSystem::project_initial(const ScalarFunction& zeta0, const ScalarFunction& u0,
                                          const ScalarFunction& du0, bool elliptic_u) const {
    const int points = table_.points();
    State s = zero_state(0.0);
    s.zc = l2_project(space_, zeta0, points);
    const SplineSpace inner = space_.with_endpoint_condition(EndpointCondition::ZeroEndpoints);
    std::vector<double> ui;
    if (elliptic_u) {
        if (!du0) {
            throw InvalidArgument("elliptic projection of u0 needs its derivative");
        }
        ui = elliptic_project(inner, u_form(), u0, du0, points);
    } else {
        ui = l2_project(inner, u0, points);
    }
    std::copy(ui.begin(), ui.end(), s.uc.begin() + 1);
    constrain(s);
    return s;
}

// Manufactured solution ------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

// s(x) = sin(pi x) + x^3 - x^2 and derivatives.
double s_fn(double x, int d) {
    switch (d) {
        case 0: return std::sin(kPi * x) + x * x * x - x * x;
        case 1: return kPi * std::cos(kPi * x) + 3.0 * x * x - 2.0 * x;
        case 2: return -kPi * kPi * std::sin(kPi * x) + 6.0 * x - 2.0;
        default: return -kPi * kPi * kPi * std::cos(kPi * x) + 6.0;
    }
}

}  // namespace

double ManufacturedSolution::zeta(double x, double t, int dx) {
    const double g = std::exp(2.0 * t);
    switch (dx) {
        case 0: return g * (std::cos(kPi * x) + x + 2.0);
        case 1: return g * (-kPi * std::sin(kPi * x) + 1.0);
        default: return g * (-kPi * kPi * std::cos(kPi * x));
    }
}

double ManufacturedSolution::u(double x, double t, int dx) {
    const double g = std::exp(x * t);
    const double s = s_fn(x, 0);
    const double s1 = s_fn(x, 1);
    switch (dx) {
        case 0: return g * s;
        case 1: return g * (t * s + s1);
        default: return g * (t * t * s + 2.0 * t * s1 + s_fn(x, 2));
    }
}

Forcing manufactured_forcing(const ModelParams& params, const Bathymetry& bathy) {
    const double eps = params.epsilon;
    const double mu = params.kind == ModelKind::SW ? 0.0 : params.mu;
    const bool cbs = params.kind == ModelKind::CBs;
    Forcing f;
    f.f_zeta = [eps, bathy](double x, double t) {
        const double zt = 2.0 * ManufacturedSolution::zeta(x, t);
        const double z = ManufacturedSolution::zeta(x, t);
        const double zx = ManufacturedSolution::zeta(x, t, 1);
        const double u = ManufacturedSolution::u(x, t);
        const double ux = ManufacturedSolution::u(x, t, 1);
        return zt + (bathy.depth(x, 1) + eps * zx) * u + (bathy.depth(x) + eps * z) * ux;
    };
    f.f_u = [eps, mu, cbs, bathy](double x, double t) {
        const double g = std::exp(x * t);
        const double s = s_fn(x, 0);
        const double s1 = s_fn(x, 1);
        const double s2 = s_fn(x, 2);
        const double u = g * s;
        const double ux = g * (t * s + s1);
        const double ut = x * g * s;
        const double utx = g * ((1.0 + x * t) * s + x * s1);
        const double utxx = g * ((2.0 * t + x * t * t) * s + (2.0 + 2.0 * x * t) * s1 + x * s2);
        const double zx = ManufacturedSolution::zeta(x, t, 1);
        if (!cbs) {
            return ut + zx + eps * u * ux - mu / 3.0 * utxx;
        }
        const double d = bathy.depth(x);
        const double d1 = bathy.depth(x, 1);
        const double d2 = bathy.depth(x, 2);
        const double weighted = (d - 0.5 * mu * d * d * d2) * ut - mu / 3.0 * (3.0 * d * d * d1 * utx + d * d * d * utxx) +
                                d * zx + eps * d * u * ux;
        return weighted / d;
    };
    return f;
}

}  // namespace vbwave
