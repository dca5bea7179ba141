#include "vbwave/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vbwave/error.hpp"

namespace vbwave {

SymmetricForm h1_form(double mu) {
    return {{}, [mu](double) { return mu / 3.0; }};
}

SymmetricForm a_form(const Bathymetry& bathy, double mu) {
    return {
        [bathy, mu](double x) {
            const double d = bathy.depth(x);
            return d - 0.5 * mu * d * d * bathy.depth(x, 2);
        },
        [bathy, mu](double x) {
            const double d = bathy.depth(x);
            return mu / 3.0 * d * d * d;
        },
    };
}

CoercivityReport coercivity_check(const Bathymetry& bathy, double mu, const Partition* partition) {
    std::vector<double> xs;
    constexpr int kSamples = 2001;
    const double a = bathy.a();
    const double b = bathy.b();
    for (int i = 0; i < kSamples; ++i) {
        xs.push_back(a + (b - a) * i / (kSamples - 1));
    }
    const double eps = 1e-12 * (b - a);
    for (double x : bathy.breakpoints()) {
        xs.push_back(x);
        xs.push_back(x - eps);
    }
    if (partition != nullptr) {
        for (int i = 0; i <= partition->elements(); ++i) {
            xs.push_back(partition->node(i));
        }
    }
    CoercivityReport rep;
    rep.c1 = std::numeric_limits<double>::infinity();
    rep.c2 = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        const double d = bathy.depth(x);
        const double m = d - 0.5 * mu * d * d * bathy.depth(x, 2);
        if (d < rep.c1) {
            rep.c1 = d;
            rep.argmin_c1 = x;
        }
        if (m < rep.c2) {
            rep.c2 = m;
            rep.argmin_c2 = x;
        }
    }
    rep.c_mu = std::min(rep.c2, mu * rep.c1 * rep.c1 * rep.c1 / 3.0);
    rep.satisfied = rep.c1 > 0.0 && rep.c2 > 0.0;
    return rep;
}

BandedMatrix form_matrix(const SplineSpace& space, const SymmetricForm& form, int points) {
    const QuadratureTable table(space, gauss_rule(points));
    BandedMatrix m(space.dim(), space.degree());
    const int local = space.local_count();
    std::vector<int> idx(static_cast<std::size_t>(local));
    for (int e = 0; e < table.elements(); ++e) {
        const int first = space.first_function(e);
        for (int j = 0; j < local; ++j) {
            idx[j] = space.space_index(first + j);
        }
        for (int q = 0; q < table.points(); ++q) {
            const double x = table.x(e, q);
            const double w = table.weight(e, q);
            const double mw = form.mass_weight ? form.mass_weight(x) : 1.0;
            const double sw = form.stiffness_weight ? form.stiffness_weight(x) : 0.0;
            const auto phi = table.phi(e, q, 0);
            const auto dphi = table.phi(e, q, 1);
            for (int i = 0; i < local; ++i) {
                if (idx[i] < 0) {
                    continue;
                }
                for (int j = 0; j < local; ++j) {
                    if (idx[j] < 0) {
                        continue;
                    }
                    m.add(idx[i], idx[j], w * (mw * phi[i] * phi[j] + sw * dphi[i] * dphi[j]));
                }
            }
        }
    }
    return m;
}

BandedMatrix gram_matrix(const SplineSpace& space, const ScalarFunction& weight, int points) {
    return form_matrix(space, SymmetricForm{weight, {}}, points);
}

BandedMatrix weighted_mass_A(const SplineSpace& space, const Bathymetry& bathy, double mu, bool allow_shoreline,
                             int points) {
    const auto rep = coercivity_check(bathy, mu, &space.partition());
    bool ok = rep.satisfied;
    if (!ok && allow_shoreline && rep.c1 == 0.0 && rep.c2 >= 0.0) {
        // Only a dry endpoint may violate strict positivity.
        ok = (rep.argmin_c1 == bathy.a() || rep.argmin_c1 == bathy.b()) &&
             (rep.c2 > 0.0 || rep.argmin_c2 == bathy.a() || rep.argmin_c2 == bathy.b());
    }
    if (!ok) {
        std::ostringstream msg;
        msg << "CBs mass form not coercive: c1 = min eta_b = " << rep.c1 << " at x = " << rep.argmin_c1
            << ", c2 = min(eta_b - mu/2 eta_b^2 eta_b'') = " << rep.c2 << " at x = " << rep.argmin_c2;
        throw CoercivityError(msg.str());
    }
    return form_matrix(space, a_form(bathy, mu), points);
}

std::vector<double> assemble_load(const SplineSpace& space, const ScalarFunction& g, int points) {
    return form_load(space, SymmetricForm{{}, {}}, g, {}, points);
}

std::vector<double> form_load(const SplineSpace& space, const SymmetricForm& form, const ScalarFunction& v,
                              const ScalarFunction& dv, int points) {
    const QuadratureTable table(space, gauss_rule(points));
    std::vector<double> f(static_cast<std::size_t>(space.dim()), 0.0);
    const int local = space.local_count();
    for (int e = 0; e < table.elements(); ++e) {
        const int first = space.first_function(e);
        for (int q = 0; q < table.points(); ++q) {
            const double x = table.x(e, q);
            const double w = table.weight(e, q);
            const double mv = w * (form.mass_weight ? form.mass_weight(x) : 1.0) * v(x);
            const double sv = (form.stiffness_weight && dv) ? w * form.stiffness_weight(x) * dv(x) : 0.0;
            const auto phi = table.phi(e, q, 0);
            const auto dphi = table.phi(e, q, 1);
            for (int j = 0; j < local; ++j) {
                const int s = space.space_index(first + j);
                if (s >= 0) {
                    f[s] += mv * phi[j] + sv * dphi[j];
                }
            }
        }
    }
    return f;
}

std::vector<double> l2_project(const SplineSpace& space, const ScalarFunction& f, int points) {
    auto m = gram_matrix(space, {}, points);
    m.factor();
    return m.solve(assemble_load(space, f, points));
}

std::vector<double> elliptic_project(const SplineSpace& space, const SymmetricForm& form, const ScalarFunction& v,
                                     const ScalarFunction& dv, int points) {
    auto m = form_matrix(space, form, points);
    m.factor();
    return m.solve(form_load(space, form, v, dv, points));
}

}  // namespace vbwave
