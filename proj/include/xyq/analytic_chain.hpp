#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "xyq/observables.hpp"
#include "xyq/quadrature.hpp"

namespace xyq {

/// Dimensionless parameter point of the infinite chain.
struct ChainPoint {
    double a_tilde = 0.0;
    double beta_tilde = 20.0;  // +infinity selects the zero-temperature branch
    double gamma = 0.5;

    void validate() const {
        if (gamma == 0.0 || !std::isfinite(gamma))
            throw std::invalid_argument("gamma must be nonzero and finite");
        if (std::abs(gamma) < 1e-3)
            throw std::invalid_argument("|gamma| below the 1e-3 quadrature floor "
                                        "(near-singular integrand at phi = pi/2)");
        if (std::isnan(beta_tilde) || beta_tilde < 0.0)
            throw std::invalid_argument("beta_tilde must be >= 0 (or +infinity)");
        if (!std::isfinite(a_tilde))
            throw std::invalid_argument("a_tilde must be finite");
    }
};

/// Quasiparticle dispersion Lambda(x) = sqrt(gamma^2 sin^2 phi + (x - cos phi)^2).
inline double dispersion(double x, double phi, double gamma) {
    const double s = gamma * std::sin(phi);
    const double c = x - std::cos(phi);
    return std::sqrt(s * s + c * c);
}

namespace detail {

inline double tanh_half(double beta_tilde, double lambda) {
    if (std::isinf(beta_tilde)) return 1.0;  // zero-temperature branch
    return std::tanh(0.5 * beta_tilde * lambda);
}

}  // namespace detail

/// Long-time correlation kernel of the quenched chain: T^xx = G(-1),
/// T^yy = G(+1).
inline Integral evolved_G(int R, const ChainPoint& pt, const QuadratureSpec& quad = {}) {
    pt.validate();
    if (R != 1 && R != -1) throw std::invalid_argument("R must be +1 or -1");
    const double at = pt.a_tilde, bt = pt.beta_tilde, g = pt.gamma;
    auto f = [=](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        const double la = dispersion(at, phi, g);
        const double l0sq = g * g * s * s + c * c;
        return detail::tanh_half(bt, la) / (la * l0sq) *
               (g * std::sin(phi * R) * s - c * c) * (g * g * s * s + (c - at) * c);
    };
    Integral I = integrate(f, 0.0, std::numbers::pi, quad);
    I.value /= std::numbers::pi;
    I.error_estimate /= std::numbers::pi;
    return I;
}

/// Long-time transverse magnetization of the quenched chain.
inline Integral evolved_magnetization(const ChainPoint& pt, const QuadratureSpec& quad = {}) {
    pt.validate();
    const double at = pt.a_tilde, bt = pt.beta_tilde, g = pt.gamma;
    auto f = [=](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        const double la = dispersion(at, phi, g);
        const double l0sq = g * g * s * s + c * c;
        return -detail::tanh_half(bt, la) / (la * l0sq) * c * ((c - at) * c + g * g * s * s);
    };
    Integral I = integrate(f, 0.0, std::numbers::pi, quad);
    I.value /= std::numbers::pi;
    I.error_estimate /= std::numbers::pi;
    return I;
}

/// Canonical-equilibrium correlation kernel at field a_tilde.
inline Integral equilibrium_G(int R, const ChainPoint& pt, const QuadratureSpec& quad = {}) {
    pt.validate();
    if (R != 1 && R != -1) throw std::invalid_argument("R must be +1 or -1");
    const double at = pt.a_tilde, bt = pt.beta_tilde, g = pt.gamma;
    auto f = [=](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        const double la = dispersion(at, phi, g);
        return detail::tanh_half(bt, la) / la * (g * std::sin(phi * R) * s - c * (c - at));
    };
    Integral I = integrate(f, 0.0, std::numbers::pi, quad);
    I.value /= std::numbers::pi;
    I.error_estimate /= std::numbers::pi;
    return I;
}

/// Canonical-equilibrium transverse magnetization at field a_tilde.
inline Integral equilibrium_magnetization(const ChainPoint& pt,
                                          const QuadratureSpec& quad = {}) {
    pt.validate();
    const double at = pt.a_tilde, bt = pt.beta_tilde, g = pt.gamma;
    auto f = [=](double phi) {
        const double c = std::cos(phi);
        const double la = dispersion(at, phi, g);
        return -detail::tanh_half(bt, la) * (c - at) / la;
    };
    Integral I = integrate(f, 0.0, std::numbers::pi, quad);
    I.value /= std::numbers::pi;
    I.error_estimate /= std::numbers::pi;
    return I;
}

struct CorrelatorEstimate {
    CorrelatorSet set;
    double error_estimate = 0.0;  // worst-case propagated quadrature error
};

namespace detail {

inline CorrelatorEstimate assemble_set(const Integral& mz, const Integral& g_minus,
                                       const Integral& g_plus) {
    CorrelatorSet c;
    c.m_z = mz.value;
    c.t_xx = g_minus.value;
    c.t_yy = g_plus.value;
    c.t_zz = mz.value * mz.value - g_plus.value * g_minus.value;
    const double tzz_err = 2.0 * std::abs(mz.value) * mz.error_estimate +
                           std::abs(g_plus.value) * g_minus.error_estimate +
                           std::abs(g_minus.value) * g_plus.error_estimate;
    return CorrelatorEstimate{
        c, std::max({mz.error_estimate, g_minus.error_estimate, g_plus.error_estimate,
                     tzz_err})};
}

}  // namespace detail

/// T^xx = G(-1), T^yy = G(+1), T^zz = (M^z)^2 - G(1) G(-1); off-diagonals
/// vanish identically for both the evolved and the equilibrium state.
inline CorrelatorEstimate evolved_correlator_set(const ChainPoint& pt,
                                                 const QuadratureSpec& quad = {}) {
    return detail::assemble_set(evolved_magnetization(pt, quad), evolved_G(-1, pt, quad),
                                evolved_G(1, pt, quad));
}

inline CorrelatorEstimate equilibrium_correlator_set(const ChainPoint& pt,
                                                     const QuadratureSpec& quad = {}) {
    return detail::assemble_set(equilibrium_magnetization(pt, quad),
                                equilibrium_G(-1, pt, quad), equilibrium_G(1, pt, quad));
}

/// Nearest-neighbor entanglement of the infinite chain: reconstruct the
/// two-site state from the correlators and take the logarithmic negativity.
inline EntanglementValue infinite_chain_entanglement(const CorrelatorSet& set) {
    return logarithmic_negativity(two_site_from_correlators(set));
}

}  // namespace xyq
