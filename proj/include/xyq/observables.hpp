#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "xyq/density_matrix.hpp"
#include "xyq/lattice.hpp"
#include "xyq/pauli.hpp"

namespace xyq {

/// Pauli-normalized magnetization and two-site correlators for one
/// nearest-neighbor pair: M = tr[rho sigma], T^ij = tr[rho2 sigma_i x sigma_j].
/// The off-diagonal entries are carried for the vanishing checks.
struct CorrelatorSet {
    double m_z = 0.0;
    double t_xx = 0.0, t_yy = 0.0, t_zz = 0.0;
    double t_xy = 0.0, t_yx = 0.0;
    double t_xz = 0.0, t_zx = 0.0;
    double t_yz = 0.0, t_zy = 0.0;

    double max_off_diagonal() const {
        return std::max({std::abs(t_xy), std::abs(t_yx), std::abs(t_xz), std::abs(t_zx),
                         std::abs(t_yz), std::abs(t_zy)});
    }

    void validate(double tol = 1e-9) const {
        for (double v : {m_z, t_xx, t_yy, t_zz, t_xy, t_yx, t_xz, t_zx, t_yz, t_zy})
            if (!std::isfinite(v) || std::abs(v) > 1.0 + tol)
                throw std::invalid_argument("correlator outside [-1, 1]");
    }

    nlohmann::json to_json() const {
        return {{"m_z", m_z},   {"t_xx", t_xx}, {"t_yy", t_yy}, {"t_zz", t_zz},
                {"t_xy", t_xy}, {"t_yx", t_yx}, {"t_xz", t_xz}, {"t_zx", t_zx},
                {"t_yz", t_yz}, {"t_zy", t_zy}};
    }
};

/// 4x4 two-site density matrix.
struct TwoSiteState {
    Eigen::Matrix4cd mat;
};

struct EntanglementValue {
    double e_n = 0.0;        // ebits
    double negativity = 0.0;

    nlohmann::json to_json() const { return {{"e_n", e_n}, {"negativity", negativity}}; }
};

namespace detail {

inline double pair_trace(const Eigen::Matrix4cd& rho2, const Eigen::Matrix2cd& a,
                         const Eigen::Matrix2cd& b) {
    const Eigen::MatrixXcd op = pauli::kron(a, b);
    return (rho2 * op).trace().real();
}

}  // namespace detail

/// Correlators read off a 4x4 two-site state.
inline CorrelatorSet correlators_from_two_site(const Eigen::Matrix4cd& rho2) {
    const auto sx = pauli::x(), sy = pauli::y(), sz = pauli::z(), id = pauli::identity();
    CorrelatorSet c;
    // One-site magnetization, averaged over the two (symmetry-equivalent) sites.
    c.m_z = 0.5 * (detail::pair_trace(rho2, sz, id) + detail::pair_trace(rho2, id, sz));
    c.t_xx = detail::pair_trace(rho2, sx, sx);
    c.t_yy = detail::pair_trace(rho2, sy, sy);
    c.t_zz = detail::pair_trace(rho2, sz, sz);
    c.t_xy = detail::pair_trace(rho2, sx, sy);
    c.t_yx = detail::pair_trace(rho2, sy, sx);
    c.t_xz = detail::pair_trace(rho2, sx, sz);
    c.t_zx = detail::pair_trace(rho2, sz, sx);
    c.t_yz = detail::pair_trace(rho2, sy, sz);
    c.t_zy = detail::pair_trace(rho2, sz, sy);
    return c;
}

/// Correlators of a nearest-neighbor pair of the full state.  Rejects pairs
/// that are not lattice bonds: the model's published quantities are
/// nearest-neighbor only.
inline CorrelatorSet correlators(const DensityMatrix& rho_full, const Lattice& lat,
                                 const Bond& pair) {
    if (!is_bond(lat, pair.first, pair.second))
        throw std::invalid_argument("site pair is not a lattice bond");
    const DensityMatrix rho2dm =
        partial_trace(rho_full, {pair.first, pair.second}, lat.n_sites);
    return correlators_from_two_site(rho2dm.mat);
}

/// rho2 = (1/4)[I x I + M^z (sz x I + I x sz) + sum_ij T^ij (si x sj)].
/// A smallest eigenvalue below -1e-9 signals an unphysical correlator set
/// (quadrature error upstream) and is rejected; eigenvalues in [-1e-9, 0)
/// are clipped to zero and the state renormalized.
inline TwoSiteState two_site_from_correlators(const CorrelatorSet& c) {
    const auto sx = pauli::x(), sy = pauli::y(), sz = pauli::z(), id = pauli::identity();
    Eigen::Matrix4cd rho = pauli::kron(id, id);
    rho += c.m_z * (pauli::kron(sz, id) + pauli::kron(id, sz));
    rho += c.t_xx * pauli::kron(sx, sx) + c.t_yy * pauli::kron(sy, sy) +
           c.t_zz * pauli::kron(sz, sz);
    rho += c.t_xy * pauli::kron(sx, sy) + c.t_yx * pauli::kron(sy, sx);
    rho += c.t_xz * pauli::kron(sx, sz) + c.t_zx * pauli::kron(sz, sx);
    rho += c.t_yz * pauli::kron(sy, sz) + c.t_zy * pauli::kron(sz, sy);
    rho *= 0.25;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()));
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -1e-9)
        throw std::invalid_argument("correlator set yields an unphysical two-site state "
                                    "(min eigenvalue " + std::to_string(min_ev) + ")");
    if (min_ev < 0.0) {
        Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
        ev /= ev.sum();
        rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    }
    return TwoSiteState{rho};
}

/// Partial transpose of a two-qubit state over the first qubit.
inline Eigen::Matrix4cd partial_transpose_first(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd pt;
    // Index (a, b): a = first qubit, b = second.  (ab, a'b') -> (a'b, ab').
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                    pt(2 * ap + b, 2 * a + bp) = rho(2 * a + b, 2 * ap + bp);
    return pt;
}

/// E_N = log2(2 N + 1), N = |sum of negative eigenvalues of rho^{T_A}|.
/// A two-qubit partial transpose has at most one negative eigenvalue; this is
/// asserted on every call.
inline EntanglementValue logarithmic_negativity(const TwoSiteState& rho2) {
    const Eigen::Matrix4cd pt = partial_transpose_first(rho2.mat);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (pt + pt.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    double neg_sum = 0.0;
    int n_negative = 0;
    for (int k = 0; k < 4; ++k) {
        const double ev = es.eigenvalues()(k);
        if (ev < 0.0) neg_sum += ev;
        if (ev < -1e-12) ++n_negative;
    }
    if (n_negative > 1)
        throw std::logic_error("two-qubit partial transpose with more than one negative "
                               "eigenvalue");
    const double negativity = std::abs(neg_sum);
    return EntanglementValue{std::log2(2.0 * negativity + 1.0), negativity};
}

}  // namespace xyq
