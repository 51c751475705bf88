#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "xyq/density_matrix.hpp"
#include "xyq/spectral.hpp"

namespace xyq {

/// Canonical state exp(-beta H)/Z.  Energies are shifted by the ground energy
/// before exponentiation so large beta does not overflow.  beta = +infinity is
/// the ground-sector limit (uniform mixture over the degenerate ground block).
inline Eigen::VectorXd thermal_weights(const SpectralDecomposition& sd, double beta) {
    if (std::isnan(beta) || beta < 0.0)
        throw std::invalid_argument("beta must be >= 0 (or +infinity)");
    const Eigen::Index n = sd.dim();
    Eigen::VectorXd w(n);
    if (std::isinf(beta)) {
        const double tol = sd.degeneracy_tolerance();
        w.setZero();
        Eigen::Index k = 0;
        while (k < n && sd.energies(k) - sd.energies(0) < tol) w(k++) = 1.0;
    } else {
        w = (-beta * (sd.energies.array() - sd.energies(0))).exp();
    }
    return w / w.sum();
}

inline DensityMatrix thermal_state(const SpectralDecomposition& sd, double beta) {
    const Eigen::VectorXd w = thermal_weights(sd, beta);
    Eigen::MatrixXd rho = sd.vectors * w.asDiagonal() * sd.vectors.transpose();
    return DensityMatrix{rho.cast<std::complex<double>>()};
}

/// rho(t) = U rho0 U^dag with U = V exp(-iEt) V^T.
inline DensityMatrix evolve(const DensityMatrix& rho0, const SpectralDecomposition& sd,
                            double t) {
    if (rho0.dim() != sd.dim()) throw std::invalid_argument("dimension mismatch");
    const Eigen::Index n = sd.dim();
    Eigen::VectorXcd phase(n);
    for (Eigen::Index k = 0; k < n; ++k)
        phase(k) = std::polar(1.0, -sd.energies(k) * t);
    const Eigen::MatrixXcd Vc = sd.vectors.cast<std::complex<double>>();
    Eigen::MatrixXcd in_eigen = Vc.adjoint() * rho0.mat * Vc;
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k)
            in_eigen(k, m) *= phase(k) * std::conj(phase(m));
    return DensityMatrix{Vc * in_eigen * Vc.adjoint()};
}

/// Exact infinite-time average of a linear observable: the diagonal-ensemble
/// value, summing rho0_{mn} O_{nm} over energy-degenerate pairs in the
/// eigenbasis of the evolution Hamiltonian.
inline double diagonal_ensemble_expectation(const DensityMatrix& rho0,
                                            const SpectralDecomposition& sd,
                                            const Eigen::MatrixXcd& observable) {
    if (rho0.dim() != sd.dim() || observable.rows() != sd.dim())
        throw std::invalid_argument("dimension mismatch");
    const double scale = observable.cwiseAbs().maxCoeff();
    if ((observable - observable.adjoint()).cwiseAbs().maxCoeff() >
        1e-10 * (scale > 0 ? scale : 1.0))
        throw std::invalid_argument("observable not Hermitian");
    const Eigen::MatrixXcd Vc = sd.vectors.cast<std::complex<double>>();
    const Eigen::MatrixXcd rho_e = Vc.adjoint() * rho0.mat * Vc;
    const Eigen::MatrixXcd obs_e = Vc.adjoint() * observable * Vc;
    std::complex<double> acc = 0.0;
    for (const auto& blk : degenerate_blocks(sd.energies, sd.degeneracy_tolerance()))
        acc += (rho_e.block(blk.start, blk.start, blk.count, blk.count) *
                obs_e.block(blk.start, blk.start, blk.count, blk.count))
                   .trace();
    return acc.real();
}

struct SamplingPlan {
    double t_max = 1000.0;   // in units of 1/J
    int n_samples = 2000;
    std::uint64_t seed = 20120411;
};

struct TimeAverageResult {
    double mean = 0.0;
    double std_error = 0.0;
    int n_samples = 0;
    double window_T = 0.0;
    std::uint64_t seed = 0;
};

/// Deterministic uniform draws on [0, t_max); identical across platforms for
/// a given seed (raw 53-bit mantissas, no distribution adapter).
inline std::vector<double> sample_times(const SamplingPlan& plan) {
    if (plan.n_samples < 2) throw std::invalid_argument("need at least 2 time samples");
    std::mt19937_64 rng(plan.seed);
    std::vector<double> ts(plan.n_samples);
    for (auto& t : ts)
        t = static_cast<double>(rng() >> 11) * 0x1.0p-53 * plan.t_max;
    return ts;
}

inline TimeAverageResult summarize_samples(const std::vector<double>& values,
                                           const SamplingPlan& plan) {
    const int m = static_cast<int>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (m - 1);
    return TimeAverageResult{mean, std::sqrt(var / m), m, plan.t_max, plan.seed};
}

/// Monte Carlo long-time average of a functional of a reduced state.  Needed
/// for entanglement, which is nonlinear in rho; linear observables should use
/// diagonal_ensemble_expectation instead.
inline TimeAverageResult time_sampled_average(
    const DensityMatrix& rho0, const SpectralDecomposition& sd,
    const std::vector<int>& keep_sites, int n_sites,
    const std::function<double(const DensityMatrix&)>& functional,
    const SamplingPlan& plan) {
    const std::vector<double> ts = sample_times(plan);
    const Eigen::Index n = sd.dim();
    const Eigen::MatrixXcd Vc = sd.vectors.cast<std::complex<double>>();
    const Eigen::MatrixXcd rho_e = Vc.adjoint() * rho0.mat * Vc;

    std::vector<double> vals;
    vals.reserve(ts.size());
    Eigen::MatrixXcd work(n, n);
    for (double t : ts) {
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index k = 0; k < n; ++k)
                work(k, m) = rho_e(k, m) *
                             std::polar(1.0, -(sd.energies(k) - sd.energies(m)) * t);
        const DensityMatrix rho_t{Vc * work * Vc.adjoint()};
        vals.push_back(functional(partial_trace(rho_t, keep_sites, n_sites)));
    }
    return summarize_samples(vals, plan);
}

}  // namespace xyq
