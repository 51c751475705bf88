#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "xyq/dynamics.hpp"
#include "xyq/hamiltonian.hpp"
#include "xyq/observables.hpp"
#include "xyq/spectral.hpp"

namespace xyq {

/// Reduction of one site pair against a fixed eigenbasis.
///
/// Rows of the eigenvector matrix are partitioned into the four pair basis
/// states (row blocks U_0..U_3, rest-configuration order identical in each),
/// so that the two-site reduction of any state expressed in this eigenbasis
/// becomes rho2_{ij} = tr(rho_eigen * U_j^T U_i).  Per-eigenstate reductions
/// are cached, which makes every canonical curve point an O(dim) recombination.
class PairReduction {
public:
    PairReduction(const SpectralDecomposition& sd, int n_sites, int site_p, int site_q)
        : sd_(&sd), n_sites_(n_sites), p_(site_p), q_(site_q) {
        const std::uint64_t dim = std::uint64_t{1} << n_sites;
        if (sd.dim() != static_cast<Eigen::Index>(dim))
            throw std::invalid_argument("spectral decomposition does not match n_sites");
        if (p_ == q_ || p_ < 0 || q_ < 0 || p_ >= n_sites || q_ >= n_sites)
            throw std::invalid_argument("invalid site pair");

        const Eigen::Index quarter = static_cast<Eigen::Index>(dim / 4);
        std::array<Eigen::Index, 4> fill{0, 0, 0, 0};
        for (auto& u : blocks_) u.resize(quarter, sd.dim());
        for (std::uint64_t b = 0; b < dim; ++b) {
            const int idx = 2 * basis::bit_of(b, p_, n_sites) + basis::bit_of(b, q_, n_sites);
            blocks_[idx].row(fill[idx]++) = sd.vectors.row(b);
        }

        state_rdms_.resize(sd.dim(), 16);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                state_rdms_.col(4 * i + j) =
                    (blocks_[i].array() * blocks_[j].array()).colwise().sum().transpose();
    }

    const SpectralDecomposition& spectral() const { return *sd_; }
    int site_p() const { return p_; }
    int site_q() const { return q_; }

    /// Two-site reduction of sum_n w_n |n><n|.
    Eigen::Matrix4cd mixture_rdm(const Eigen::VectorXd& weights) const {
        Eigen::Matrix4cd rho;
        const Eigen::VectorXd e = state_rdms_.transpose() * weights;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rho(i, j) = e(4 * i + j);
        return rho;
    }

    Eigen::Matrix4cd thermal_rdm(double beta) const {
        return mixture_rdm(thermal_weights(*sd_, beta));
    }

    const Eigen::MatrixXd& block(int i) const { return blocks_[i]; }

private:
    const SpectralDecomposition* sd_;
    int n_sites_, p_, q_;
    std::array<Eigen::MatrixXd, 4> blocks_;
    Eigen::MatrixXd state_rdms_;  // dim x 16, entry (n, 4i+j) = rdm of |n> at (i,j)
};

/// Post-quench dynamics of an initially thermal state, held in the eigenbasis
/// of the evolution Hamiltonian.  The initial state is rank-truncated at the
/// thermal-weight floor, which keeps the basis change cheap at low
/// temperature without affecting results beyond the discarded tail.
class QuenchDynamics {
public:
    QuenchDynamics(const SpectralDecomposition& evolution_sd,
                   const SpectralDecomposition& initial_sd, double beta_init,
                   double weight_floor = 1e-16)
        : sd1_(&evolution_sd) {
        if (evolution_sd.dim() != initial_sd.dim())
            throw std::invalid_argument("dimension mismatch");
        Eigen::VectorXd w = thermal_weights(initial_sd, beta_init);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < w.size(); ++k)
            if (w(k) > weight_floor * w.maxCoeff()) keep.push_back(k);
        double norm = 0.0;
        for (auto k : keep) norm += w(k);

        Eigen::MatrixXd psi(evolution_sd.dim(), static_cast<Eigen::Index>(keep.size()));
        for (Eigen::Index c = 0; c < psi.cols(); ++c)
            psi.col(c) = initial_sd.vectors.col(keep[c]) * std::sqrt(w(keep[c]) / norm);
        const Eigen::MatrixXd coeffs = evolution_sd.vectors.transpose() * psi;
        rho_eigen_ = coeffs * coeffs.transpose();
    }

    /// rho0 expressed in the evolution eigenbasis (real: both H's are real).
    const Eigen::MatrixXd& rho_in_eigenbasis() const { return rho_eigen_; }

    /// Infinite-time averaged two-site state: off-diagonal elements between
    /// non-degenerate levels deleted, then reduced.  All 16 entries are
    /// computed, so the off-diagonal-correlator vanishing checks are real
    /// checks here.
    Eigen::Matrix4cd diagonal_ensemble_rdm(const PairReduction& pr) const {
        require_same_basis(pr);
        Eigen::Matrix4cd rdm = Eigen::Matrix4cd::Zero();
        const auto blocks =
            degenerate_blocks(sd1_->energies, sd1_->degeneracy_tolerance());
        for (const auto& blk : blocks) {
            const Eigen::MatrixXd rho_blk =
                rho_eigen_.block(blk.start, blk.start, blk.count, blk.count);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    const Eigen::MatrixXd cross =
                        pr.block(j).middleCols(blk.start, blk.count).transpose() *
                        pr.block(i).middleCols(blk.start, blk.count);
                    rdm(i, j) += (rho_blk.transpose().array() * cross.array()).sum();
                }
        }
        return 0.5 * (rdm + rdm.adjoint().eval());
    }

    /// Exact infinite-time average of an observable supported on the pair.
    double diagonal_ensemble_pair_value(const PairReduction& pr,
                                        const Eigen::Matrix4cd& pair_op) const {
        return (diagonal_ensemble_rdm(pr) * pair_op).trace().real();
    }

    /// Two-site states at the given times.
    ///
    /// Both Hamiltonians commute with the global phase flip, so rho(t) does
    /// too and the pair reduction is block diagonal in pair parity: only the
    /// six parity-even entries (diagonal, (1,2) and (0,3)) can be nonzero.
    /// Each entry is a quadratic form in the phase vector e^{iEt}, evaluated
    /// for all times at once through two real matrix products.
    std::vector<Eigen::Matrix4cd> sampled_rdms(const PairReduction& pr,
                                               const std::vector<double>& times) const {
        require_same_basis(pr);
        const Eigen::Index dim = sd1_->dim();
        const Eigen::Index m = static_cast<Eigen::Index>(times.size());

        Eigen::MatrixXd cosx(dim, m), sinx(dim, m);
        for (Eigen::Index k = 0; k < m; ++k) {
            cosx.col(k) = (sd1_->energies.array() * times[k]).cos();
            sinx.col(k) = (sd1_->energies.array() * times[k]).sin();
        }

        std::vector<Eigen::Matrix4cd> rdms(m, Eigen::Matrix4cd::Zero());
        static constexpr std::array<std::pair<int, int>, 6> kParityEvenEntries{
            {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {1, 2}, {0, 3}}};
        Eigen::MatrixXd freq(dim, dim), gc(dim, m), gs(dim, m);
        for (const auto& [i, j] : kParityEvenEntries) {
            freq.noalias() = pr.block(j).transpose() * pr.block(i);  // A~_ji
            freq.transposeInPlace();
            freq = rho_eigen_.cwiseProduct(freq);  // F_mn = rho_mn A~_nm
            gc.noalias() = freq * cosx;
            gs.noalias() = freq * sinx;
            const Eigen::ArrayXd re = (cosx.array() * gc.array()).colwise().sum() +
                                      (sinx.array() * gs.array()).colwise().sum();
            const Eigen::ArrayXd im = (cosx.array() * gs.array()).colwise().sum() -
                                      (sinx.array() * gc.array()).colwise().sum();
            for (Eigen::Index k = 0; k < m; ++k) {
                const std::complex<double> val(re(k), im(k));
                rdms[k](i, j) += val;
                if (i != j) rdms[k](j, i) += std::conj(val);
            }
        }
        for (auto& r : rdms) r = 0.5 * (r + r.adjoint().eval());
        return rdms;
    }

private:
    void require_same_basis(const PairReduction& pr) const {
        if (&pr.spectral() != sd1_)
            throw std::invalid_argument(
                "pair reduction was built against a different eigenbasis");
    }

    const SpectralDecomposition* sd1_;
    Eigen::MatrixXd rho_eigen_;
};

}  // namespace xyq
