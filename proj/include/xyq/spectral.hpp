#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

#include "xyq/hamiltonian.hpp"

namespace xyq {

/// Eigendecomposition of a real symmetric operator: energies ascending,
/// columns of `vectors` are the orthonormal eigenvectors.
struct SpectralDecomposition {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;

    Eigen::Index dim() const { return energies.size(); }
    double spectral_width() const { return energies(energies.size() - 1) - energies(0); }
    double ground_energy() const { return energies(0); }

    /// Degeneracy gap tolerance: 1e-10 times the spectral width.
    double degeneracy_tolerance() const {
        const double w = spectral_width();
        return 1e-10 * (w > 0 ? w : 1.0);
    }
};

inline SpectralDecomposition spectral_decompose(const HermitianOperator& H) {
    if (H.mat.rows() != H.mat.cols())
        throw std::invalid_argument("operator not square");
    const double scale = H.mat.cwiseAbs().maxCoeff();
    if (H.hermiticity_defect() > 1e-12 * (scale > 0 ? scale : 1.0))
        throw std::invalid_argument("operator not symmetric");
    SpectralDecomposition sd;
    const lapack_int n = static_cast<lapack_int>(H.mat.rows());
    sd.vectors = H.mat;
    sd.energies.resize(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                           sd.vectors.data(), n, sd.energies.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return sd;
}

/// Contiguous index ranges [start, start+count) of energy-degenerate levels,
/// detected with the given gap tolerance.
struct DegenerateBlock {
    Eigen::Index start;
    Eigen::Index count;
};

inline std::vector<DegenerateBlock> degenerate_blocks(const Eigen::VectorXd& energies,
                                                      double gap_tol) {
    std::vector<DegenerateBlock> blocks;
    Eigen::Index i = 0;
    const Eigen::Index n = energies.size();
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && energies(j + 1) - energies(j) < gap_tol) ++j;
        blocks.push_back({i, j - i + 1});
        i = j + 1;
    }
    return blocks;
}

}  // namespace xyq
