#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "xyq/lattice.hpp"
#include "xyq/model.hpp"

namespace xyq {

/// Basis conventions for the 2^N computational basis.
///
/// Site i maps to bit (N-1-i) of the basis index, so site 0 is the most
/// significant bit.  Bit value 0 is spin up (Sz = +1/2).
namespace basis {

inline int bit_of(std::uint64_t state, int site, int n_sites) {
    return static_cast<int>((state >> (n_sites - 1 - site)) & 1u);
}

inline std::uint64_t flip_mask(int site_i, int site_j, int n_sites) {
    return (std::uint64_t{1} << (n_sites - 1 - site_i)) |
           (std::uint64_t{1} << (n_sites - 1 - site_j));
}

}  // namespace basis

/// Dense Hermitian operator on the 2^N spin space.  The XY Hamiltonian is
/// real in the computational basis, so entries are stored as a real
/// symmetric matrix; complex consumers should promote with .cast().
struct HermitianOperator {
    Eigen::MatrixXd mat;

    Eigen::Index dim() const { return mat.rows(); }
    double hermiticity_defect() const {
        return (mat - mat.transpose()).cwiseAbs().maxCoeff();
    }
};

inline constexpr int kMaxSites = 14;  // dense 2^14 = 16384 is the memory budget cap

/// Builds H = J sum_<ij> [(1+g) Sx_i Sx_j + (1-g) Sy_i Sy_j] - h sum_i Sz_i
/// with S = sigma/2.  Matrix elements in the computational basis:
///   Sx_i Sx_j flips both bits with amplitude 1/4;
///   Sy_i Sy_j flips both bits with amplitude -1/4 if the bits are equal,
///   +1/4 if they differ;
///   Sz_i is diagonal with +-1/2.
inline HermitianOperator build_hamiltonian(const Lattice& lat, const ModelParams& params,
                                           double field_h) {
    params.validate();
    const int n = lat.n_sites;
    if (n > kMaxSites)
        throw std::invalid_argument("lattice exceeds the dense-matrix site cap (" +
                                    std::to_string(kMaxSites) + " sites)");
    const std::uint64_t dim = std::uint64_t{1} << n;
    const double J = params.coupling_J, g = params.gamma;

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [i, j] : lat.bonds) {
        const std::uint64_t mask = basis::flip_mask(i, j, n);
        for (std::uint64_t b = 0; b < dim; ++b) {
            const bool same = basis::bit_of(b, i, n) == basis::bit_of(b, j, n);
            const double xx = 0.25 * (1.0 + g);
            const double yy = 0.25 * (1.0 - g) * (same ? -1.0 : 1.0);
            H(b ^ mask, b) += J * (xx + yy);
        }
    }
    if (field_h != 0.0) {
        for (std::uint64_t b = 0; b < dim; ++b) {
            double sz_sum = 0.0;
            for (int i = 0; i < n; ++i) sz_sum += basis::bit_of(b, i, n) ? -0.5 : 0.5;
            H(b, b) -= field_h * sz_sum;
        }
    }
    return HermitianOperator{std::move(H)};
}

/// Global phase flip Pi_i sigma_i^z as a diagonal sign vector.
inline Eigen::VectorXd parity_diagonal(int n_sites) {
    const std::uint64_t dim = std::uint64_t{1} << n_sites;
    Eigen::VectorXd p(dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
        int ones = 0;
        for (int i = 0; i < n_sites; ++i) ones += basis::bit_of(b, i, n_sites);
        p(b) = (ones % 2 == 0) ? 1.0 : -1.0;
    }
    return p;
}

}  // namespace xyq
