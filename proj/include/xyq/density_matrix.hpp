#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <vector>

namespace xyq {

/// Hermitian, unit-trace, positive-semidefinite matrix on a 2^N space
/// (or a 4x4 two-site reduction).
struct DensityMatrix {
    Eigen::MatrixXcd mat;

    Eigen::Index dim() const { return mat.rows(); }

    double hermiticity_defect() const {
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
    }
    double trace_defect() const { return std::abs(mat.trace() - std::complex<double>(1.0)); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (mat + mat.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    void validate(double herm_tol = 1e-12, double trace_tol = 1e-12,
                  double psd_tol = 1e-9) const {
        if (mat.rows() != mat.cols()) throw std::invalid_argument("density matrix not square");
        if (hermiticity_defect() > herm_tol)
            throw std::invalid_argument("density matrix not Hermitian");
        if (trace_defect() > trace_tol)
            throw std::invalid_argument("density matrix trace differs from 1");
        if (min_eigenvalue() < -psd_tol)
            throw std::invalid_argument("density matrix has a significantly negative eigenvalue");
    }
};

/// Traces out all sites not listed in keep_sites.  Output tensor factors are
/// ordered as in keep_sites.  Site 0 is the most significant bit.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep_sites,
                                   int n_sites) {
    if (keep_sites.empty()) throw std::invalid_argument("keep_sites must not be empty");
    {
        std::vector<int> sorted = keep_sites;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("keep_sites contains duplicates");
        if (sorted.front() < 0 || sorted.back() >= n_sites)
            throw std::invalid_argument("keep_sites out of range");
    }
    const std::uint64_t dim = std::uint64_t{1} << n_sites;
    if (rho.mat.rows() != static_cast<Eigen::Index>(dim))
        throw std::invalid_argument("density matrix dimension does not match n_sites");

    const int n_keep = static_cast<int>(keep_sites.size());
    std::vector<int> traced;
    for (int s = 0; s < n_sites; ++s)
        if (std::find(keep_sites.begin(), keep_sites.end(), s) == keep_sites.end())
            traced.push_back(s);
    const int n_tr = static_cast<int>(traced.size());

    auto assemble = [&](std::uint64_t keep_idx, std::uint64_t tr_idx) {
        std::uint64_t full = 0;
        for (int k = 0; k < n_keep; ++k)
            if ((keep_idx >> (n_keep - 1 - k)) & 1u)
                full |= std::uint64_t{1} << (n_sites - 1 - keep_sites[k]);
        for (int k = 0; k < n_tr; ++k)
            if ((tr_idx >> (n_tr - 1 - k)) & 1u)
                full |= std::uint64_t{1} << (n_sites - 1 - traced[k]);
        return full;
    };

    const std::uint64_t dk = std::uint64_t{1} << n_keep;
    const std::uint64_t dt = std::uint64_t{1} << n_tr;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (std::uint64_t a = 0; a < dk; ++a)
        for (std::uint64_t b = 0; b < dk; ++b)
            for (std::uint64_t s = 0; s < dt; ++s)
                out(a, b) += rho.mat(assemble(a, s), assemble(b, s));
    return DensityMatrix{std::move(out)};
}

}  // namespace xyq
