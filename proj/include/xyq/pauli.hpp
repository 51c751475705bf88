#pragma once

#include <Eigen/Dense>
#include <complex>

namespace xyq::pauli {

using cplx = std::complex<double>;

inline Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }

inline Eigen::Matrix2cd x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

inline Eigen::Matrix2cd y() {
    Eigen::Matrix2cd m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

inline Eigen::Matrix2cd z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// op acting on one site of an n-site register (site 0 = most significant bit).
inline Eigen::MatrixXcd site_operator(const Eigen::Matrix2cd& op, int site, int n_sites) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int s = 0; s < n_sites; ++s)
        out = kron(out, s == site ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd(identity()));
    return out;
}

inline Eigen::MatrixXcd two_site_operator(const Eigen::Matrix2cd& op_i, int site_i,
                                          const Eigen::Matrix2cd& op_j, int site_j,
                                          int n_sites) {
    return site_operator(op_i, site_i, n_sites) * site_operator(op_j, site_j, n_sites);
}

}  // namespace xyq::pauli
