#include <catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "xyq/dynamics.hpp"
#include "xyq/hamiltonian.hpp"
#include "xyq/pauli.hpp"
#include "xyq/spectral.hpp"

using namespace xyq;
using Catch::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SpectralDecomposition decompose_chain(int n, double g, double h) {
    const Lattice lat = build_lattice(LatticeKind::Chain, {n, 1});
    return spectral_decompose(build_hamiltonian(lat, {1.0, g, 0.0}, h));
}

DensityMatrix random_state(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd A(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            A(i, j) = std::complex<double>(dist(rng), dist(rng));
    Eigen::MatrixXcd rho = A * A.adjoint();
    rho /= rho.trace();
    return DensityMatrix{rho};
}

}  // namespace

TEST_CASE("eigendecomposition reproduces the operator and is orthonormal") {
    const SpectralDecomposition sd = decompose_chain(5, 0.5, 0.7);
    const Lattice lat = build_lattice(LatticeKind::Chain, {5, 1});
    const HermitianOperator H = build_hamiltonian(lat, {1.0, 0.5, 0.0}, 0.7);
    CHECK((sd.vectors.transpose() * sd.vectors -
           Eigen::MatrixXd::Identity(sd.dim(), sd.dim()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((H.mat * sd.vectors - sd.vectors * sd.energies.asDiagonal())
              .cwiseAbs()
              .maxCoeff() < 1e-11);
    for (Eigen::Index k = 1; k < sd.dim(); ++k)
        CHECK(sd.energies(k) >= sd.energies(k - 1));
}

TEST_CASE("asymmetric input is rejected") {
    HermitianOperator H;
    H.mat.resize(2, 2);
    H.mat << 0, 1, 0, 0;
    CHECK_THROWS_AS(spectral_decompose(H), std::invalid_argument);
}

TEST_CASE("degenerate blocks partition the spectrum") {
    Eigen::VectorXd e(6);
    e << 0.0, 0.0, 1.0, 1.0 + 1e-14, 2.0, 3.0;
    const auto blocks = degenerate_blocks(e, 1e-10);
    REQUIRE(blocks.size() == 4u);
    CHECK(blocks[0].count == 2);
    CHECK(blocks[1].count == 2);
    CHECK(blocks[2].count == 1);
    CHECK(blocks[3].count == 1);
    Eigen::Index covered = 0;
    for (const auto& b : blocks) covered += b.count;
    CHECK(covered == e.size());
}

TEST_CASE("infinite-temperature state is maximally mixed") {
    const SpectralDecomposition sd = decompose_chain(4, 0.5, 0.3);
    const DensityMatrix rho = thermal_state(sd, 0.0);
    CHECK((rho.mat - Eigen::MatrixXcd::Identity(16, 16) / 16.0).cwiseAbs().maxCoeff() <
          1e-13);
}

TEST_CASE("single-spin thermal magnetization is tanh(beta h / 2)") {
    HermitianOperator H;
    H.mat = Eigen::MatrixXd::Zero(2, 2);
    const double h = 0.8;
    H.mat(0, 0) = -0.5 * h;  // spin up
    H.mat(1, 1) = 0.5 * h;
    const SpectralDecomposition sd = spectral_decompose(H);
    for (double beta : {0.1, 1.0, 5.0}) {
        const DensityMatrix rho = thermal_state(sd, beta);
        const double mz = (rho.mat(0, 0) - rho.mat(1, 1)).real();
        CHECK(mz == Approx(std::tanh(0.5 * beta * h)).margin(1e-12));
    }
}

TEST_CASE("zero-temperature limit is the uniform ground-block mixture") {
    const SpectralDecomposition sd = decompose_chain(4, 0.5, 0.0);
    const DensityMatrix rho = thermal_state(sd, kInf);
    rho.validate();
    // Expectation of H equals the ground energy.
    const Lattice lat = build_lattice(LatticeKind::Chain, {4, 1});
    const HermitianOperator H = build_hamiltonian(lat, {1.0, 0.5, 0.0}, 0.0);
    const double e = (rho.mat * H.mat.cast<std::complex<double>>()).trace().real();
    CHECK(e == Approx(sd.ground_energy()).margin(1e-10));
}

TEST_CASE("negative beta is rejected") {
    const SpectralDecomposition sd = decompose_chain(3, 0.5, 0.0);
    CHECK_THROWS_AS(thermal_weights(sd, -1.0), std::invalid_argument);
}

TEST_CASE("evolution: identity at t = 0, thermal states stationary, spectrum kept") {
    const SpectralDecomposition sd = decompose_chain(4, 0.5, 0.0);
    const DensityMatrix rho0 = random_state(16, 7);

    const DensityMatrix r0 = evolve(rho0, sd, 0.0);
    CHECK((r0.mat - rho0.mat).cwiseAbs().maxCoeff() < 1e-12);

    const DensityMatrix th = thermal_state(sd, 1.5);
    const DensityMatrix th_t = evolve(th, sd, 3.7);
    CHECK((th_t.mat - th.mat).cwiseAbs().maxCoeff() < 1e-11);

    const DensityMatrix rt = evolve(rho0, sd, 2.3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e0(rho0.mat, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(rt.mat, Eigen::EigenvaluesOnly);
    CHECK((e0.eigenvalues() - e1.eigenvalues()).cwiseAbs().maxCoeff() < 1e-11);

    // Energy is conserved along the trajectory.
    const Lattice lat = build_lattice(LatticeKind::Chain, {4, 1});
    const Eigen::MatrixXcd Hc =
        build_hamiltonian(lat, {1.0, 0.5, 0.0}, 0.0).mat.cast<std::complex<double>>();
    const double en0 = (rho0.mat * Hc).trace().real();
    const double en1 = (rt.mat * Hc).trace().real();
    CHECK(en1 == Approx(en0).margin(1e-10));
}

TEST_CASE("diagonal ensemble preserves conserved quantities and stationary states") {
    const SpectralDecomposition sd = decompose_chain(4, 0.5, 0.0);
    const Lattice lat = build_lattice(LatticeKind::Chain, {4, 1});
    const Eigen::MatrixXcd Hc =
        build_hamiltonian(lat, {1.0, 0.5, 0.0}, 0.0).mat.cast<std::complex<double>>();
    const DensityMatrix rho0 = random_state(16, 11);

    const double e_avg = diagonal_ensemble_expectation(rho0, sd, Hc);
    CHECK(e_avg == Approx((rho0.mat * Hc).trace().real()).margin(1e-10));

    // An eigenprojector's long-time average equals its initial occupation.
    const Eigen::VectorXd v = sd.vectors.col(3);
    const Eigen::MatrixXcd proj =
        (v * v.transpose()).cast<std::complex<double>>();
    CHECK(diagonal_ensemble_expectation(rho0, sd, proj) ==
          Approx((rho0.mat * proj).trace().real()).margin(1e-10));
}

TEST_CASE("non-Hermitian observable is rejected") {
    const SpectralDecomposition sd = decompose_chain(3, 0.5, 0.0);
    const DensityMatrix rho0 = random_state(8, 3);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(8, 8);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(diagonal_ensemble_expectation(rho0, sd, bad), std::invalid_argument);
}

TEST_CASE("time samples are deterministic, in range, and summarized correctly") {
    SamplingPlan plan;
    plan.n_samples = 500;
    plan.t_max = 123.0;
    plan.seed = 42;
    const auto t1 = sample_times(plan);
    const auto t2 = sample_times(plan);
    REQUIRE(t1.size() == 500u);
    CHECK(t1 == t2);
    for (double t : t1) {
        CHECK(t >= 0.0);
        CHECK(t < plan.t_max);
    }
    plan.seed = 43;
    CHECK(sample_times(plan) != t1);

    const TimeAverageResult s = summarize_samples({1.0, 2.0, 3.0}, plan);
    CHECK(s.mean == Approx(2.0));
    CHECK(s.std_error == Approx(1.0 / std::sqrt(3.0)));
    CHECK(s.n_samples == 3);
}

TEST_CASE("diagonal ensemble matches time-sampled average for a linear observable") {
    // Quench on a 6-site ring: thermal state of the field Hamiltonian evolved
    // by the zero-field one.
    const int n = 6;
    const Lattice lat = build_lattice(LatticeKind::Chain, {n, 1});
    const SpectralDecomposition sd1 =
        spectral_decompose(build_hamiltonian(lat, {1.0, 0.5, 0.0}, 0.0));
    const SpectralDecomposition sd0 =
        spectral_decompose(build_hamiltonian(lat, {1.0, 0.5, 0.0}, 0.6));
    const DensityMatrix rho0 = thermal_state(sd0, 20.0);

    const Eigen::MatrixXcd obs =
        pauli::two_site_operator(pauli::y(), 0, pauli::y(), 1, n);
    const double de = diagonal_ensemble_expectation(rho0, sd1, obs);

    SamplingPlan plan;
    plan.n_samples = 400;
    plan.t_max = 1000.0;
    const auto f = [&](const DensityMatrix& r2) {
        return (r2.mat * pauli::kron(pauli::y(), pauli::y())).trace().real();
    };
    const TimeAverageResult avg =
        time_sampled_average(rho0, sd1, {0, 1}, n, f, plan);
    CHECK(std::abs(avg.mean - de) < 3.0 * std::max(avg.std_error, 1e-12));
}
