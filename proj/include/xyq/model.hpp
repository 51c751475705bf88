#pragma once

#include <cmath>
#include <stdexcept>

namespace xyq {

/// Couplings of the transverse anisotropic XY model.
///
/// The interaction is J * sum_<ij> [(1+gamma) Sx_i Sx_j + (1-gamma) Sy_i Sy_j]
/// with S = sigma/2, and the field term is -h * sum_i Sz_i.  All published
/// quantities depend only on the dimensionless combinations a_tilde = a/J and
/// beta_tilde = beta*J, so J = 1 is the canonical run configuration.
struct ModelParams {
    double coupling_J = 1.0;
    double gamma = 0.5;
    double field_a = 0.0;  // initial field; the post-quench field is zero

    ModelParams() = default;
    ModelParams(double J, double g, double a) : coupling_J(J), gamma(g), field_a(a) {
        validate();
    }

    void validate() const {
        if (coupling_J == 0.0 || !std::isfinite(coupling_J))
            throw std::invalid_argument("coupling_J must be nonzero and finite");
        if (gamma == 0.0 || !std::isfinite(gamma))
            throw std::invalid_argument("gamma must be nonzero and finite");
        if (!std::isfinite(field_a))
            throw std::invalid_argument("field_a must be finite");
    }

    double a_tilde() const { return field_a / coupling_J; }
    double beta_tilde(double beta) const { return beta * coupling_J; }
};

}  // namespace xyq
