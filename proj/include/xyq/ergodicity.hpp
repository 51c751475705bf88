#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xyq {

struct CurvePoint {
    double beta_tilde;
    double value;
    double error_estimate = 0.0;
};

/// Canonical-equilibrium curve of one quantity at the post-quench field
/// (h = 0), on a log-spaced beta_tilde grid.  When an evaluator is attached,
/// crossings are refined by bisection against it; without one the curve is
/// interpolated log-linearly and refinement requests are raised when a
/// crossing bracket is too wide.
struct EquilibriumCurve {
    std::string quantity;
    std::vector<CurvePoint> points;
    std::function<double(double)> evaluator;  // optional

    void validate(double beta_init = 0.0) const {
        if (points.size() < 16) throw std::invalid_argument("curve needs >= 16 points");
        for (std::size_t k = 1; k < points.size(); ++k)
            if (points[k].beta_tilde <= points[k - 1].beta_tilde)
                throw std::invalid_argument("curve grid must be strictly increasing");
        if (beta_init > 0.0) {
            if (points.front().beta_tilde > beta_init / 10.0 ||
                points.back().beta_tilde < beta_init * 10.0)
                throw std::invalid_argument(
                    "curve must span at least [beta_init/10, 10*beta_init]");
        }
    }
};

struct CurveRefinementNeeded : std::runtime_error {
    double beta_lo, beta_hi;
    CurveRefinementNeeded(double lo, double hi)
        : std::runtime_error("equilibrium curve too sparse near a crossing in beta_tilde "
                             "bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "]"),
          beta_lo(lo), beta_hi(hi) {}
};

struct Crossing {
    double beta_tilde;
    bool touching;  // reported because |curve - q| <= match_tol, not a sign change
};

/// All solutions of curve(beta_tilde) = q_infinity: sign changes refined by
/// bisection to relative 1e-6 in beta_tilde, plus grid points within
/// match_tol reported as touching crossings.
inline std::vector<Crossing> find_crossings(double q_infinity, const EquilibriumCurve& curve,
                                            double match_tol) {
    curve.validate();
    std::vector<Crossing> out;

    auto residual = [&](double bt) { return curve.evaluator(bt) - q_infinity; };
    auto bisect = [&](double lo, double hi, double flo) {
        while ((hi - lo) > 1e-6 * hi) {
            const double mid = std::sqrt(lo * hi);  // bisection in log space
            const double fm = residual(mid);
            if ((fm >= 0.0) == (flo >= 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        const auto& p = curve.points[k];
        if (std::abs(p.value - q_infinity) <= match_tol) {
            out.push_back({p.beta_tilde, true});
            continue;
        }
        if (k == 0) continue;
        const auto& prev = curve.points[k - 1];
        const double f0 = prev.value - q_infinity, f1 = p.value - q_infinity;
        if ((f0 < 0.0) == (f1 < 0.0)) continue;
        if (std::abs(f0) <= match_tol) continue;  // already reported as touching
        if (curve.evaluator) {
            out.push_back({bisect(prev.beta_tilde, p.beta_tilde, f0), false});
        } else {
            if (p.beta_tilde / prev.beta_tilde > 1.5)
                throw CurveRefinementNeeded(prev.beta_tilde, p.beta_tilde);
            // Log-linear interpolation on the grid.
            const double t = f0 / (f0 - f1);
            out.push_back({prev.beta_tilde *
                               std::pow(p.beta_tilde / prev.beta_tilde, t),
                           false});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Crossing& a, const Crossing& b) { return a.beta_tilde < b.beta_tilde; });
    return out;
}

enum class Verdict { Ergodic, Nonergodic, StronglyNonergodic };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Ergodic: return "Ergodic";
    case Verdict::Nonergodic: return "Nonergodic";
    case Verdict::StronglyNonergodic: return "StronglyNonergodic";
    }
    throw std::logic_error("unknown Verdict");
}

struct ErgodicityVerdict {
    Verdict verdict;
    std::optional<double> crossing_beta_tilde;  // in-band crossing if Ergodic,
                                                // nearest crossing if Nonergodic
    double band_lo = 0.0, band_hi = 0.0;        // in beta_tilde
    double match_tolerance = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["verdict"] = to_string(verdict);
        if (crossing_beta_tilde)
            j["crossing_beta_tilde"] = *crossing_beta_tilde;
        else
            j["crossing_beta_tilde"] = nullptr;
        j["band"] = {band_lo, band_hi};
        j["match_tolerance"] = match_tolerance;
        return j;
    }
};

inline constexpr double kDefaultBandFactor = 12.0;
inline constexpr double kDefaultMatchTol = 5e-4;

/// Compares a long-time average against the canonical curve.  Ergodic when a
/// crossing lies inside the temperature band [beta_init/band_factor,
/// beta_init*band_factor]; Nonergodic when crossings exist only outside it;
/// StronglyNonergodic when no crossing exists on the searched range.  A curve
/// that is identically zero against a nonzero long-time average short-circuits
/// to StronglyNonergodic regardless of the searched range.
inline ErgodicityVerdict classify(double q_infinity, const EquilibriumCurve& curve,
                                  double beta_init,
                                  double band_factor = kDefaultBandFactor,
                                  double match_tol = kDefaultMatchTol) {
    if (band_factor <= 1.0) throw std::invalid_argument("band_factor must exceed 1");
    if (beta_init <= 0.0) throw std::invalid_argument("beta_init must be positive");
    curve.validate(beta_init);

    ErgodicityVerdict v;
    v.band_lo = beta_init / band_factor;
    v.band_hi = beta_init * band_factor;
    v.match_tolerance = match_tol;

    double curve_max_abs = 0.0;
    for (const auto& p : curve.points) curve_max_abs = std::max(curve_max_abs, std::abs(p.value));
    if (curve_max_abs <= 1e-12 && std::abs(q_infinity) > match_tol) {
        v.verdict = Verdict::StronglyNonergodic;
        return v;
    }

    const auto crossings = find_crossings(q_infinity, curve, match_tol);
    if (crossings.empty()) {
        v.verdict = Verdict::StronglyNonergodic;
        return v;
    }
    for (const auto& c : crossings)
        if (c.beta_tilde >= v.band_lo && c.beta_tilde <= v.band_hi) {
            v.verdict = Verdict::Ergodic;
            v.crossing_beta_tilde = c.beta_tilde;
            return v;
        }
    v.verdict = Verdict::Nonergodic;
    double best = crossings.front().beta_tilde;
    for (const auto& c : crossings) {
        auto dist = [&](double bt) {
            return std::abs(std::log(bt) - std::log(std::clamp(bt, v.band_lo, v.band_hi)));
        };
        if (dist(c.beta_tilde) < dist(best)) best = c.beta_tilde;
    }
    v.crossing_beta_tilde = best;
    return v;
}

}  // namespace xyq
