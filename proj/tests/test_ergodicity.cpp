#include <catch_amalgamated.hpp>

#include <cmath>

#include "xyq/ergodicity.hpp"

using namespace xyq;
using Catch::Approx;

namespace {

EquilibriumCurve make_curve(double lo, double hi, int count,
                            const std::function<double(double)>& f, bool attach_eval = true) {
    EquilibriumCurve c;
    c.quantity = "test";
    for (int k = 0; k < count; ++k) {
        const double bt = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
        c.points.push_back({bt, f(bt), 0.0});
    }
    if (attach_eval) c.evaluator = f;
    return c;
}

double tanh_curve(double bt) { return std::tanh(bt); }

}  // namespace

TEST_CASE("curve validation") {
    EquilibriumCurve sparse = make_curve(0.01, 100.0, 8, tanh_curve);
    CHECK_THROWS_AS(sparse.validate(), std::invalid_argument);

    EquilibriumCurve ok = make_curve(0.01, 1000.0, 40, tanh_curve);
    CHECK_NOTHROW(ok.validate(20.0));
    CHECK_THROWS_AS(ok.validate(1e5), std::invalid_argument);  // span too small

    EquilibriumCurve unordered = ok;
    std::swap(unordered.points[3], unordered.points[4]);
    CHECK_THROWS_AS(unordered.validate(), std::invalid_argument);
}

TEST_CASE("sign-change crossing is refined by bisection") {
    const EquilibriumCurve c = make_curve(0.01, 1000.0, 40, tanh_curve);
    const auto xs = find_crossings(0.5, c, 1e-6);
    REQUIRE(xs.size() == 1u);
    CHECK_FALSE(xs[0].touching);
    CHECK(xs[0].beta_tilde == Approx(std::atanh(0.5)).epsilon(1e-5));
}

TEST_CASE("no crossing when the target is outside the curve range") {
    const EquilibriumCurve c = make_curve(0.01, 1000.0, 40, tanh_curve);
    CHECK(find_crossings(2.0, c, 1e-6).empty());
    CHECK(find_crossings(-0.5, c, 1e-6).empty());
}

TEST_CASE("touching crossings are caught by the match tolerance") {
    // Peaked curve with maximum 0.5 at bt = 1; target slightly above the peak.
    auto peak = [](double bt) { return 1.0 / (bt + 1.0 / bt); };
    const EquilibriumCurve c = make_curve(0.001, 1000.0, 61, peak);
    CHECK(find_crossings(0.5004, c, 1e-6).empty());
    const auto xs = find_crossings(0.5004, c, 5e-4 + 4e-4);
    REQUIRE_FALSE(xs.empty());
    CHECK(xs.front().touching);
    CHECK(xs.front().beta_tilde == Approx(1.0).epsilon(0.1));
}

TEST_CASE("without an evaluator, dense grids interpolate and sparse grids ask for refinement") {
    const EquilibriumCurve dense = make_curve(0.01, 1000.0, 200, tanh_curve, false);
    const auto xs = find_crossings(0.5, dense, 1e-9);
    REQUIRE(xs.size() == 1u);
    CHECK(xs[0].beta_tilde == Approx(std::atanh(0.5)).epsilon(0.01));

    const EquilibriumCurve sparse = make_curve(0.01, 1000.0, 20, tanh_curve, false);
    CHECK_THROWS_AS(find_crossings(0.5, sparse, 1e-9), CurveRefinementNeeded);
}

TEST_CASE("classifier: ergodic inside the band, nonergodic outside, strong when absent") {
    const EquilibriumCurve c = make_curve(0.001, 10000.0, 80, tanh_curve);

    const ErgodicityVerdict erg = classify(0.5, c, 1.0, 12.0, 1e-6);
    CHECK(erg.verdict == Verdict::Ergodic);
    REQUIRE(erg.crossing_beta_tilde.has_value());
    CHECK(*erg.crossing_beta_tilde == Approx(std::atanh(0.5)).epsilon(1e-4));
    CHECK(erg.band_lo == Approx(1.0 / 12.0));
    CHECK(erg.band_hi == Approx(12.0));

    const ErgodicityVerdict non = classify(0.5, c, 1000.0, 12.0, 1e-6);
    CHECK(non.verdict == Verdict::Nonergodic);
    REQUIRE(non.crossing_beta_tilde.has_value());
    CHECK(*non.crossing_beta_tilde == Approx(std::atanh(0.5)).epsilon(1e-4));

    const ErgodicityVerdict strong = classify(2.0, c, 1.0, 12.0, 1e-6);
    CHECK(strong.verdict == Verdict::StronglyNonergodic);
    CHECK_FALSE(strong.crossing_beta_tilde.has_value());
}

TEST_CASE("identically zero curve against a nonzero value is strongly nonergodic") {
    const EquilibriumCurve zero = make_curve(0.001, 10000.0, 40, [](double) { return 0.0; });
    const ErgodicityVerdict v = classify(0.25, zero, 20.0);
    CHECK(v.verdict == Verdict::StronglyNonergodic);
    // A zero long-time value on a zero curve touches everywhere: ergodic.
    const ErgodicityVerdict v0 = classify(0.0, zero, 20.0);
    CHECK(v0.verdict == Verdict::Ergodic);
}

TEST_CASE("classification is deterministic and scale-consistent") {
    const EquilibriumCurve c = make_curve(0.001, 10000.0, 80, tanh_curve);
    const ErgodicityVerdict v1 = classify(0.5, c, 1.0, 12.0, 1e-6);
    const ErgodicityVerdict v2 = classify(0.5, c, 1.0, 12.0, 1e-6);
    CHECK(v1.verdict == v2.verdict);
    CHECK(*v1.crossing_beta_tilde == *v2.crossing_beta_tilde);

    // Shifting both curve and target by a constant must not change the verdict.
    auto shifted = make_curve(0.001, 10000.0, 80,
                              [](double bt) { return std::tanh(bt) + 0.3; });
    const ErgodicityVerdict v3 = classify(0.8, shifted, 1.0, 12.0, 1e-6);
    CHECK(v3.verdict == v1.verdict);
    CHECK(*v3.crossing_beta_tilde == Approx(*v1.crossing_beta_tilde).epsilon(1e-4));
}

TEST_CASE("widening the band can only keep or gain ergodicity") {
    const EquilibriumCurve c = make_curve(0.001, 10000.0, 80, tanh_curve);
    const ErgodicityVerdict narrow = classify(0.5, c, 20.0, 10.0, 1e-6);
    const ErgodicityVerdict wide = classify(0.5, c, 20.0, 100.0, 1e-6);
    CHECK(narrow.verdict == Verdict::Nonergodic);
    CHECK(wide.verdict == Verdict::Ergodic);
}

TEST_CASE("verdict serialization") {
    const EquilibriumCurve c = make_curve(0.001, 10000.0, 80, tanh_curve);
    const nlohmann::json j = classify(0.5, c, 1.0, 12.0, 1e-6).to_json();
    CHECK(j["verdict"] == "Ergodic");
    CHECK(j["band"].size() == 2u);
    CHECK(j["crossing_beta_tilde"].is_number());
}

TEST_CASE("classifier argument validation") {
    const EquilibriumCurve c = make_curve(0.001, 10000.0, 80, tanh_curve);
    CHECK_THROWS_AS(classify(0.5, c, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(classify(0.5, c, 1.0, 0.5), std::invalid_argument);
}
