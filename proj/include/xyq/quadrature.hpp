#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xyq {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;

    void validate() const {
        if (abs_tol <= 0 || rel_tol <= 0)
            throw std::invalid_argument("quadrature tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("max_subdivisions must be positive");
    }
};

struct QuadratureError : std::runtime_error {
    double residual_estimate;
    explicit QuadratureError(double residual)
        : std::runtime_error("adaptive quadrature did not converge (residual estimate " +
                             std::to_string(residual) + ")"),
          residual_estimate(residual) {}
};

struct Integral {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Simpson quadrature on [a, b].  Bisects the worst interval until
/// the summed Richardson error estimate meets abs_tol + rel_tol * |integral|,
/// throwing QuadratureError when max_subdivisions is exhausted.
inline Integral integrate(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {}) {
    spec.validate();
    struct Interval {
        double a, b, fa, fm, fb, simpson, error;
    };
    auto make = [&](double lo, double hi, double flo, double fhi) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        Interval iv{lo, hi, flo, fmid, fhi, (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi), 0.0};
        // Error from one further bisection (Richardson).
        const double m1 = 0.5 * (lo + mid), m2 = 0.5 * (mid + hi);
        const double f1 = f(m1), f2 = f(m2);
        const double s_left = (mid - lo) / 6.0 * (flo + 4.0 * f1 + fmid);
        const double s_right = (hi - mid) / 6.0 * (fmid + 4.0 * f2 + fhi);
        iv.error = std::abs(s_left + s_right - iv.simpson) / 15.0;
        iv.simpson = s_left + s_right;  // keep the refined value
        return iv;
    };

    std::vector<Interval> heap;
    heap.push_back(make(a, b, f(a), f(b)));
    auto cmp = [](const Interval& x, const Interval& y) { return x.error < y.error; };
    std::make_heap(heap.begin(), heap.end(), cmp);

    for (int iter = 0; iter < spec.max_subdivisions; ++iter) {
        double total = 0.0, err = 0.0;
        for (const auto& iv : heap) {
            total += iv.simpson;
            err += iv.error;
        }
        if (err <= spec.abs_tol + spec.rel_tol * std::abs(total))
            return Integral{total, err};
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const Interval worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        heap.push_back(make(worst.a, mid, worst.fa, worst.fm));
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(make(mid, worst.b, worst.fm, worst.fb));
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    double err = 0.0;
    for (const auto& iv : heap) err += iv.error;
    throw QuadratureError(err);
}

/// Fixed-grid composite Simpson rule; the independent cross-check used by the
/// self-consistency tests.
inline double composite_simpson(const std::function<double(double)>& f, double a, double b,
                                int n_intervals) {
    if (n_intervals < 2 || n_intervals % 2 != 0)
        throw std::invalid_argument("composite Simpson needs an even interval count >= 2");
    const double h = (b - a) / n_intervals;
    double acc = f(a) + f(b);
    for (int k = 1; k < n_intervals; ++k)
        acc += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace xyq
