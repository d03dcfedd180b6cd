#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mmnorm/errors.hpp"

namespace mmnorm {

struct QuadratureControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    std::size_t max_panels = 20000;

    bool operator==(const QuadratureControl&) const = default;
};

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;  // conservative bound from the embedded rule
};

namespace quad_detail {

// Gauss-Kronrod 7-15 pair on [-1, 1]. Nodes with gauss weight zero belong to
// the Kronrod extension only.
struct Node {
    double x;
    double gauss;
    double kronrod;
};

inline constexpr Node kG7K15[] = {
    {0.0000000000000000, 0.4179591836734694, 0.2094821410847278},
    {0.2077849550078985, 0.0000000000000000, 0.2044329400752989},
    {0.4058451513773972, 0.3818300505051189, 0.1903505780647854},
    {0.5860872354676911, 0.0000000000000000, 0.1690047266392679},
    {0.7415311855993945, 0.2797053914892767, 0.1406532597155259},
    {0.8648644233597691, 0.0000000000000000, 0.1047900103222502},
    {0.9491079123427585, 0.1294849661688697, 0.0630920926299786},
    {0.9914553711208126, 0.0000000000000000, 0.0229353220105292},
};

template <class F>
inline IntegralEstimate g7k15(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double gauss = kG7K15[0].gauss * f(mid);
    double kronrod = kG7K15[0].kronrod * f(mid);
    for (std::size_t i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i].x;
        const double pair = f(mid - dx) + f(mid + dx);
        gauss += kG7K15[i].gauss * pair;
        kronrod += kG7K15[i].kronrod * pair;
    }
    gauss *= half;
    kronrod *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

}  // namespace quad_detail

/// Adaptive integration of f over [a, b] by bisecting the panel with the
/// largest embedded-rule error until the summed error meets
/// max(abs_tol, rel_tol * |integral|). Throws numeric_error (carrying the
/// error bound actually reached) if the panel budget runs out first.
template <class F>
IntegralEstimate integrate_adaptive(const F& f, double a, double b,
                                    const QuadratureControl& control = {}) {
    if (!(a <= b)) throw std::domain_error("integrate_adaptive: need a <= b");
    if (a == b) return {0.0, 0.0};

    struct Panel {
        double a, b;
        IntegralEstimate est;
    };
    const auto by_error = [](const Panel& lhs, const Panel& rhs) {
        return lhs.est.error < rhs.est.error;
    };

    std::vector<Panel> panels;  // max-heap on panel error
    panels.push_back({a, b, quad_detail::g7k15(f, a, b)});
    double total = panels[0].est.value;
    double err = panels[0].est.error;

    const auto resummed = [&panels] {
        IntegralEstimate sum;
        for (const Panel& p : panels) {
            sum.value += p.est.value;
            sum.error += p.est.error;
        }
        return sum;
    };

    while (true) {
        if (err <= std::max(control.abs_tol, control.rel_tol * std::abs(total)))
            return resummed();
        if (panels.size() >= control.max_panels)
            throw numeric_error("integrate_adaptive: panel budget exhausted",
                                resummed().error);

        std::pop_heap(panels.begin(), panels.end(), by_error);
        const Panel p = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b)
            throw numeric_error("integrate_adaptive: panel underflow",
                                resummed().error + p.est.error);

        const Panel left{p.a, mid, quad_detail::g7k15(f, p.a, mid)};
        const Panel right{mid, p.b, quad_detail::g7k15(f, mid, p.b)};
        total += left.est.value + right.est.value - p.est.value;
        err += left.est.error + right.est.error - p.est.error;
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), by_error);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), by_error);
    }
}

}  // namespace mmnorm
