// golden_section.hpp
// Golden-section search for the maximum of a unimodal scalar function.

#pragma once

#include <cmath>
#include <stdexcept>

namespace qgamble {

struct LineMaximum {
    double argmax;
    double value;
    int iterations;
};

/// Maximizes f on [lo, hi], shrinking the bracket until it is narrower than
/// `tol`. f must be unimodal on the bracket. f may return a wider floating
/// type than double; comparisons are made in that type.
template <typename F>
LineMaximum golden_section_maximize(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 500) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_maximize: empty bracket");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    auto fc = f(c);
    auto fd = f(d);
    int it = 0;
    while (b - a > tol && it < max_iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++it;
    }
    const double x = 0.5 * (a + b);
    return {x, static_cast<double>(f(x)), it};
}

}  // namespace qgamble
