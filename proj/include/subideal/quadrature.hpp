#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "subideal/types.hpp"

namespace subideal {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    int subdivisions = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1] (positive half).
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993945,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

template <class F>
void g7k15(const F& f, double a, double b, double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double rk = kWgk[7] * f0;
    double rg = kWg[3] * f0;
    double resabs = kWgk[7] * std::abs(f0);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fl = f(mid - dx);
        const double fr = f(mid + dx);
        rk += kWgk[i] * (fl + fr);
        if (i % 2 == 1) rg += kWg[i / 2] * (fl + fr);
        resabs += kWgk[i] * (std::abs(fl) + std::abs(fr));
    }
    k15 = rk * half;
    const double raw = std::abs(rk - rg) * std::abs(half);
    const double scale = resabs * std::abs(half);
    err = (scale > 0.0) ? scale * std::min(1.0, std::pow(200.0 * raw / scale, 1.5)) : raw;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b]: split the worst interval until the summed
// error estimate meets the global tolerance. Global accounting (rather than
// per-interval budgets) is what lets endpoint singularities converge.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureConfig& qc = {}) {
    qc.validate();
    QuadResult res;
    if (a == b) return res;

    struct Interval {
        double a, b, value, error;
    };
    const auto err_key = [](const Interval& iv) {
        return std::isnan(iv.error) ? INFINITY : iv.error;
    };
    const auto worse = [&](const Interval& x, const Interval& y) {
        return err_key(x) < err_key(y);
    };

    std::vector<Interval> heap;
    double v0, e0;
    detail::g7k15(f, a, b, v0, e0);
    heap.push_back({a, b, v0, e0});

    double frozen_v = 0.0, frozen_e = 0.0;  // intervals too small to split
    double heap_v = v0, heap_e = e0;
    while (!heap.empty()) {
        const double total_v = frozen_v + heap_v;
        const double total_e = frozen_e + heap_e;
        if (total_e <= std::max(qc.abs_tol, qc.rel_tol * std::abs(total_v))) break;
        if (res.subdivisions >= qc.max_subdivisions) {
            res.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), worse);
        const Interval iv = heap.back();
        heap.pop_back();
        heap_v -= iv.value;
        heap_e -= iv.error;

        const double mid = 0.5 * (iv.a + iv.b);
        if (!(iv.a < mid && mid < iv.b)) {
            frozen_v += iv.value;
            frozen_e += iv.error;
            continue;
        }
        ++res.subdivisions;
        double vl, el, vr, er;
        detail::g7k15(f, iv.a, mid, vl, el);
        detail::g7k15(f, mid, iv.b, vr, er);
        heap.push_back({iv.a, mid, vl, el});
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back({mid, iv.b, vr, er});
        std::push_heap(heap.begin(), heap.end(), worse);
        heap_v += vl + vr;
        heap_e += el + er;
    }
    res.value = frozen_v + heap_v;
    res.error = frozen_e + heap_e;
    return res;
}

// Integrate across a strictly increasing breakpoint list, summing segment results.
template <class F>
QuadResult integrate_pts(F&& f, const std::vector<double>& pts, const QuadratureConfig& qc) {
    QuadResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const QuadResult seg = integrate(f, pts[i], pts[i + 1], qc);
        total.value += seg.value;
        total.error += seg.error;
        total.converged = total.converged && seg.converged;
        total.subdivisions += seg.subdivisions;
    }
    return total;
}

// Tail bound for integrals of exp(-a*omega^q) beyond W, valid once
// a*q*W^q >= 2*(1-q): the integrand then halves at least geometrically and
//   int_W^inf exp(-a u^q) du <= 2 * W^(1-q) * exp(-a W^q) / (a q).
inline double exp_power_tail_bound(double a, double q, double W) {
    if (!(a > 0.0 && q > 0.0 && q < 1.0 && W > 0.0)) return INFINITY;
    const double Wq = std::pow(W, q);
    if (a * q * Wq < 2.0 * (1.0 - q)) return INFINITY;
    const double le = -a * Wq;
    if (le < kLogTiny) return 0.0;
    return 2.0 * std::pow(W, 1.0 - q) * std::exp(le) / (a * q);
}

// Decade breakpoints {lo, ..., 10^k, ..., hi} for well-scaled segment budgets.
inline std::vector<double> decade_breakpoints(double lo, double hi) {
    std::vector<double> pts{lo};
    double d = 1.0;
    while (d <= lo) d *= 10.0;
    for (; d < hi; d *= 10.0) pts.push_back(d);
    pts.push_back(hi);
    return pts;
}

}  // namespace subideal
