#pragma once

// Slow reference implementations, independent of the library code paths:
// long double scalar evaluation, O(n^2) DFT, adaptive Simpson quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

inline long double log_gain(long double alpha, long double beta, long double q, long double w) {
    const long double r = std::hypot(beta, w);
    const long double th = std::atan2(w, beta);
    return -alpha * std::pow(r, q) * std::cos(q * th);
}

inline std::complex<long double> transfer(long double alpha, long double beta, long double q,
                                          std::complex<long double> s) {
    const std::complex<long double> z = s + beta;
    const long double r = std::pow(std::abs(z), q);
    const long double th = q * std::arg(z);
    const std::complex<long double> w = -alpha * std::polar(r, th);
    return std::exp(w);
}

// X_k = sum_j x_j e^{-2 pi i j k / n}, long double accumulation.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    const long double twopi = 2.0L * 3.14159265358979323846264338327950288L;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<long double> acc = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            const long double ph = -twopi * static_cast<long double>(j) *
                                   static_cast<long double>(k) / static_cast<long double>(n);
            acc += std::complex<long double>(x[j].real(), x[j].imag()) *
                   std::polar(1.0L, ph);
        }
        out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }
    return out;
}

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return detail::adaptive(f, a, b, fa, fm, fb, detail::simpson(a, b, fa, fm, fb), tol, 48);
}

}  // namespace oracle
