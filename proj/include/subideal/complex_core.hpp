#pragma once

#include <cmath>
#include <complex>

#include "subideal/types.hpp"

namespace subideal {

// Principal argument in (-pi, pi]. Templated so long-double instantiations can
// serve as reference evaluations in tests.
template <class T>
T principal_arg(std::complex<T> z) {
    if (z.real() == T(0) && z.imag() == T(0))
        throw std::domain_error("principal_arg: argument of zero is undefined");
    return std::atan2(z.imag(), z.real());
}

// z^q on the principal branch: |z|^q * exp(i*q*Arg z).
template <class T>
std::complex<T> principal_pow(std::complex<T> z, T q) {
    if (z.real() == T(0) && z.imag() == T(0))
        throw std::domain_error("principal_pow: argument of zero is undefined");
    if (!(q > T(0) && q <= T(1)))
        throw std::domain_error("principal_pow: exponent must lie in (0, 1]");
    const T r = std::hypot(z.real(), z.imag());
    const T theta = std::atan2(z.imag(), z.real());
    return std::polar(std::pow(r, q), q * theta);
}

template <class T>
std::complex<T> transfer_eval_t(T alpha, T beta, T q, std::complex<T> s) {
    const std::complex<T> w = -alpha * principal_pow(s + beta, q);
    if (w.real() < T(kLogTiny)) return std::complex<T>(0, 0);
    return std::exp(w);
}

// ln|H(i*omega)| = -alpha * |beta + i*omega|^q * cos(q * Arg(beta + i*omega)).
// Always evaluated in log space; never underflows.
template <class T>
T log_gain_t(T alpha, T beta, T q, T omega) {
    const T r = std::hypot(beta, omega);
    const T theta = std::atan2(omega, beta);
    return -alpha * std::pow(r, q) * std::cos(q * theta);
}

// H(s) = exp(-alpha*(s+beta)^q) on the closed right half-plane.
// Returns exact zero when the modulus underflows the normal range.
inline Complex transfer_eval(const FilterParams& p, Complex s) {
    if (s.real() < 0.0)
        throw std::domain_error("transfer_eval: Re s must be >= 0");
    return transfer_eval_t(p.alpha, p.beta, p.q, s);
}

inline double log_gain(const FilterParams& p, double omega) {
    return log_gain_t(p.alpha, p.beta, p.q, omega);
}

inline double gain(const FilterParams& p, double omega) {
    const double lg = log_gain(p, omega);
    return lg < kLogTiny ? 0.0 : std::exp(lg);
}

inline double reference_log_gain(const ReferenceParams& r, double omega) {
    return -r.mu * std::abs(omega);
}

inline double reference_gain(const ReferenceParams& r, double omega) {
    const double lg = reference_log_gain(r, omega);
    return lg < kLogTiny ? 0.0 : std::exp(lg);
}

}  // namespace subideal
