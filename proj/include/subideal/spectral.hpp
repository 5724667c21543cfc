#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "subideal/complex_core.hpp"
#include "subideal/design.hpp"
#include "subideal/types.hpp"

namespace subideal {

inline Index next_pow2(Index n) {
    Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Grid wide enough that the gain envelope is below tail_eps past omega_max and
// long enough in time (n*dt) to cover resolution_factor times the nominal
// delay scale alpha.
inline FrequencyGrid auto_grid(const FilterParams& p, double tail_eps,
                               double resolution_factor = 16.0, Index n_cap = Index(1) << 24) {
    if (!(tail_eps > 0.0 && tail_eps < 1.0))
        throw std::invalid_argument("auto_grid: tail_eps must lie in (0, 1)");
    if (!(resolution_factor > 0.0))
        throw std::invalid_argument("auto_grid: resolution_factor must be positive");

    // gain_bound(p, W) = tail_eps  <=>  alpha*cos(q*pi/2)*W^q = -ln(tail_eps)
    const double raw = std::pow(-std::log(tail_eps) / (p.alpha * decay_margin(p.q)), 1.0 / p.q);
    const double omega_max = std::ceil(raw);
    const double dt = M_PI / omega_max;
    const double span = resolution_factor * p.alpha;
    const Index n_min = static_cast<Index>(std::ceil(span / dt));
    const Index n = next_pow2(std::max<Index>(8, n_min));
    if (n > n_cap)
        throw std::overflow_error("auto_grid: required sample count exceeds cap");
    return FrequencyGrid(omega_max, n);
}

inline SpectrumSamples sample_frequency_response(const FilterParams& p, const FrequencyGrid& g) {
    ArrayXcd values(g.n);
    for (Index k = 0; k < g.n; ++k)
        values[k] = transfer_eval(p, Complex(0.0, g.omega(k)));
    return SpectrumSamples(g, std::move(values));
}

namespace detail {

inline std::vector<Complex> fft_forward(const std::vector<Complex>& in) {
    Eigen::FFT<double> fft;
    std::vector<Complex> out;
    fft.fwd(out, in);
    return out;
}

inline std::vector<Complex> fft_inverse(const std::vector<Complex>& in) {
    Eigen::FFT<double> fft;
    std::vector<Complex> out;
    fft.inv(out, in);  // scaled by 1/n
    return out;
}

// True when t0 sits at the centered position -n/2*dt of the grid's time axis.
inline bool centered_on(const FrequencyGrid& g, double t0) {
    const double dt = g.dt();
    const double want = -static_cast<double>(g.n / 2) * dt;
    return std::abs(t0 - want) <= 1e-12 * static_cast<double>(g.n) * dt;
}

}  // namespace detail

// h(t_j) = (domega/2pi) * sum_k H_k exp(i*omega_k*t_j) on the centered time
// grid t_j = -n/2*dt + j*dt, dt = pi/omega_max. With omega_k = -omega_max +
// k*domega and n divisible by 4 the phase factors collapse to parities:
//   h_j = (1/dt) * (-1)^j * Re( IFFT[ (-1)^k H_k ]_j ).
// The imaginary residue (relative to the peak) is written to *imag_residue
// when given and must stay below 1e-10 for Hermitian spectra.
inline SampledSignal impulse_response(const SpectrumSamples& spec, double* imag_residue = nullptr) {
    const FrequencyGrid& g = spec.grid;
    const Index n = g.n;
    const double dt = g.dt();

    std::vector<Complex> buf(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k)
        buf[static_cast<std::size_t>(k)] = (k % 2 == 0) ? spec.values[k] : -spec.values[k];
    // Bin 0 sits at -omega_max with no +omega_max partner on the grid; a real
    // kernel needs it real, so its imaginary part is dropped for Hermitian input.
    if (spec.hermitian) buf[0] = Complex(buf[0].real(), 0.0);
    const std::vector<Complex> out = detail::fft_inverse(buf);

    ArrayXd h(n);
    double max_im = 0.0;
    for (Index j = 0; j < n; ++j) {
        const Complex v = out[static_cast<std::size_t>(j)];
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        h[j] = sign * v.real() / dt;
        max_im = std::max(max_im, std::abs(v.imag()) / dt);
    }
    const double peak = h.abs().maxCoeff();
    const double residue = (peak > 0.0) ? max_im / peak : max_im;
    if (imag_residue) *imag_residue = residue;
    if (spec.hermitian && residue > 1e-10)
        throw std::runtime_error("impulse_response: imaginary residue exceeds 1e-10 of peak");

    const double t0 = -static_cast<double>(n / 2) * dt;
    return SampledSignal(t0, dt, std::move(h));
}

inline SampledSignal impulse_response(const FilterParams& p, const FrequencyGrid& g,
                                      double* imag_residue = nullptr) {
    return impulse_response(sample_frequency_response(p, g), imag_residue);
}

// X_k = dt * sum_j x_j exp(-i*omega_k*t_j), the Riemann approximation of the
// transform with kernel exp(-i*omega*t). Requires n == len(x) and dt == pi/omega_max.
inline SpectrumSamples forward_transform(const SampledSignal& x, const FrequencyGrid& g) {
    const Index n = g.n;
    if (x.size() != n)
        throw std::invalid_argument("forward_transform: sample count does not match grid");
    const double dt = g.dt();
    if (std::abs(x.dt - dt) > 1e-9 * dt)
        throw std::invalid_argument("forward_transform: dt incompatible with grid (need dt = pi/omega_max)");

    std::vector<Complex> buf(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        buf[static_cast<std::size_t>(j)] = Complex(sign * x.values[j], 0.0);
    }
    const std::vector<Complex> out = detail::fft_forward(buf);

    ArrayXcd X(n);
    if (detail::centered_on(g, x.t0)) {
        for (Index k = 0; k < n; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            X[k] = dt * sign * out[static_cast<std::size_t>(k)];
        }
    } else {
        for (Index k = 0; k < n; ++k) {
            const Complex phase = std::polar(1.0, -g.omega(k) * x.t0);
            X[k] = dt * phase * out[static_cast<std::size_t>(k)];
        }
    }
    return SpectrumSamples(g, std::move(X));
}

}  // namespace subideal
