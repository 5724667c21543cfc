#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "subideal/spectral.hpp"
#include "subideal/types.hpp"

namespace subideal {

// Kernel and input sampled at different rates. Distinct from plain argument
// errors so callers can map it to a different exit path.
struct rate_mismatch_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Causal part of a numerically computed impulse response. Negative-time
// samples are clipped (their energy share recorded) and trailing samples
// below trim_rel of the peak are dropped.
struct PreparedKernel {
    SampledSignal kernel;  // t0 = 0
    double clipped_energy_fraction = 0.0;
    Index clipped_samples = 0;
    Index trimmed_samples = 0;
};

inline PreparedKernel prepare_kernel(const SampledSignal& h, double trim_rel = 1e-15) {
    const Index n = h.size();
    // first index with t_j >= 0, robust to rounding in t0/dt
    Index j0 = static_cast<Index>(std::ceil(-h.t0 / h.dt - 1e-9));
    j0 = std::max<Index>(0, std::min(j0, n));

    double clipped = 0.0, total = 0.0;
    for (Index j = 0; j < n; ++j) {
        const double e = h.values[j] * h.values[j];
        total += e;
        if (j < j0) clipped += e;
    }

    const Index causal_len = n - j0;
    double peak = 0.0;
    for (Index j = j0; j < n; ++j) peak = std::max(peak, std::abs(h.values[j]));
    Index last = j0;
    for (Index j = j0; j < n; ++j)
        if (std::abs(h.values[j]) >= trim_rel * peak) last = j;
    const Index keep = (causal_len > 0) ? last - j0 + 1 : 0;

    ArrayXd vals = (keep > 0) ? ArrayXd(h.values.segment(j0, keep)) : ArrayXd::Zero(1);
    PreparedKernel out{SampledSignal(0.0, h.dt, std::move(vals)), 0.0, j0,
                       (causal_len > 0) ? causal_len - keep : 0};
    out.clipped_energy_fraction = (total > 0.0) ? clipped / total : 0.0;
    return out;
}

namespace detail {

inline void check_rate(const SampledSignal& h, const SampledSignal& x) {
    if (std::abs(h.dt - x.dt) > 1e-9 * x.dt)
        throw rate_mismatch_error("convolve: sampling-rate mismatch between kernel and input");
}

}  // namespace detail

// y_j = dt * sum_k h_k x_{j-k}, left-point Riemann approximation of the causal
// convolution integral. Output shares the input's time support and length.
// Missing past samples count as zero and enter the sum in the same order as
// real ones, so streamed evaluation reproduces this bit for bit.
inline SampledSignal convolve_direct(const SampledSignal& h, const SampledSignal& x) {
    detail::check_rate(h, x);
    const PreparedKernel prep = prepare_kernel(h);
    const ArrayXd& k = prep.kernel.values;
    const Index K = k.size();
    const double dt = prep.kernel.dt;
    const Index n = x.size();

    ArrayXd y(n);
    for (Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Index m = 0; m < K; ++m)
            acc += k[m] * (j >= m ? x.values[j - m] : 0.0);
        y[j] = dt * acc;
    }
    return SampledSignal(x.t0, x.dt, std::move(y));
}

// Overlap-add FFT convolution with the same contract as convolve_direct.
inline SampledSignal convolve_fft(const SampledSignal& h, const SampledSignal& x) {
    detail::check_rate(h, x);
    const PreparedKernel prep = prepare_kernel(h);
    const ArrayXd& k = prep.kernel.values;
    const Index K = k.size();
    const double dt = prep.kernel.dt;
    const Index n = x.size();

    const Index L = next_pow2(std::max<Index>(2 * K, 1024));
    const Index B = L - K + 1;  // input block length

    Eigen::FFT<double> fft;
    std::vector<Complex> kbuf(static_cast<std::size_t>(L), Complex(0.0, 0.0));
    for (Index m = 0; m < K; ++m) kbuf[static_cast<std::size_t>(m)] = Complex(k[m], 0.0);
    std::vector<Complex> kspec;
    fft.fwd(kspec, kbuf);

    ArrayXd y = ArrayXd::Zero(n);
    std::vector<Complex> xbuf(static_cast<std::size_t>(L));
    std::vector<Complex> xspec, seg;
    for (Index start = 0; start < n; start += B) {
        const Index blen = std::min(B, n - start);
        for (Index i = 0; i < L; ++i)
            xbuf[static_cast<std::size_t>(i)] =
                (i < blen) ? Complex(x.values[start + i], 0.0) : Complex(0.0, 0.0);
        fft.fwd(xspec, xbuf);
        for (std::size_t i = 0; i < xspec.size(); ++i) xspec[i] *= kspec[i];
        fft.inv(seg, xspec);
        const Index upto = std::min(L, n - start);
        for (Index i = 0; i < upto; ++i) y[start + i] += seg[static_cast<std::size_t>(i)].real();
    }
    y *= dt;
    return SampledSignal(x.t0, x.dt, std::move(y));
}

// Chunked causal convolution holding the input tail needed by future chunks.
// Single-owner: one caller mutates the state.
struct StreamState {
    SampledSignal kernel;  // causal, t0 = 0
    ArrayXd history;       // last len(kernel)-1 inputs, oldest first
    double dt;

    explicit StreamState(const SampledSignal& h)
        : kernel(prepare_kernel(h).kernel),
          history(ArrayXd::Zero(std::max<Index>(kernel.size() - 1, 0))),
          dt(kernel.dt) {}
};

inline ArrayXd stream_push(StreamState& state, const ArrayXd& chunk) {
    if (chunk.size() == 0)
        throw std::invalid_argument("stream_push: chunk must be non-empty");
    const ArrayXd& k = state.kernel.values;
    const Index K = k.size();
    const Index H = K - 1;
    const Index n = chunk.size();

    ArrayXd ext(H + n);
    if (H > 0) ext.head(H) = state.history;
    ext.tail(n) = chunk;

    ArrayXd y(n);
    for (Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Index m = 0; m < K; ++m) acc += k[m] * ext[H + i - m];
        y[i] = state.dt * acc;
    }
    if (H > 0) state.history = ext.tail(H);
    return y;
}

// Kernel for filtering signals sampled at dt: frequency grid with
// omega_max = pi/dt, long enough in time to hold the kernel's decay
// (t >= 20/beta and t >= 8*alpha) and at least n_min samples.
inline PreparedKernel design_kernel(const FilterParams& p, double dt, Index n_min = 0,
                                    Index n_cap = Index(1) << 24) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("design_kernel: dt must be positive and finite");
    const double omega_max = M_PI / dt;
    const double span = 2.0 * std::max(20.0 / p.beta, 8.0 * p.alpha);
    const Index n = next_pow2(std::max<Index>(
        {Index(8), n_min, static_cast<Index>(std::ceil(span / dt))}));
    if (n > n_cap)
        throw std::overflow_error("design_kernel: required sample count exceeds cap");
    SampledSignal h = impulse_response(p, FrequencyGrid(omega_max, n));
    h.dt = dt;  // pi/(pi/dt) can differ from dt by one ulp; pin the exact rate
    return prepare_kernel(h);
}

}  // namespace subideal
