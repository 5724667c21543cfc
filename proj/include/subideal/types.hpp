#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace subideal {

using Complex = std::complex<double>;
using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::Index;

inline constexpr const char* kArtifactVersion = "0.1.0";

// Lower bound on the fractional exponent accepted by sequence constructors.
inline constexpr double kDefaultQBar = 0.5;

// Gains below exp(kLogTiny) underflow to exact zero (smallest normal double).
inline const double kLogTiny = std::log(std::numeric_limits<double>::min());

// One causal smoothing filter H(s) = exp(-alpha*(s+beta)^q).
struct FilterParams {
    double alpha;
    double beta;
    double q;

    FilterParams(double alpha_, double beta_, double q_)
        : alpha(alpha_), beta(beta_), q(q_) {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("FilterParams: alpha must be positive and finite");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("FilterParams: beta must be positive and finite");
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("FilterParams: q must lie in (0, 1)");
    }
};

// Non-causal reference filter with gain exp(-mu*|omega|).
struct ReferenceParams {
    double mu;

    explicit ReferenceParams(double mu_) : mu(mu_) {
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw std::invalid_argument("ReferenceParams: mu must be positive and finite");
    }
};

// Uniform frequency grid over [-omega_max, omega_max), n samples, n a power of two.
struct FrequencyGrid {
    double omega_max;
    Index n;

    FrequencyGrid(double omega_max_, Index n_) : omega_max(omega_max_), n(n_) {
        if (!(omega_max > 0.0) || !std::isfinite(omega_max))
            throw std::invalid_argument("FrequencyGrid: omega_max must be positive and finite");
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("FrequencyGrid: n must be a power of two >= 8");
    }

    double domega() const { return 2.0 * omega_max / static_cast<double>(n); }
    double dt() const { return M_PI / omega_max; }
    double omega(Index k) const { return -omega_max + static_cast<double>(k) * domega(); }

    ArrayXd omegas() const {
        ArrayXd w(n);
        for (Index k = 0; k < n; ++k) w[k] = omega(k);
        return w;
    }

    bool operator==(const FrequencyGrid& o) const {
        return omega_max == o.omega_max && n == o.n;
    }
};

// Complex frequency-response samples aligned to a FrequencyGrid.
struct SpectrumSamples {
    FrequencyGrid grid;
    ArrayXcd values;
    bool hermitian = false;

    SpectrumSamples(FrequencyGrid grid_, ArrayXcd values_)
        : grid(grid_), values(std::move(values_)) {
        if (values.size() != grid.n)
            throw std::invalid_argument("SpectrumSamples: value count must match grid");
        hermitian = check_hermitian();
    }

  private:
    // values[-omega] == conj(values[omega]) within 1e-12 of the largest sample.
    // The k=0 sample sits at -omega_max with no mirror on the grid and is skipped.
    bool check_hermitian() const {
        const Index n = grid.n;
        const double scale = values.abs().maxCoeff();
        const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);
        for (Index k = 1; k < n; ++k) {
            if (std::abs(values[k] - std::conj(values[n - k])) > tol) return false;
        }
        return true;
    }
};

// Uniformly sampled real signal; t_j = t0 + j*dt.
struct SampledSignal {
    double t0;
    double dt;
    ArrayXd values;

    SampledSignal(double t0_, double dt_, ArrayXd values_)
        : t0(t0_), dt(dt_), values(std::move(values_)) {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw std::invalid_argument("SampledSignal: dt must be positive and finite");
        if (!values.allFinite())
            throw std::invalid_argument("SampledSignal: values must be finite");
    }

    Index size() const { return values.size(); }
    double time(Index j) const { return t0 + static_cast<double>(j) * dt; }
};

// Adaptive quadrature controls shared by the verification integrals.
struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    bool tail_strategy = true;  // closed-form exponential tail bounds past the switch point

    void validate() const {
        if (!(abs_tol > 0.0 && abs_tol < 1.0) || !(rel_tol > 0.0 && rel_tol < 1.0))
            throw std::invalid_argument("QuadratureConfig: tolerances must lie in (0, 1)");
        if (max_subdivisions < 16)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 16");
    }
};

}  // namespace subideal
