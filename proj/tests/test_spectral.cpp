#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "subideal/spectral.hpp"
#include "oracles.hpp"

using namespace subideal;

TEST_CASE("next_pow2") {
    CHECK(next_pow2(0) == 1);
    CHECK(next_pow2(1) == 1);
    CHECK(next_pow2(5) == 8);
    CHECK(next_pow2(1024) == 1024);
    CHECK(next_pow2(1025) == 2048);
}

TEST_CASE("frequency grid invariants") {
    const FrequencyGrid g(10.0, 8);
    CHECK(g.domega() == doctest::Approx(2.5));
    CHECK(g.dt() == doctest::Approx(M_PI / 10.0));
    CHECK(g.omega(0) == doctest::Approx(-10.0));
    CHECK(g.omega(4) == doctest::Approx(0.0));
    CHECK(g.omegas().size() == 8);
    CHECK(g == FrequencyGrid(10.0, 8));

    CHECK_THROWS_AS(FrequencyGrid(10.0, 12), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid(10.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid(0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid(-1.0, 8), std::invalid_argument);
}

TEST_CASE("auto_grid tail-driven sizing") {
    const FilterParams p(6.3925, 0.1, 0.9);
    const FrequencyGrid g9 = auto_grid(p, 1e-9);
    CHECK(g9.omega_max == 30.0);
    CHECK(g9.n == 1024);

    const FrequencyGrid g12 = auto_grid(p, 1e-12);
    CHECK(g12.omega_max == 40.0);
    CHECK(g12.n == 2048);

    // the kernel gain is actually below the tail level past omega_max
    CHECK(gain_bound(p, g9.omega_max) <= 1e-9);
    CHECK(gain_bound(p, g12.omega_max) <= 1e-12);

    CHECK_THROWS_AS(auto_grid(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(auto_grid(p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(auto_grid(p, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(auto_grid(FilterParams(1e7, 0.1, 0.9), 1e-3), std::overflow_error);
}

TEST_CASE("sampled response is Hermitian; perturbation breaks the flag") {
    const FilterParams p(1.0, 1.0, 0.5);
    const FrequencyGrid g(20.0, 64);
    const SpectrumSamples spec = sample_frequency_response(p, g);
    CHECK(spec.hermitian);
    CHECK(spec.values[32].real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(spec.values[32].imag() == doctest::Approx(0.0));

    ArrayXcd bad = spec.values;
    bad[10] += Complex(0.0, 1e-3);
    CHECK_FALSE(SpectrumSamples(g, std::move(bad)).hermitian);
}

TEST_CASE("gaussian spectrum inverts to the gaussian pulse") {
    const FrequencyGrid g(10.0, 256);
    ArrayXcd H(g.n);
    for (Index k = 0; k < g.n; ++k) {
        const double w = g.omega(k);
        H[k] = std::sqrt(2.0 * M_PI) * std::exp(-0.5 * w * w);
    }
    const SpectrumSamples spec(g, std::move(H));
    CHECK(spec.hermitian);

    double residue = 1.0;
    const SampledSignal h = impulse_response(spec, &residue);
    CHECK(residue <= 1e-10);
    CHECK(h.t0 == doctest::Approx(-128.0 * g.dt()));
    double max_err = 0.0;
    for (Index j = 0; j < h.size(); ++j)
        max_err = std::max(max_err, std::abs(h.values[j] - std::exp(-0.5 * h.time(j) * h.time(j))));
    CHECK(max_err <= 1e-12);
}

TEST_CASE("dc consistency: sum*dt equals H(0) to roundoff") {
    const FilterParams p(6.3925, 0.1, 0.9);
    const FrequencyGrid g = auto_grid(p, 1e-9);
    const SampledSignal h = impulse_response(p, g);
    const double H0 = transfer_eval(p, Complex(0.0, 0.0)).real();
    CHECK(h.values.sum() * h.dt == doctest::Approx(H0).epsilon(1e-12));
    CHECK(H0 == doctest::Approx(0.4471916319161902).epsilon(1e-13));
}

TEST_CASE("impulse response peak location and anti-causal level") {
    const FilterParams p(6.3925, 0.1, 0.9);
    const SampledSignal h = impulse_response(p, auto_grid(p, 1e-9));
    Index jmax = 0;
    for (Index j = 1; j < h.size(); ++j)
        if (h.values[j] > h.values[jmax]) jmax = j;
    const double tpeak = h.time(jmax);
    CHECK(tpeak > 4.0);
    CHECK(tpeak < 8.0);
    CHECK(h.values[jmax] == doctest::Approx(0.162972).epsilon(1e-3));

    // early times [0, 2] sit far below the peak: the response is nearly a
    // delayed pulse, not an instant one
    double early = 0.0;
    for (Index j = 0; j < h.size(); ++j)
        if (h.time(j) >= 0.0 && h.time(j) <= 2.0) early = std::max(early, std::abs(h.values[j]));
    CHECK(early <= 1e-6 * h.values[jmax]);
}

// n-doubling at fixed omega_max only reshuffles time aliasing; once the time
// window covers the exp(-beta t) kernel decay the common samples are stable
// to 1e-8 of peak globally. At the default (tail-driven, shorter) window only
// the interior quarter reaches that regime, at a looser level.
TEST_CASE("grid refinement leaves common samples unchanged") {
    const FilterParams p(6.3925, 0.1, 0.9);

    {  // window long enough for the full 1e-8 claim
        const FrequencyGrid g1(40.0, 4096);
        const SampledSignal h1 = impulse_response(p, g1);
        const SampledSignal h2 = impulse_response(p, FrequencyGrid(40.0, 8192));
        const double peak = h1.values.abs().maxCoeff();
        double diff = 0.0;
        for (Index j = 0; j < h1.size(); ++j)
            diff = std::max(diff, std::abs(h1.values[j] - h2.values[j + g1.n / 2]));
        CHECK(diff <= 1e-8 * peak);
    }

    {  // default grid: interior quarter of the window
        const FrequencyGrid g1 = auto_grid(p, 1e-9);
        const SampledSignal h1 = impulse_response(p, g1);
        const SampledSignal h2 = impulse_response(p, FrequencyGrid(g1.omega_max, 2 * g1.n));
        REQUIRE(h1.dt == doctest::Approx(h2.dt).epsilon(1e-15));
        const double peak = h1.values.abs().maxCoeff();
        const double quarter = 0.25 * static_cast<double>(g1.n) * h1.dt;
        double diff = 0.0;
        for (Index j = 0; j < h1.size(); ++j) {
            if (std::abs(h1.time(j)) > quarter) continue;
            diff = std::max(diff, std::abs(h1.values[j] - h2.values[j + g1.n / 2]));
        }
        CHECK(diff <= 1e-6 * peak);
    }
}

TEST_CASE("forward transform matches the brute-force sum") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> dist(0.0, 1.0);
    const FrequencyGrid g(8.0, 64);
    const double dt = g.dt();

    for (double t0 : {-32.0 * dt, 0.0, 1.75}) {
        ArrayXd v(g.n);
        for (Index j = 0; j < g.n; ++j) v[j] = dist(rng);
        const SampledSignal x(t0, dt, std::move(v));
        const SpectrumSamples X = forward_transform(x, g);

        double max_rel = 0.0, max_abs_v = 0.0;
        for (Index k = 0; k < g.n; ++k) {
            std::complex<long double> acc = 0.0L;
            for (Index j = 0; j < g.n; ++j) {
                const long double ph = -static_cast<long double>(g.omega(k)) *
                                       static_cast<long double>(x.time(j));
                acc += static_cast<long double>(x.values[j]) *
                       std::polar(1.0L, ph);
            }
            acc *= static_cast<long double>(dt);
            const Complex ref(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
            max_rel = std::max(max_rel, std::abs(X.values[k] - ref));
            max_abs_v = std::max(max_abs_v, std::abs(ref));
        }
        CHECK(max_rel <= 1e-12 * max_abs_v);
    }
}

TEST_CASE("gaussian pulse forward transform hits the closed form") {
    const Index n = 1024;
    const double dt = 0.1;
    const FrequencyGrid g(M_PI / dt, n);
    ArrayXd v(n);
    const double t0 = -static_cast<double>(n / 2) * dt;
    for (Index j = 0; j < n; ++j) {
        const double t = t0 + static_cast<double>(j) * dt;
        v[j] = std::exp(-0.5 * t * t);
    }
    const SpectrumSamples X = forward_transform(SampledSignal(t0, dt, std::move(v)), g);
    double max_rel = 0.0;
    for (Index k = 0; k < n; ++k) {
        const double w = g.omega(k);
        if (std::abs(w) > 5.0) continue;
        const double ref = std::sqrt(2.0 * M_PI) * std::exp(-0.5 * w * w);
        max_rel = std::max(max_rel, std::abs(X.values[k] - Complex(ref, 0.0)) / ref);
    }
    CHECK(max_rel <= 1e-6);
}

TEST_CASE("round trip: forward o inverse is the identity on band-limited spectra") {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> dist(0.0, 1.0);
    const FrequencyGrid g(8.0, 64);
    ArrayXcd H(g.n);
    H[0] = Complex(dist(rng) * std::exp(-8.0), 0.0);
    for (Index k = 1; k <= g.n / 2; ++k) {
        const double w = g.omega(k);
        const double env = std::exp(-std::abs(w));
        const Complex z(env * dist(rng), (k == g.n / 2) ? 0.0 : env * dist(rng));
        H[k] = z;
        if (k < g.n / 2) H[g.n - k] = std::conj(z);
    }
    const SpectrumSamples spec(g, std::move(H));
    REQUIRE(spec.hermitian);

    const SampledSignal h = impulse_response(spec);
    const SpectrumSamples back = forward_transform(h, g);
    const double scale = spec.values.abs().maxCoeff();
    double max_err = 0.0;
    for (Index k = 0; k < g.n; ++k)
        max_err = std::max(max_err, std::abs(back.values[k] - spec.values[k]));
    CHECK(max_err <= 1e-10 * scale);
}

TEST_CASE("forward transform input validation") {
    const FrequencyGrid g(10.0, 16);
    CHECK_THROWS_AS(forward_transform(SampledSignal(0.0, g.dt(), ArrayXd::Zero(8)), g),
                    std::invalid_argument);
    CHECK_THROWS_AS(forward_transform(SampledSignal(0.0, 0.1, ArrayXd::Zero(16)), g),
                    std::invalid_argument);
}
