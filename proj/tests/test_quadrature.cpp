#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subideal/quadrature.hpp"
#include "oracles.hpp"

using namespace subideal;

TEST_CASE("polynomial and trigonometric integrals") {
    const auto sq = [](double x) { return x * x; };
    const QuadResult a = integrate(sq, 0.0, 1.0);
    CHECK(a.converged);
    CHECK(a.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const QuadResult b = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(b.converged);
    CHECK(b.value == doctest::Approx(2.0).epsilon(1e-13));

    const QuadResult c = integrate([](double x) { return std::sin(x); }, 0.0, 10.0 * M_PI);
    CHECK(c.converged);
    CHECK(std::abs(c.value) <= 1e-10);
}

TEST_CASE("gaussian integral") {
    const QuadResult r =
        integrate([](double x) { return std::exp(-0.5 * x * x); }, -10.0, 10.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity") {
    const QuadResult r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("subdivision exhaustion reports non-convergence") {
    QuadratureConfig qc;
    qc.abs_tol = 1e-14;
    qc.rel_tol = 1e-14;
    qc.max_subdivisions = 16;
    const QuadResult r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, qc);
    CHECK_FALSE(r.converged);
}

TEST_CASE("piecewise integration matches single-interval result") {
    const auto f = [](double x) { return std::exp(-x) * std::cos(x); };
    const QuadResult whole = integrate(f, 0.0, 50.0);
    const QuadResult split = integrate_pts(f, decade_breakpoints(0.0, 50.0), {});
    CHECK(whole.converged);
    CHECK(split.converged);
    CHECK(split.value == doctest::Approx(whole.value).epsilon(1e-12));
}

TEST_CASE("agreement with independent adaptive Simpson") {
    // Paley-Wiener style integrand
    const auto f = [](double w) {
        return std::pow(std::hypot(1.0, w), 0.5) *
               std::cos(0.5 * std::atan2(w, 1.0)) / (1.0 + w * w);
    };
    const QuadResult r = integrate_pts(f, decade_breakpoints(0.0, 100.0), {});
    const double ref = oracle::integrate(f, 0.0, 100.0, 1e-13);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("decade breakpoints") {
    const auto pts = decade_breakpoints(0.0, 1e4);
    REQUIRE(pts.size() == 6);
    CHECK(pts.front() == 0.0);
    CHECK(pts[1] == 1.0);
    CHECK(pts[4] == 1e3);
    CHECK(pts.back() == 1e4);

    const auto mid = decade_breakpoints(10.0, 500.0);
    CHECK(mid.front() == 10.0);
    CHECK(mid[1] == 100.0);
    CHECK(mid.back() == 500.0);
}

TEST_CASE("exponential power tail bound dominates the true tail") {
    // integrand exp(-a u^q); true tail computed far out by direct quadrature
    const double a = 1.0, q = 0.5, W = 100.0;
    const double bound = exp_power_tail_bound(a, q, W);
    CHECK(std::isfinite(bound));
    const QuadResult tail = integrate_pts(
        [&](double u) { return std::exp(-a * std::pow(u, q)); },
        decade_breakpoints(W, 1e6), {});
    CHECK(tail.converged);
    CHECK(tail.value <= bound);
    CHECK(bound <= 10.0 * tail.value);  // not wildly loose either

    // precondition a q W^q >= 2(1-q) violated: no certificate
    CHECK(exp_power_tail_bound(1.0, 0.5, 0.1) == INFINITY);
    // deep underflow collapses to zero
    CHECK(exp_power_tail_bound(1.0, 0.5, 1e12) == 0.0);
}

TEST_CASE("config validation") {
    QuadratureConfig qc;
    CHECK_NOTHROW(qc.validate());
    qc.abs_tol = 0.0;
    CHECK_THROWS_AS(qc.validate(), std::invalid_argument);
    qc.abs_tol = 1e-12;
    qc.rel_tol = 1.0;
    CHECK_THROWS_AS(qc.validate(), std::invalid_argument);
    qc.rel_tol = 1e-10;
    qc.max_subdivisions = 8;
    CHECK_THROWS_AS(qc.validate(), std::invalid_argument);
}
