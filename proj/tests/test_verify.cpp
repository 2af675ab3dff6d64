#include <doctest.h>

#include "heatflow/errors.hpp"
#include "heatflow/roots.hpp"
#include "heatflow/verify.hpp"

#include <cmath>

using namespace heatflow;

TEST_CASE("closed-form oracle for one centre")
{
    auto r = hermite_oracle(PolySpec({0.0}, {1}, 1), 1.0);
    CHECK(r.pass);
    CHECK(r.samples.size() == 100);
    CHECK(r.max_residual < 1e-10);
    auto s = hermite_oracle(PolySpec({cplx(1, 1)}, {1}, 1), 3.0, {.points = 30, .with_support = false});
    CHECK(s.pass);
    CHECK_THROWS_AS(hermite_oracle(PolySpec({{0, 1}, {0, -1}}, {1, 1}, 1), 1.0), ConfigError);
}

TEST_CASE("PDE residuals decay at second order")
{
    PolySpec one({0.0}, {1}, 1);
    for (auto kind : {PdeKind::hamilton_jacobi, PdeKind::burgers, PdeKind::burgers_conjugate}) {
        auto r = pde_residuals(one, {1.0}, {3.0}, kind, {.min_samples = 1});
        CAPTURE(to_string(kind));
        REQUIRE(r.ratios.size() == 1);
        CHECK(r.ratios[0] >= 3.5);
        CHECK(r.ratios[0] <= 4.5);
        CHECK(r.pass);
    }
    PolySpec two({{0, 1}, {0, -1}}, {1, 1}, 1);
    auto hj = pde_residuals(two, {2.0}, {cplx(1, 2)}, PdeKind::hamilton_jacobi, {.h = {1e-4}, .threshold = 1e-6, .min_samples = 1});
    CHECK(hj.pass);
    CHECK(hj.max_residual < 1e-6);

    // complex t works through the rotated frame
    auto c = pde_residuals(two, {cplx(1, 1)}, {cplx(3, 1), cplx(-2, 2.5)}, PdeKind::burgers, {.min_samples = 2});
    CHECK(c.pass);

    // too few samples
    CHECK_FALSE(pde_residuals(one, {1.0}, {3.0}, PdeKind::burgers).pass);
}

TEST_CASE("finite-n rotation identity")
{
    PolySpec sq({0.0}, {2}, 1);
    auto r = rotation_identity(sq, -1.0, {cplx(0.3, 0.2), cplx(2, -1)});
    CHECK(r.pass);
    // z^2 at t = -1 is z^2 + 1/2
    auto m = zeros_at(sq, -1.0, 256);
    for (auto z : m.zeros) CHECK(std::abs(std::abs(z.imag()) - 1 / std::sqrt(2.0)) < 1e-14);

    PolySpec two({{0, 1}, {0, -1}}, {1, 1}, 10);
    for (cplx t : {cplx(0, 1), cplx(-1, 0), std::polar(2.0, M_PI / 3), cplx(1.5, 0)}) {
        auto q = rotation_identity(two, t, {cplx(0.5, 0.5), cplx(-1, 2), cplx(3, 0)});
        CAPTURE(t);
        CHECK(q.pass);
        CHECK(q.max_residual < 1e-12);
    }
}

TEST_CASE("convergence reports")
{
    PolySpec mono({0.0}, {1}, 1);
    auto ks = convergence_report(mono, 1.0, {25, 50, 100, 200}, ConvergenceMetric::ks_semicircle, {.final_threshold = 0.05});
    CHECK(ks.pass);
    CHECK(ks.max_residual < 0.05);

    PolySpec two({{0, 1}, {0, -1}}, {1, 1}, 1);
    auto dm = convergence_report(two, 0.05, {10, 20, 40}, ConvergenceMetric::disk_mass);
    CHECK(dm.pass);
    CHECK_THROWS_AS(convergence_report(two, 2.0, {10}, ConvergenceMetric::disk_mass), ConfigError);
}
