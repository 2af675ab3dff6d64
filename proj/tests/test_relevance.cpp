#include <doctest.h>

#include "heatflow/errors.hpp"
#include "heatflow/kernels.hpp"
#include "heatflow/relevance.hpp"

#include <cmath>

using namespace heatflow;

namespace {

const double phi = (1 + std::sqrt(5.0)) / 2;

// upper-half-plane branch of the one-centre saddle: (z - a + sqrt((z-a)^2 - 4t)) / 2 + a,
// with the square root chosen so that u ~ z at infinity
cplx one_centre_u(cplx z, cplx a, cplx t)
{
    cplx w = z - a;
    cplx r = std::sqrt(w * w - 4.0 * t);
    cplx u1 = (w + r) / 2.0, u2 = (w - r) / 2.0;
    // the relevant saddle is the one with |m| = |z - u|/|t| small at infinity; for d = 1 it is the root farther from a
    return a + (std::abs(u1) >= std::abs(u2) ? u1 : u2);
}

}  // namespace

TEST_CASE("serial and parallel height kernels agree")
{
    kernels::HeightParams p{{{0, 1}, {0.5, -1}}, {0.5, 0.5}, {0.3, 0.2}, {1.2, 0.1}};
    std::vector<double> xs, ys;
    for (int i = 0; i < 57; ++i) xs.push_back(-3 + 0.11 * i);
    for (int i = 0; i < 43; ++i) ys.push_back(-2 + 0.097 * i);
    std::vector<double> a, b;
    kernels::height_field_serial(p, xs, ys, a);
    kernels::height_field(p, xs, ys, b);
    CHECK(a == b);
    PolySpec s({{0, 1}, {0.5, -1}}, {1, 1}, 1);
    CHECK(a[5 * 57 + 7] == doctest::Approx(height_G(s, p.z, p.t, {xs[7], ys[5]})).epsilon(1e-13));
}

TEST_CASE("sublevel connectivity around the chosen height")
{
    PolySpec s({{0, 0}}, {1}, 1);
    const double h = std::log(phi) - std::pow(phi - 1, 2) / 2;
    CHECK(sublevel_connected(s, cplx(0, 1), 1.0, h + 0.05));
    CHECK_FALSE(sublevel_connected(s, cplx(0, 1), 1.0, h - 0.05));
    CHECK(sublevel_connected(s, cplx(0, 1), 1.0, 50.0));
}

TEST_CASE("one-centre selection")
{
    PolySpec s({{0, 0}}, {1}, 1);
    auto up = select_max_relevant(s, cplx(0, 1), 1.0);
    CHECK(std::abs(up.u - cplx(0, phi)) < 1e-12);
    CHECK(up.h_low < up.height);
    CHECK(up.height < up.h_high);
    CHECK(up.irrelevant.empty());
    auto down = select_max_relevant(s, cplx(0, -1), 1.0);
    CHECK(std::abs(down.u - cplx(0, -phi)) < 1e-12);

    auto far = select_max_relevant(s, 10.0, 1.0);
    CHECK(std::abs(far.u - (10 + std::sqrt(96.0)) / 2) < 1e-12);
    CHECK(std::abs((10.0 - far.u) - 0.1010205144) < 1e-9);
}

TEST_CASE("selection matches the closed form off the cut")
{
    cplx a(0.4, -0.3);
    PolySpec s({a}, {1}, 1);
    for (cplx t : {cplx(1.0), cplx(0.5, 0.7), cplx(-0.3, 0.6)}) {
        for (cplx z : {cplx(0.2, 1.7), cplx(-2.5, 0.3), cplx(3, -2), cplx(0.1, -0.9)}) {
            RelevanceCertificate c;
            try {
                c = select_max_relevant(s, z, t);
            } catch (const TieError&) {
                continue;
            }
            CHECK(std::abs(c.u - one_centre_u(z, a, t)) < 1e-10);
        }
    }
}

TEST_CASE("two centres: large |z| picks the saddle nearest z")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 1);
    for (cplx z : {cplx(12, 3), cplx(-4, 9), cplx(0, -15)}) {
        auto c = select_max_relevant(s, z, 2.0);
        double best = INFINITY;
        for (auto u : c.fan.saddles) best = std::min(best, std::abs(u - z));
        CHECK(std::abs(c.u - z) == doctest::Approx(best));
        cplx m = (z - c.u) / 2.0;
        CHECK(std::abs(m * z - 1.0) < 3.0 / std::abs(z));
    }
}

TEST_CASE("rotation equivariance for complex t")
{
    PolySpec s({{0.7, 0.4}, {-0.5, 0.2}, {0.1, -0.9}}, {1, 2, 1}, 1);
    cplx t = std::polar(1.3, 0.9);
    cplx w = std::polar(1.0, -0.45);
    for (cplx z : {cplx(2, 1), cplx(-0.5, 2.2), cplx(1.5, -1.8)}) {
        auto a = select_max_relevant(s, z, t);
        auto b = select_max_relevant(s.rotated(w), z * w, std::abs(t));
        CHECK(std::abs(a.u * w - b.u) < 1e-12);
    }
}

TEST_CASE("tie on the cut is refused")
{
    PolySpec s({{0, 0}}, {1}, 1);
    // on the real segment (-2, 2) the two saddles are conjugate with equal heights
    CHECK_THROWS_AS(select_max_relevant(s, 0.7, 1.0), TieError);
    CHECK_THROWS_AS(select_max_relevant(s, 2.0, 1.0), DegenerateFan);
}

TEST_CASE("relevance field: one centre, upper half disk")
{
    PolySpec s({{0, 0}}, {1}, 1);
    auto anchor = anchor_certificate(s, 1.0);
    FieldRegion r{{-3, 0.05}, {3, 3}, 24, 12, [](cplx z) { return std::abs(z) < 3; }};
    auto F = relevance_field(s, 1.0, r, anchor);
    CHECK(F.branch_count == 1);
    CHECK(F.inconsistencies == 0);
    int defined = 0;
    for (int k = 0; k < r.nx * r.ny; ++k) {
        if (F.branch[k] < 0) continue;
        ++defined;
        cplx z = r.cell(k % r.nx, k / r.nx);
        CHECK(std::abs(F.u[k] - one_centre_u(z, 0.0, 1.0)) < 1e-10);
    }
    CHECK(defined > 200);
}

TEST_CASE("relevance field: two centres on an annulus")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 1);
    auto anchor = anchor_certificate(s, 2.0);
    FieldConfig cfg;
    cfg.spot_rate = 0.1;
    FieldRegion r{{-3, -3}, {3, 3}, 30, 30, [](cplx z) { return std::abs(z) > 2.5 && std::abs(z) < 3; }};
    auto F = relevance_field(s, 2.0, r, anchor, cfg);
    CHECK(F.branch_count == 1);
    CHECK(F.inconsistencies == 0);
    CHECK(F.spot_checks > 0);
    for (int k = 0; k < r.nx * r.ny; ++k) {
        if (F.state[k] == CellState::skipped) continue;
        REQUIRE(F.branch[k] == 0);
        cplx z = r.cell(k % r.nx, k / r.nx);
        double best = INFINITY;
        for (auto u : F.fans[k].saddles) best = std::min(best, std::abs(u - z));
        CHECK(std::abs(F.u[k] - z) == doctest::Approx(best));
    }
}
