#include <doctest.h>

#include "heatflow/errors.hpp"
#include "heatflow/measure.hpp"

#include <cmath>

using namespace heatflow;

TEST_CASE("one-centre Stieltjes transform and potential")
{
    PolySpec s({{0, 0}}, {1}, 1);
    auto v = stieltjes(s, 3.0, 1.0);
    CHECK(std::abs(v.m - (3 - std::sqrt(5.0)) / 2) < 1e-14);
    CHECK(v.residual < 1e-12);
    auto w = stieltjes(s, cplx(0, 1), 1.0);
    CHECK(std::abs(w.m - cplx(0, 1 - (1 + std::sqrt(5.0)) / 2)) < 1e-14);
    auto far = stieltjes(s, cplx(300, 400), 1.0);
    CHECK(std::abs(far.m * cplx(300, 400) - 1.0) < 1e-5);

    double U = log_potential(s, 3.0, 1.0);
    CHECK(U == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2) + std::pow((3 - std::sqrt(5.0)) / 2, 2) / 2));
    CHECK(U == doctest::Approx(1.0354).epsilon(1e-4));
    CHECK(U == doctest::Approx(semicircle::psi(3.0)).epsilon(1e-14));

    cplx a(1, 1);
    PolySpec sa({a}, {1}, 1);
    for (cplx z : {cplx(0.3, 2.1), cplx(-3, -0.5)})
        CHECK(log_potential(sa, z + a, 1.0) == doctest::Approx(log_potential(s, z, 1.0)).epsilon(1e-13));
    cplx zf(40, -30);
    CHECK(std::abs(log_potential(s, zf, 1.0) - std::log(50.0)) < 1e-3);
}

TEST_CASE("Stieltjes transform is twice the z-derivative of the potential")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 1);
    cplx t = 2.0;
    for (cplx z : {cplx(1, 2), cplx(-3, 0.5), cplx(0.2, -2.4)}) {
        const double h = 1e-4;
        double ux = (log_potential(s, z + h, t) - log_potential(s, z - h, t)) / (2 * h);
        double uy = (log_potential(s, z + cplx(0, h), t) - log_potential(s, z - cplx(0, h), t)) / (2 * h);
        cplx m = stieltjes(s, z, t).m;
        CHECK(std::abs(cplx(ux, -uy) - m) < 1e-7);
    }
}

TEST_CASE("Joukowski pair")
{
    auto [p0, m0] = joukowski_pm(0.0, 1.0);
    CHECK(std::abs(p0 - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(m0 - cplx(0, -1)) < 1e-15);
    for (cplx z : {cplx(0.5, 0.1), cplx(-3, 2), cplx(1, -4)}) {
        auto [p, m] = joukowski_pm(z, 1.7);
        CHECK(std::abs(p * m - 1.7) < 1e-13);
    }
    cplx z(3, 200);
    auto [p, m] = joukowski_pm(z, 1.0);
    CHECK(std::abs(p - (z - 1.0 / z)) < 1e-5);
    CHECK(std::abs(m - (z - 1.0 / z)) > 100);
    CHECK_THROWS_AS(joukowski_pm(3.0, 1.0), BranchCutError);
    CHECK_THROWS_AS(joukowski_pm(-2.5, 1.0), BranchCutError);
}

TEST_CASE("semicircle references")
{
    CHECK(semicircle::density(0, 1) == doctest::Approx(1 / M_PI));
    CHECK(semicircle::density(2.5, 1) == 0);
    for (double x : {-1.9, -0.4, 0.0, 1.3}) CHECK(std::abs(semicircle::H(x)) < 1e-14);
    CHECK(semicircle::cdf(0) == doctest::Approx(0.5));
    CHECK(semicircle::cdf(2) == 1);
    // the CDF differentiates to the density
    for (double x : {-1.5, 0.3, 1.8})
        CHECK((semicircle::cdf(x + 1e-6) - semicircle::cdf(x - 1e-6)) / 2e-6 ==
              doctest::Approx(semicircle::density(x, 1)).epsilon(1e-6));
    // psi is continuous across (-2, 2)
    CHECK(semicircle::psi(cplx(0.7, 1e-12)) == doctest::Approx(semicircle::psi(cplx(0.7, -1e-12))));

    std::vector<double> q;
    const int n = 400;
    for (int k = 0; k < n; ++k) {
        double target = (k + 0.5) / n, lo = -2, hi = 2;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (semicircle::cdf(mid) < target ? lo : hi) = mid;
        }
        q.push_back(lo);
    }
    CHECK(ks_semicircle(q) < 1.0 / n + 1e-9);
}

TEST_CASE("one-centre support is the segment with the semicircle density")
{
    PolySpec s({{0.5, -0.5}}, {1}, 1);
    const double t = 1.0;
    auto L = trace_support(s, t);
    REQUIRE(L.arcs.size() == 1);
    CHECK(L.branch_points.size() == 2);
    CHECK(std::abs(L.total_mass - 1) < 1e-3);
    CHECK(std::abs(L.total_primitive - 1) < 1e-9);
    const auto& arc = L.arcs[0];
    CHECK(arc.ends[0] == ArcEnd::branch_point);
    CHECK(arc.ends[1] == ArcEnd::branch_point);
    // the endpoints are the branch points themselves, where rho is set to 0
    for (size_t k = 1; k + 1 < arc.samples.size(); ++k) {
        const auto& smp = arc.samples[k];
        cplx x = smp.z - cplx(0.5, -0.5);
        CHECK(std::abs(x.imag()) < 1e-10);
        CHECK(std::abs(smp.rho - semicircle::density(x.real(), t)) < 1e-10);
    }
    CHECK(std::abs(std::abs(arc.samples.front().z - arc.samples.back().z) - 4) < 1e-10);
    CHECK(L.warnings.empty());
}

TEST_CASE("rays at a simple branch point")
{
    PolySpec s({{0, 0}}, {1}, 1);
    for (const auto& bp : branch_locus(s, 1.0).points) {
        auto r = equiangular_ray_check(s, 1.0, bp);
        REQUIRE(r.valid);
        REQUIRE(r.angles.size() == 3);
        for (double g : r.gaps) CHECK(std::abs(g - 2 * M_PI / 3) < M_PI / 180);
        int carrying = 0;
        for (int c : r.carries_support) carrying += c == 1;
        CHECK(carrying == 1);
    }
    auto bad = equiangular_ray_check(s, 1.0, {cplx(0.5, 0.5), 2, cplx(0.3, 0.3)});
    CHECK_FALSE(bad.valid);
    auto triple = equiangular_ray_check(PolySpec({{0, 1}, {0, -1}}, {1, 1}, 1), 8.0, {cplx(std::sqrt(27.0), 0), 3, 0.0});
    CHECK_FALSE(triple.valid);
}

TEST_CASE("default region")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 1);
    CHECK(default_region(s, 0.05).size() == 2);
    auto big = default_region(s, 2.0);
    REQUIRE(big.size() == 1);
    CHECK(big[0].r >= 3 * std::sqrt(2.0));
}
