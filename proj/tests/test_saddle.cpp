#include <doctest.h>

#include "heatflow/errors.hpp"
#include "heatflow/saddle.hpp"

#include <algorithm>
#include <cmath>

using namespace heatflow;

namespace {

double nearest(const std::vector<cplx>& v, cplx w)
{
    double b = INFINITY;
    for (auto x : v) b = std::min(b, std::abs(x - w));
    return b;
}

}  // namespace

TEST_CASE("Q coefficients for one and two centres")
{
    cplx a(0.3, -0.7), z(1.1, 0.4), t(0.8, 0.2);
    auto q = q_coeffs(PolySpec({a}, {1}, 5), z, t);
    REQUIRE(q.size() == 3);
    CHECK(std::abs(q[2] - 1.0) < 1e-15);
    CHECK(std::abs(q[1] + z + a) < 1e-15);
    CHECK(std::abs(q[0] - (a * z + t)) < 1e-15);

    auto q2 = q_coeffs(PolySpec({{0, 1}, {0, -1}}, {1, 1}, 3), z, t);
    REQUIRE(q2.size() == 4);
    CHECK(std::abs(q2[3] - 1.0) < 1e-15);
    CHECK(std::abs(q2[2] + z) < 1e-15);
    CHECK(std::abs(q2[1] - (1.0 + t)) < 1e-15);
    CHECK(std::abs(q2[0] + z) < 1e-15);
}

TEST_CASE("saddles at t = 0 are z and the centres")
{
    PolySpec s({{1, 0}, {-1, 1}}, {2, 1}, 1);
    cplx z(0.2, 0.5);
    auto f = solve_saddles(s, z, 0.0);
    CHECK(nearest(f.saddles, z) < 1e-14);
    for (auto l : s.lambdas()) CHECK(nearest(f.saddles, l) < 1e-14);
}

TEST_CASE("one-centre saddles match the quadratic formula")
{
    PolySpec s({{0, 0}}, {1}, 4);
    auto f = solve_saddles(s, 3.0, 1.0);
    REQUIRE(f.size() == 2);
    CHECK(nearest(f.saddles, (3 + std::sqrt(5.0)) / 2) < 1e-14);
    CHECK(nearest(f.saddles, (3 - std::sqrt(5.0)) / 2) < 1e-14);
    CHECK_FALSE(f.degenerate);

    auto g = solve_saddles(s, 2.0, 1.0);
    CHECK(g.degenerate);
    for (auto u : g.saddles) CHECK(std::abs(u - 1.0) < 1e-6);
}

TEST_CASE("saddles satisfy the saddle equation and Vieta")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 3);
    for (cplx z : {cplx(0.3, 0.2), cplx(-2, 1), cplx(5, -4)}) {
        cplx t(1.5, 0.3);
        auto f = solve_saddles(s, z, t);
        REQUIRE(f.size() == 3);
        cplx sum = 0.0;
        for (auto u : f.saddles) {
            cplx lhs = u + (t / 2.0) * (1.0 / (u - cplx(0, 1)) + 1.0 / (u + cplx(0, 1)));
            CHECK(std::abs(lhs - z) < 1e-12 * (1 + std::abs(z)));
            sum += u;
        }
        CHECK(std::abs(sum - z) < 1e-12 * (1 + std::abs(z)));
    }
}

TEST_CASE("far from the centres one saddle sits near z and one near each centre")
{
    PolySpec s({{1, 0.5}, {-1, 0}, {0, -2}}, {1, 2, 1}, 2);
    cplx t = 0.7;
    cplx z(60, 25);
    auto f = solve_saddles(s, z, t);
    CHECK(nearest(f.saddles, z) < 0.05);
    for (auto l : s.lambdas()) CHECK(nearest(f.saddles, l) < 0.05);
}

TEST_CASE("height G")
{
    PolySpec s({{0, 0}}, {1}, 2);
    cplx u = cplx(0, 1) * ((1 + std::sqrt(5.0)) / 2);
    double g = height_G(s, cplx(0, 1), 1.0, u);
    double want = std::log((1 + std::sqrt(5.0)) / 2) - std::pow((1 + std::sqrt(5.0)) / 2 - 1, 2) / 2;
    CHECK(g == doctest::Approx(want).epsilon(1e-14));
    CHECK(g == doctest::Approx(0.2902).epsilon(1e-3));
    CHECK(std::isinf(height_G(s, 1.0, 1.0, 0.0)));
    CHECK(height_G(s, 0.0, 1.0, 1e-200) < -400);
    double far = height_G(s, 0.0, 2.0, 1e4);
    CHECK(far / (1e8 / 4) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("branch locus with one centre")
{
    cplx a(0.5, -0.25);
    for (cplx t : {cplx(1.0), cplx(0.3, 0.4)}) {
        auto B = branch_locus(PolySpec({a}, {1}, 3), t);
        CHECK_FALSE(B.unstable);
        REQUIRE(B.points.size() == 2);
        for (const auto& p : B.points) {
            CHECK(p.order == 2);
            CHECK(std::min(std::abs(p.z - (a + 2.0 * std::sqrt(t))), std::abs(p.z - (a - 2.0 * std::sqrt(t)))) <
                  1e-10);
            CHECK(std::abs(p.coalesced_u - (p.z + a) / 2.0) < 1e-6);
        }
    }
}

TEST_CASE("branch locus for two conjugate centres")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 2);
    for (double t : {0.1, 2.0, 5.0}) {
        auto B = branch_locus(s, t);
        CHECK_FALSE(B.unstable);
        CHECK(B.points.size() <= 4);
        double st = 1 + t;
        for (const auto& p : B.points) {
            // discriminant of u^3 - z u^2 + (1+t) u - z in z
            cplx z2 = p.z * p.z;
            cplx R = -4.0 * z2 * z2 + (st * st + 18 * st - 27) * z2 - 4 * st * st * st;
            CHECK(std::abs(R) < 1e-8 * (1 + std::pow(std::abs(p.z), 4)));
            auto q = q_coeffs(s, p.z, t);
            cplx u = p.coalesced_u;
            cplx qv = ((q[3] * u + q[2]) * u + q[1]) * u + q[0];
            cplx dqv = (3.0 * q[3] * u + 2.0 * q[2]) * u + q[1];
            CHECK(std::abs(qv) < 1e-6);
            CHECK(std::abs(dqv) < 1e-6);
        }
    }
    // at t = 2 the four points are +-2.2018 +- 0.59i
    auto B2 = branch_locus(s, 2.0);
    REQUIRE(B2.points.size() == 4);
    for (const auto& p : B2.points) {
        CHECK(std::abs(std::abs(p.z.real()) - 2.2018) < 1e-3);
        CHECK(std::abs(std::abs(p.z.imag()) - 0.59) < 5e-3);
    }
    // t = 8: two triple points at +-3 sqrt 3
    auto B8 = branch_locus(s, 8.0);
    REQUIRE(B8.points.size() == 2);
    for (const auto& p : B8.points) {
        CHECK(p.order == 3);
        CHECK(std::abs(std::abs(p.z) - 3 * std::sqrt(3.0)) < 1e-6);
    }
}

TEST_CASE("branch locus never exceeds 2d points")
{
    PolySpec s({{1, 0.5}, {-1, 0}, {0.2, -2}}, {1, 2, 1}, 2);
    for (cplx t : {cplx(0.05), cplx(1), cplx(3, 1)}) {
        auto B = branch_locus(s, t);
        CHECK_FALSE(B.unstable);
        int total = 0;
        for (const auto& p : B.points) total += p.order - 1;
        CHECK(total <= 2 * s.d());
        for (const auto& p : B.points) {
            auto f = solve_saddles(s, p.z, t);
            CHECK(f.min_gap < 1e-4);
        }
    }
}

TEST_CASE("continuation follows the analytic branch")
{
    PolySpec s({{0, 0}}, {1}, 2);
    BranchTrack tr{1.0, {3.0}, {(3 + std::sqrt(5.0)) / 2}};
    for (int k = 1; k <= 20; ++k) continue_along(s, tr, 3.0 + k / 20.0);
    for (size_t i = 0; i < tr.path.size(); ++i) {
        cplx z = tr.path[i];
        CHECK(std::abs(tr.u[i] - (z + std::sqrt(z * z - 4.0)) / 2.0) < 1e-12);
    }
}

TEST_CASE("loops swap sheets only around a branch point")
{
    PolySpec s({{0, 0}}, {1}, 2);
    auto loop = [&](cplx centre, double r) {
        cplx z0 = centre + r;
        auto f = solve_saddles(s, z0, 1.0);
        BranchTrack tr{1.0, {z0}, {f.saddles[0]}};
        for (int k = 1; k <= 64; ++k) continue_along(s, tr, centre + std::polar(r, 2 * M_PI * k / 64));
        return std::abs(tr.u.back() - tr.u.front());
    };
    CHECK(loop(2.0, 0.5) > 0.1);
    CHECK(loop(cplx(0, 2), 0.5) < 1e-12);
}

TEST_CASE("log critical points")
{
    PolySpec s({{1, 0}, {-1, 0}}, {1, 3}, 1);
    // 1/(u-1) + 3/(u+1) = 0 at u = 1/2
    auto c = log_critical_points(s);
    REQUIRE(c.size() == 1);
    CHECK(std::abs(c[0] - 0.5) < 1e-14);
}
