#include <doctest.h>

#include "heatflow/dynamics.hpp"
#include "heatflow/errors.hpp"
#include "heatflow/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace heatflow;

TEST_CASE("velocity field")
{
    auto v = ode_rhs({cplx(1.5, 0), cplx(-1.5, 0)}, 2);
    CHECK(std::abs(v[0] - 1 / 6.0) < 1e-15);
    CHECK(std::abs(v[1] + 1 / 6.0) < 1e-15);
    std::vector<cplx> z{cplx(0.3, 1), cplx(-1, 0.2), cplx(2, -0.7), cplx(0.1, 0.1)};
    auto a = ode_rhs(z, 5, 0, false), b = ode_rhs(z, 5, 0, true);
    cplx sum = 0;
    for (size_t i = 0; i < z.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) < 1e-15);
        sum += a[i];
    }
    CHECK(std::abs(sum) < 1e-15);
    CHECK_THROWS_AS(ode_rhs({0.0, cplx(1e-9, 0)}, 2, 1e-6), CollisionError);
}

TEST_CASE("double root splits as sqrt(t/2)")
{
    std::vector<cplx> z0{std::sqrt(0.005), -std::sqrt(0.005)};
    auto B = integrate_from(z0, 2, 0.01, 1.0);
    CHECK(B.times.back() == 1.0);
    CHECK(std::abs(B.final()[0] - std::sqrt(0.5)) < 1e-6);
    CHECK(std::abs(B.final()[1] + std::sqrt(0.5)) < 1e-6);
    CHECK(B.min_gaps.back() > B.min_gaps.front());
}

TEST_CASE("ODE endpoints match the heat-evolved zeros")
{
    PolySpec mono({0.0}, {1}, 8);
    auto B = integrate(mono, 1.0);
    auto exact = zeros_at(mono, 1.0).zeros;
    CHECK(matched_max_distance(B.final(), exact) < 1e-6);

    PolySpec two({cplx(0, 1), cplx(0, -1)}, {1, 1}, 4);
    auto C = integrate(two, 0.8);
    CHECK(matched_max_distance(C.final(), zeros_at(two, 0.8).zeros) < 1e-6);
    cplx c0 = 0, c1 = 0;
    for (auto z : C.positions.front()) c0 += z;
    for (auto z : C.final()) c1 += z;
    CHECK(std::abs(c0 - c1) / C.final().size() < 1e-10);
}

TEST_CASE("Hungarian matching")
{
    std::vector<cplx> a{0.0, 1.0, cplx(0, 3)}, b{cplx(0, 3.1), 0.05, 1.1};
    auto p = optimal_matching(a, b);
    CHECK(p == std::vector<int>{1, 2, 0});
    CHECK(matched_max_distance(a, b) == doctest::Approx(0.1));
    // greedy nearest-first would pair 0 with 0.49 and strand 1 with -0.5
    std::vector<cplx> x{0.0, 0.5}, y{0.49, 1.0};
    CHECK(optimal_matching(x, y) == std::vector<int>{0, 1});
    CHECK_THROWS_AS(optimal_matching(x, {1.0}), ConfigError);
}

TEST_CASE("trajectory CSV")
{
    auto B = integrate_from({1.0, -1.0}, 2, 0, 0.1, {.record_dt = 0.05});
    std::ostringstream os;
    write_trajectory_csv(os, B);
    auto s = os.str();
    CHECK(s.rfind("t,j,re,im\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 2 * static_cast<long>(B.times.size()));
}
