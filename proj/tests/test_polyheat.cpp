#include <doctest.h>

#include "heatflow/errors.hpp"
#include "heatflow/polyheat.hpp"

#include <cmath>

using namespace heatflow;

namespace {

std::vector<cplx> to_cd(const ScaledCoeffPoly& p)
{
    std::vector<cplx> out;
    for (const auto& c : p.coefficients()) out.push_back(c.to_cd());
    return out;
}

double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

// He_n(x) = 2^{-n/2} H_n(x / sqrt 2)
double prob_hermite(int n, double x) { return std::pow(2.0, -n / 2.0) * std::hermite(n, x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("spec validation")
{
    CHECK_THROWS_AS(PolySpec({{0, 0}, {0, 0}}, {1, 1}, 1), ConfigError);
    CHECK_THROWS_AS(PolySpec({{0, 0}}, {0}, 1), ConfigError);
    CHECK_THROWS_AS(PolySpec({{0, 0}}, {1}, 0), ConfigError);
    PolySpec s({{0, 1}, {0, -1}}, {1, 2}, 3);
    CHECK(s.total_degree() == 9);
    CHECK(s.delta() == doctest::Approx(2.0));
    CHECK(std::abs(s.center_of_mass() - cplx(0, -1.0 / 3)) < 1e-15);
}

TEST_CASE("expand_power matches binomial expansion of (z^2+1)^n")
{
    for (int n : {2, 7, 30}) {
        PolySpec s({{0, 1}, {0, -1}}, {1, 1}, n);
        auto c = to_cd(expand_power(s, 256));
        REQUIRE(c.size() == size_t(2 * n + 1));
        for (int k = 0; k <= 2 * n; ++k) {
            double want = (k % 2) ? 0.0 : binom(n, k / 2);
            CHECK(std::abs(c[k] - want) <= 1e-13 * (1 + want));
        }
    }
}

TEST_CASE("expand_power of a shifted monomial")
{
    cplx a(1, 1);
    PolySpec s({a}, {1}, 5);
    auto c = to_cd(expand_power(s, 128));
    for (int k = 0; k <= 5; ++k) {
        cplx want = binom(5, k) * std::pow(-a, 5 - k);
        CHECK(std::abs(c[k] - want) < 1e-13 * (1 + std::abs(want)));
    }
}

TEST_CASE("heat flow of z^2")
{
    PolySpec s({{0, 0}}, {2}, 1);
    auto p = expand_power(s, 128);
    auto fwd = to_cd(heat_evolve(p, 1.0, 2));
    CHECK(std::abs(fwd[0] - cplx(-0.5)) < 1e-30);
    CHECK(std::abs(fwd[2] - cplx(1.0)) < 1e-30);
    auto back = to_cd(heat_evolve(p, -1.0, 2));
    CHECK(std::abs(back[0] - cplx(0.5)) < 1e-30);
}

TEST_CASE("monomial heat flow is a scaled Hermite polynomial")
{
    for (int n : {5, 12, 20}) {
        for (double t : {0.5, 1.0, 3.0}) {
            PolySpec s({{0, 0}}, {1}, n);
            auto pt = heat_evolve(expand_power(s, 192), t, n);
            for (double x : {-1.3, 0.2, 0.9, 2.5}) {
                double want = std::pow(t / n, n / 2.0) * prob_hermite(n, x * std::sqrt(n / t));
                cplx got = eval_log(pt, x).value();
                CHECK(std::abs(got - want) < 1e-10 * (1 + std::abs(want)));
            }
        }
    }
}

TEST_CASE("Hermite route and derivative series agree")
{
    PolySpec s({{0.3, 1}, {-1, -0.2}, {0.5, -0.7}}, {1, 2, 1}, 6);
    auto p = expand_power(s, 256);
    for (cplx t : {cplx(0.7, 0), cplx(0, 1), cplx(-1, 0), 2.0 * std::polar(1.0, M_PI / 3)}) {
        auto a = heat_evolve(p, t, s.total_degree()).coefficients();
        auto b = heat_evolve_series(p, t, s.total_degree()).coefficients();
        for (size_t k = 0; k < a.size(); ++k) {
            double diff = mp::abs(a[k] - b[k]).to_double();
            double mag = mp::abs(a[k]).to_double();
            CHECK(diff <= 1e-60 * (1 + mag));
        }
    }
}

TEST_CASE("heat flow is a semigroup and t -> -t inverts")
{
    PolySpec s({{1, 0}, {-0.5, 0.5}}, {1, 1}, 8);
    const int N = s.total_degree();
    auto p = expand_power(s, 256);
    auto two = heat_evolve(heat_evolve(p, 0.5, N), cplx(0.25, 0.125), N).coefficients();
    auto one = heat_evolve(p, cplx(0.75, 0.125), N).coefficients();
    auto round = heat_evolve(heat_evolve(p, 1.5, N), -1.5, N).coefficients();
    auto orig = p.coefficients();
    for (int k = 0; k <= N; ++k) {
        CHECK(mp::abs(two[k] - one[k]).to_double() < 1e-60 * (1 + mp::abs(one[k]).to_double()));
        CHECK(mp::abs(round[k] - orig[k]).to_double() < 1e-60 * (1 + mp::abs(orig[k]).to_double()));
    }
}

TEST_CASE("zero-degree input is unchanged")
{
    auto p = ScaledCoeffPoly::from_coefficients({mp::Complex(cplx(2.0, 1.0))}, 128);
    auto q = heat_evolve(p, 3.0, 5);
    CHECK(std::abs(q.coefficient(0).to_cd() - cplx(2, 1)) < 1e-30);
}

TEST_CASE("coefficient storage round trip")
{
    mp::PrecisionScope scope(256);
    std::vector<mp::Complex> c = {mp::Complex(cplx(1e-200, 3.0)), mp::Complex(0.0), mp::Complex(cplx(-7.25, 1e100))};
    auto p = ScaledCoeffPoly::from_coefficients(c, 256);
    CHECK(p.log_modulus(1).is_inf());
    for (int k = 0; k < 3; ++k) {
        mp::Real err = mp::abs(p.coefficient(k) - c[k]);
        mp::Real mag = mp::abs(c[k]);
        CHECK((err <= mag * 1e-74));
    }
}

TEST_CASE("eval_log at an exact root is -inf")
{
    PolySpec s({{0.5, 0}, {-0.5, 0}}, {1, 1}, 1);
    auto p = expand_power(s, 128);
    CHECK(eval_log(p, 0.5).log_modulus.is_inf());
    // z^2 - 1/2 at 1/sqrt 2 in double: tiny but finite
    PolySpec m({{0, 0}}, {2}, 1);
    auto h = heat_evolve(expand_power(m, 256), 1.0, 2);
    CHECK(eval_log(h, std::sqrt(0.5)).log_abs() < -35.0);
}

TEST_CASE("contour integral agrees with coefficient evaluation")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 4);
    auto pt = heat_evolve(expand_power(s, 256), 2.0, s.total_degree());
    auto direct = eval_log(pt, 1.0);
    auto quad = contour_eval(s, 2.0, 1.0);
    CHECK(quad.converged);
    double rel = std::abs(quad.value.value() - direct.value()) / std::abs(direct.value());
    CHECK(rel < 1e-8);

    PolySpec t3({{0.3, 1}, {-1, -0.2}, {0.5, -0.7}}, {1, 2, 1}, 5);
    auto pt3 = heat_evolve(expand_power(t3, 256), 0.8, t3.total_degree());
    for (cplx z : {cplx(0.4, 0.3), cplx(-2.0, 1.0), cplx(2.5, -2.5)}) {
        auto a = eval_log(pt3, z);
        auto b = contour_eval(t3, 0.8, z);
        CHECK(b.converged);
        CHECK(std::abs(a.log_abs() - b.value.log_abs()) < 1e-9);
        CHECK(std::abs(a.phase.to_cd() - b.value.phase.to_cd()) < 1e-9);
    }
}

TEST_CASE("insufficient precision is reported")
{
    CHECK_THROWS_AS(expand_power(PolySpec({{1, 0}}, {1}, 3), 32), PrecisionExhausted);
    PolySpec s({{1, 0}, {-1, 0}}, {1, 1}, 100);
    CHECK_THROWS_AS(expand_power(s, 64), PrecisionExhausted);
    CHECK_NOTHROW(expand_power(s, mp::default_precision(s.total_degree())));
}
