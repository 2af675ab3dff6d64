#include <doctest.h>

#include "heatflow/mp.hpp"

#include <cmath>

using namespace heatflow;

TEST_CASE("mp real arithmetic at working precision")
{
    mp::PrecisionScope scope(200);
    mp::Real a(1.0), b(3.0);
    mp::Real third = a / b;
    CHECK(third.precision() == 200);
    mp::Real back = third * 3.0 - 1.0;
    CHECK(std::abs(back.to_double()) < 1e-59);
    CHECK(mp::sqrt(mp::Real(2.0)).to_double() == doctest::Approx(std::sqrt(2.0)));
    CHECK(mp::log(mp::exp(mp::Real(1.5))).to_double() == doctest::Approx(1.5));
}

TEST_CASE("mp precision scope restores")
{
    int before = mp::working_precision();
    {
        mp::PrecisionScope s(333);
        CHECK(mp::working_precision() == 333);
        mp::Real x(1.0);
        CHECK(x.precision() == 333);
    }
    CHECK(mp::working_precision() == before);
}

TEST_CASE("mp binary ops take the larger precision")
{
    mp::Real lo(1.0, 64), hi(3.0, 256);
    CHECK((lo / hi).precision() == 256);
    CHECK((hi + lo).precision() == 256);
}

TEST_CASE("mp complex ops match std::complex")
{
    std::complex<double> x(1.25, -0.5), y(-2.0, 0.75);
    mp::Complex a(x), b(y);
    auto close = [](std::complex<double> u, std::complex<double> v) { return std::abs(u - v) < 1e-14 * (1 + std::abs(v)); };
    CHECK(close((a * b).to_cd(), x * y));
    CHECK(close((a / b).to_cd(), x / y));
    CHECK(close((a + b).to_cd(), x + y));
    CHECK(close(mp::pow(a, 7).to_cd(), std::pow(x, 7)));
    CHECK(close(mp::exp(a).to_cd(), std::exp(x)));
    for (auto w : {std::complex<double>(-4, 0.1), std::complex<double>(-4, -0.1), std::complex<double>(3, 2),
                   std::complex<double>(-1, 0)})
        CHECK(close(mp::sqrt(mp::Complex(w)).to_cd(), std::sqrt(w)));
    mp::Complex sq = a;
    sq *= sq;
    CHECK(close(sq.to_cd(), x * x));
}

TEST_CASE("mp moved-from values can be reassigned")
{
    mp::Real a(2.0);
    mp::Real b(std::move(a));
    a = 5.0;
    CHECK(a.to_double() == 5.0);
    CHECK(b.to_double() == 2.0);
}
