#include <doctest.h>

#include "heatflow/errors.hpp"
#include "heatflow/roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

using namespace heatflow;

namespace {

std::vector<double> sorted_real(const std::vector<cplx>& z)
{
    std::vector<double> r;
    for (auto w : z) r.push_back(w.real());
    std::sort(r.begin(), r.end());
    return r;
}

// zeros of He_n from the symmetric Jacobi matrix
std::vector<double> hermite_nodes(int n)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(double(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("double roots of a small polynomial")
{
    // (u - 1)(u + 2i)(u - 3 + i)
    cplx r1(1, 0), r2(0, -2), r3(3, -1);
    std::vector<cplx> c = {-r1 * r2 * r3, r1 * r2 + r1 * r3 + r2 * r3, -(r1 + r2 + r3), 1.0};
    auto z = roots_double(c);
    REQUIRE(z.size() == 3);
    for (cplx r : {r1, r2, r3}) {
        double best = 1e9;
        for (auto w : z) best = std::min(best, std::abs(w - r));
        CHECK(best < 1e-13);
    }
}

TEST_CASE("monomial heat zeros are scaled Hermite nodes")
{
    for (int n : {8, 25, 60}) {
        double t = 1.0;
        PolySpec s({{0, 0}}, {1}, n);
        auto m = zeros_at(s, t);
        REQUIRE(m.size() == n);
        auto got = sorted_real(m.zeros);
        auto want = hermite_nodes(n);
        double scale = std::sqrt(t / n);
        for (int k = 0; k < n; ++k) {
            CHECK(std::abs(got[k] - scale * want[k]) < 1e-11);
            CHECK(std::abs(m.zeros[k].imag()) < 1e-12);
        }
        for (double be : m.backward_errors) CHECK(be < 1e-30);
    }
}

TEST_CASE("multiple root comes back as a cluster")
{
    cplx a(0.5, -0.25);
    const int mult = 5;
    PolySpec s({a}, {1}, mult);
    auto p = expand_power(s, 128);
    RootConfig cfg;
    cfg.tol = 1e-12;
    auto m = find_all_roots(p, cfg);
    REQUIRE(m.clusters.size() == 1);
    CHECK(m.clusters[0].members.size() == size_t(mult));
    for (auto z : m.zeros) CHECK(std::abs(z - a) < std::pow(cfg.tol, 1.0 / mult));
}

TEST_CASE("two clusters for (z^2+1)^n before the flow")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 6);
    auto m = find_all_roots(expand_power(s, 160));
    CHECK(m.clusters.size() == 2);
    for (const auto& c : m.clusters) {
        CHECK(c.members.size() == 6);
        CHECK(std::abs(std::abs(c.center.imag()) - 1) < 1e-6);
    }
}

TEST_CASE("zeros sit inside the support bound")
{
    PolySpec s({{0, 1}, {0, -1}}, {1, 1}, 30);
    for (double t : {0.05, 0.5, 2.0}) {
        auto m = zeros_at(s, t);
        auto r = support_bound_check(m, s, t);
        CHECK(r.outside.empty());
        if (t == 0.05) {
            CHECK(r.disks_disjoint);
            CHECK(r.disk_counts == std::vector<int>{30, 30});
        }
        CHECK(r.pass);
    }
}

TEST_CASE("warm start is honoured")
{
    PolySpec s({{1, 0}, {-1, 0}}, {1, 1}, 4);
    auto cold = zeros_at(s, 0.3);
    RootConfig cfg;
    cfg.initial = cold.zeros;
    auto warm = zeros_at(s, 0.3, 0, cfg);
    CHECK(warm.iterations <= 3);
}
