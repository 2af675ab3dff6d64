#include "heatflow/roots.hpp"

#include "heatflow/aberth.hpp"
#include "heatflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace heatflow {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<cplx> circle_start(const std::vector<cplx>& b, unsigned seed)
{
    const int N = static_cast<int>(b.size()) - 1;
    cplx c = -b[N - 1] / (double(N) * b[N]);
    cplx q = b[N];
    for (int i = N - 1; i >= 0; --i) q = q * c + b[i];
    double r = std::pow(std::abs(q) / std::abs(b[N]), 1.0 / N);
    if (!(r > 0) || !std::isfinite(r)) r = 1.0;
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<cplx> z(N);
    for (int k = 0; k < N; ++k) z[k] = c + std::polar(r, 2 * M_PI * (k + jitter(gen)) / N + 0.4);
    return z;
}

std::vector<cplx> solve_double(const std::vector<cplx>& b, std::vector<cplx> z, int max_iter, bool parallel)
{
    const int N = static_cast<int>(b.size()) - 1;
    std::vector<char> done(N, 0);
    std::vector<double> berr(N, 1.0);
    for (int it = 0; it < max_iter; ++it)
        if (detail::aberth_sweep(b, z, done, berr, 53, 1e-15, parallel) == 0) break;
    return z;
}

std::vector<cplx> trim(std::vector<cplx> c)
{
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    return c;
}

}  // namespace

std::vector<cplx> roots_double(const std::vector<cplx>& coeffs, int max_iter)
{
    std::vector<cplx> b = trim(coeffs);
    const int N = static_cast<int>(b.size()) - 1;
    if (N <= 0) return {};
    if (N == 1) return {-b[0] / b[1]};
    return solve_double(b, circle_start(b, 0), max_iter, false);
}

EmpiricalMeasure find_all_roots(const ScaledCoeffPoly& poly, const RootConfig& cfg)
{
    const int bits = poly.precision();
    mp::PrecisionScope scope(bits);
    std::vector<mp::Complex> a = poly.coefficients();
    while (a.size() > 1 && a.back().is_zero()) a.pop_back();
    const int N = static_cast<int>(a.size()) - 1;

    EmpiricalMeasure m;
    m.precision = bits;
    m.accept_threshold = 10.0 * std::ldexp(1.0, -bits);
    if (N <= 0) return m;

    std::vector<mp::Complex> z;
    if (static_cast<int>(cfg.initial.size()) == N) {
        for (auto w : cfg.initial) z.emplace_back(w, bits);
    } else {
        // cheap double pass on a rescaled copy gives the multiprecision pass good starts
        double rho = 1.0;
        int lo = 0;
        while (poly.log_modulus(lo).is_inf()) ++lo;
        if (lo < N) rho = std::exp(((poly.log_modulus(lo) - poly.log_modulus(N)) / double(N - lo)).to_double());
        double top = -INFINITY;
        for (int k = 0; k <= N; ++k) {
            if (poly.log_modulus(k).is_inf()) continue;
            top = std::max(top, (poly.log_modulus(k) + k * std::log(rho)).to_double());
        }
        std::vector<cplx> b(N + 1, 0.0);
        for (int k = 0; k <= N; ++k) {
            if (poly.log_modulus(k).is_inf()) continue;
            double lm = (poly.log_modulus(k) + k * std::log(rho)).to_double() - top;
            b[k] = lm < -700 ? 0.0 : std::exp(lm) * poly.phase(k).to_cd();
        }
        std::vector<cplx> zd = solve_double(b, circle_start(b, cfg.seed), 300, cfg.parallel);
        double sep = 1e-10;
        for (int k = 0; k < N; ++k) {
            cplx w = zd[k];
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = std::polar(1.0, 2 * M_PI * k / N);
            for (int j = 0; j < k; ++j)
                if (std::abs(zd[j] - w) < sep) w += std::polar(10 * sep, 2 * M_PI * k / N);
            zd[k] = w;
            z.emplace_back(w * rho, bits);
        }
    }

    std::vector<char> done(N, 0);
    std::vector<double> berr(N, 1.0);
    int it = 0;
    int active = N;
    if (N == 1) {
        z[0] = -(a[0] / a[1]);
        active = 0;
    }
    for (; it < cfg.max_iter && active > 0; ++it)
        active = detail::aberth_sweep(a, z, done, berr, bits, m.accept_threshold, cfg.parallel);
    m.iterations = it;
    if (active > 0) {
        std::vector<int> bad;
        for (int k = 0; k < N; ++k)
            if (!done[k]) bad.push_back(k);
        throw RootFindingError("Aberth iteration did not converge for " + std::to_string(bad.size()) + " roots",
                               bad);
    }

    m.zeros.resize(N);
    m.log_residuals.resize(N);
    m.backward_errors.resize(N);
    for (int k = 0; k < N; ++k) {
        m.zeros[k] = z[k].to_cd();
        mp::Complex x = detail::Arith<mp::Complex>::guard(z[k]);
        mp::Complex p = a[N];
        mp::Real s = mp::abs(a[N]);
        mp::Real ax = mp::abs(x);
        for (int i = N - 1; i >= 0; --i) {
            p *= x;
            p += a[i];
            s *= ax;
            s += mp::abs(a[i]);
        }
        mp::Real ap = mp::abs(p);
        m.log_residuals[k] = ap.is_zero() ? -INFINITY : mp::log(ap).to_double();
        m.backward_errors[k] = ap.is_zero() ? 0.0 : (ap / s).to_double();
    }

    UnionFind uf(N);
    double r = std::sqrt(cfg.tol);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(m.zeros[i] - m.zeros[j]) < r * (1 + std::abs(m.zeros[i]))) uf.unite(i, j);
    std::vector<std::vector<int>> groups(N);
    for (int i = 0; i < N; ++i) groups[uf.find(i)].push_back(i);
    for (auto& g : groups) {
        if (g.size() < 2) continue;
        RootCluster c;
        c.members = g;
        c.center = 0.0;
        for (int i : g) c.center += m.zeros[i];
        c.center /= double(g.size());
        for (int i : g) c.radius = std::max(c.radius, std::abs(m.zeros[i] - c.center));
        m.clusters.push_back(std::move(c));
    }
    return m;
}

SupportBoundReport support_bound_check(const EmpiricalMeasure& m, const PolySpec& spec, cplx t)
{
    SupportBoundReport r;
    const int d = spec.d();
    r.radius = 2.0 * std::sqrt(std::abs(t)) * std::sqrt(1.0 + 1.0 / (2.0 * spec.n() * spec.alpha()));
    r.disks_disjoint = spec.delta() > 2 * r.radius;
    r.disk_counts.assign(d, 0);
    for (int j = 0; j < d; ++j) r.expected_counts.push_back(spec.alphas()[j] * spec.n());
    const double slack = 1e-12 * (1 + spec.lambda_max() + r.radius);
    for (int k = 0; k < m.size(); ++k) {
        double best = INFINITY;
        int which = -1;
        for (int j = 0; j < d; ++j) {
            double dist = std::abs(m.zeros[k] - spec.lambdas()[j]);
            if (dist < best) {
                best = dist;
                which = j;
            }
        }
        if (best > r.radius + slack) {
            r.outside.push_back(k);
            r.max_excess = std::max(r.max_excess, best - r.radius);
        } else {
            r.disk_counts[which] += 1;
        }
    }
    r.pass = r.outside.empty() && (!r.disks_disjoint || r.disk_counts == r.expected_counts);
    return r;
}

EmpiricalMeasure zeros_at(const PolySpec& spec, cplx t, int bits, const RootConfig& cfg)
{
    const int N = spec.total_degree();
    if (bits <= 0) bits = mp::default_precision(N);
    auto p = heat_evolve(expand_power(spec, bits), t, N);
    return find_all_roots(p, cfg);
}

}  // namespace heatflow
