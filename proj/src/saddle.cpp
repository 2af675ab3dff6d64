#include "heatflow/saddle.hpp"

#include "heatflow/errors.hpp"
#include "heatflow/roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace heatflow {

namespace {

using Poly = std::vector<cplx>;

Poly mul_linear(const Poly& p, cplx root)
{
    Poly r(p.size() + 1, 0.0);
    for (size_t k = 0; k < p.size(); ++k) {
        r[k + 1] += p[k];
        r[k] -= root * p[k];
    }
    return r;
}

cplx horner(const Poly& p, cplx x)
{
    cplx v = 0.0;
    for (size_t k = p.size(); k-- > 0;) v = v * x + p[k];
    return v;
}

Poly derivative(const Poly& p)
{
    Poly r;
    for (size_t k = 1; k < p.size(); ++k) r.push_back(double(k) * p[k]);
    return r;
}

double spec_scale(const PolySpec& spec, cplx t) { return 1.0 + spec.lambda_max() + std::sqrt(std::abs(t)); }

// weighted log-derivative numerator sum_j alpha_j prod_{k != j}(u - lambda_k)
Poly log_derivative_numerator(const PolySpec& spec)
{
    const int d = spec.d();
    Poly a(d, 0.0);
    for (int j = 0; j < d; ++j) {
        Poly p{1.0};
        for (int k = 0; k < d; ++k)
            if (k != j) p = mul_linear(p, spec.lambdas()[k]);
        for (int k = 0; k < d; ++k) a[k] += double(spec.alphas()[j]) * p[k];
    }
    return a;
}

}  // namespace

std::vector<cplx> q_coeffs(const PolySpec& spec, cplx z, cplx t)
{
    const int d = spec.d();
    Poly pi{1.0};
    for (auto l : spec.lambdas()) pi = mul_linear(pi, l);
    Poly q = mul_linear(pi, z);  // (u - z) prod (u - lambda_j)
    Poly a = log_derivative_numerator(spec);
    cplx c = t / double(spec.alpha());
    for (int k = 0; k < d; ++k) q[k] += c * a[k];
    return q;
}

double branch_tolerance(const PolySpec& spec, cplx z, cplx t)
{
    (void)z;
    return 1e3 * std::sqrt(std::numeric_limits<double>::epsilon() / 2) * spec_scale(spec, t);
}

double height_G(const PolySpec& spec, cplx z, cplx t, cplx u)
{
    double s = 0;
    for (int j = 0; j < spec.d(); ++j) {
        double r = std::abs(u - spec.lambdas()[j]);
        if (r == 0) return -INFINITY;
        s += spec.alphas()[j] * std::log(r);
    }
    cplx w = z - u;
    return s / spec.alpha() + (w * w / (2.0 * t)).real();
}

SaddleFan solve_saddles(const PolySpec& spec, cplx z, cplx t)
{
    SaddleFan f;
    f.z = z;
    f.t = t;
    Poly q = q_coeffs(spec, z, t);
    Poly dq = derivative(q);
    f.saddles = roots_double(q);
    for (auto& u : f.saddles) {
        // a couple of Newton steps, kept only while the residual drops
        for (int it = 0; it < 2; ++it) {
            cplx p = horner(q, u), dp = horner(dq, u);
            if (dp == 0.0) break;
            cplx v = u - p / dp;
            if (std::abs(horner(q, v)) < std::abs(p)) u = v;
            else break;
        }
    }
    const int m = f.size();
    f.min_gap = INFINITY;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) f.min_gap = std::min(f.min_gap, std::abs(f.saddles[i] - f.saddles[j]));
    f.degenerate = f.min_gap < branch_tolerance(spec, z, t);
    for (auto u : f.saddles) {
        f.heights.push_back(height_G(spec, z, t, u));
        double r = std::abs(horner(q, u));
        f.log_residuals.push_back(r == 0 ? -INFINITY : std::log(r));
    }
    return f;
}

std::vector<cplx> log_critical_points(const PolySpec& spec) { return roots_double(log_derivative_numerator(spec)); }

cplx sylvester_resultant(const PolySpec& spec, cplx z, cplx t)
{
    Poly f = q_coeffs(spec, z, t);
    Poly g = derivative(f);
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    const int size = m + n;
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(size, size);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) S(i, i + k) = f[m - k];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) S(n + i, i + k) = g[n - k];
    return S.partialPivLu().determinant();
}

BranchLocus branch_locus(const PolySpec& spec, cplx t)
{
    if (t == 0.0) throw ConfigError("branch locus needs t != 0");
    const int d = spec.d();
    const int M = 2 * d + 1;
    const double rho = 2.0 * spec_scale(spec, t);

    std::vector<cplx> vals(M);
    for (int k = 0; k < M; ++k) vals[k] = sylvester_resultant(spec, std::polar(rho, 2 * M_PI * k / M), t);
    BranchLocus B;
    B.resultant.assign(M, 0.0);
    double top = 0;
    for (int j = 0; j < M; ++j) {
        cplx c = 0.0;
        for (int k = 0; k < M; ++k) c += vals[k] * std::polar(1.0, -2 * M_PI * double(j) * k / M);
        c /= double(M);
        top = std::max(top, std::abs(c));
        B.resultant[j] = c / std::pow(rho, j);
    }

    cplx zc = std::polar(rho, M_PI / M);
    cplx direct = sylvester_resultant(spec, zc, t);
    cplx interp = horner(B.resultant, zc);
    B.consistency_error = std::abs(direct - interp) / std::max(top, std::abs(direct));
    B.unstable = !(B.consistency_error < 1e-8);

    Poly r = B.resultant;
    while (r.size() > 1 && std::abs(r.back()) * std::pow(rho, r.size() - 1) < 1e-11 * top) r.pop_back();
    for (size_t j = 0; j < r.size(); ++j)
        if (std::abs(r[j]) * std::pow(rho, j) < 1e-14 * top) r[j] = 0.0;
    std::vector<cplx> zr = roots_double(r);

    // coincident roots of R mark higher-order branch points
    const int nr = static_cast<int>(zr.size());
    std::vector<int> parent(nr);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const double merge = 3e-5 * rho;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(zr[i] - zr[j]) < merge) parent[find(i)] = find(j);
    std::vector<std::vector<int>> groups(nr);
    for (int i = 0; i < nr; ++i) groups[find(i)].push_back(i);

    for (const auto& g : groups) {
        if (g.empty()) continue;
        BranchPoint bp;
        bp.z = 0.0;
        for (int i : g) bp.z += zr[i];
        bp.z /= double(g.size());
        bp.order = static_cast<int>(g.size()) + 1;

        SaddleFan f = solve_saddles(spec, bp.z, t);
        const int s = f.size();
        int bi = 0, bj = 1;
        double best = INFINITY;
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < i; ++j)
                if (std::abs(f.saddles[i] - f.saddles[j]) < best) {
                    best = std::abs(f.saddles[i] - f.saddles[j]);
                    bi = i;
                    bj = j;
                }
        std::vector<int> chosen{bi, bj};
        std::vector<char> used(s, 0);
        used[bi] = used[bj] = 1;
        while (static_cast<int>(chosen.size()) < std::min(bp.order, s)) {
            cplx mean = 0.0;
            for (int i : chosen) mean += f.saddles[i];
            mean /= double(chosen.size());
            int pick = -1;
            double dmin = INFINITY;
            for (int i = 0; i < s; ++i)
                if (!used[i] && std::abs(f.saddles[i] - mean) < dmin) {
                    dmin = std::abs(f.saddles[i] - mean);
                    pick = i;
                }
            chosen.push_back(pick);
            used[pick] = 1;
        }
        bp.coalesced_u = 0.0;
        for (int i : chosen) bp.coalesced_u += f.saddles[i];
        bp.coalesced_u /= double(chosen.size());
        B.points.push_back(bp);
    }
    std::sort(B.points.begin(), B.points.end(), [](const BranchPoint& a, const BranchPoint& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return B;
}

std::optional<int> continue_root(const std::vector<cplx>& roots, cplx u_prev)
{
    const int n = static_cast<int>(roots.size());
    if (n == 0) return std::nullopt;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return std::abs(roots[a] - u_prev) < std::abs(roots[b] - u_prev); });
    if (n == 1) return idx[0];
    double near = std::abs(roots[idx[0]] - u_prev);
    double gap = std::abs(roots[idx[1]] - roots[idx[0]]);
    if (near > 0.5 * gap) return std::nullopt;
    return idx[0];
}

std::optional<std::vector<int>> match_sheets(const std::vector<cplx>& from, const std::vector<cplx>& to)
{
    std::vector<int> perm;
    std::vector<char> taken(to.size(), 0);
    for (auto u : from) {
        auto k = continue_root(to, u);
        if (!k || taken[*k]) return std::nullopt;
        taken[*k] = 1;
        perm.push_back(*k);
    }
    return perm;
}

StepStatus continue_branch(const PolySpec& spec, BranchTrack& track, cplx next_z)
{
    if (track.u.empty()) throw ConfigError("branch track needs a starting saddle");
    SaddleFan f = solve_saddles(spec, next_z, track.t);
    auto k = continue_root(f.saddles, track.u.back());
    if (!k) return StepStatus::needs_subdivision;
    track.path.push_back(next_z);
    track.u.push_back(f.saddles[*k]);
    return StepStatus::accepted;
}

void continue_along(const PolySpec& spec, BranchTrack& track, cplx target, int max_depth)
{
    if (continue_branch(spec, track, target) == StepStatus::accepted) return;
    if (max_depth <= 0) throw SheetAmbiguity("saddle continuation is ambiguous near a branch point");
    cplx mid = 0.5 * (track.path.back() + target);
    continue_along(spec, track, mid, max_depth - 1);
    continue_along(spec, track, target, max_depth - 1);
}

}  // namespace heatflow
