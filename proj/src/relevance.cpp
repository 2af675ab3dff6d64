#include "heatflow/relevance.hpp"

#include "heatflow/errors.hpp"
#include "heatflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

namespace heatflow {

namespace {

struct Frame {
    cplx w;  // multiply by w to enter the frame where t is positive real
    PolySpec spec;
    cplx z;
    double t;
};

Frame enter_frame(const PolySpec& spec, cplx z, cplx t)
{
    if (t == 0.0) throw ConfigError("relevance needs t != 0");
    cplx w = std::polar(1.0, -0.5 * std::arg(t));
    if (t.imag() == 0.0 && t.real() > 0) w = 1.0;
    return {w, spec.rotated(w), z * w, std::abs(t)};
}

// |f''(u)| / 2 for f(u) = (1/alpha) sum alpha_j log(u - lambda_j) + (z - u)^2 / 2t
double curvature(const PolySpec& spec, double t, cplx u)
{
    cplx s = 0.0;
    for (int j = 0; j < spec.d(); ++j) {
        cplx r = u - spec.lambdas()[j];
        s += double(spec.alphas()[j]) / (r * r);
    }
    return 0.5 * std::abs(1.0 / t - s / double(spec.alpha()));
}

std::vector<double> build_axis(double lo, double hi, double c0, double c1, double hc,
                               const std::vector<std::pair<double, double>>& pts)
{
    std::vector<double> v;
    int m = std::max(1, static_cast<int>(std::ceil((c1 - c0) / hc)));
    for (int i = 0; i <= m; ++i) v.push_back(c0 + (c1 - c0) * i / m);
    double x = c1, s = hc;
    while (x < hi) {
        s *= 1.1;
        x = (hi - x < 1.5 * s) ? hi : x + s;
        v.push_back(x);
    }
    x = c0;
    s = hc;
    while (x > lo) {
        s *= 1.1;
        x = (x - lo < 1.5 * s) ? lo : x - s;
        v.push_back(x);
    }
    for (auto [p, delta] : pts) {
        if (p <= lo || p >= hi) continue;
        v.push_back(p);
        for (double e = hc / 2; e > delta; e /= 2) {
            v.push_back(p - e);
            v.push_back(p + e);
        }
        v.push_back(p - delta);
        v.push_back(p + delta);
    }
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double a : v) {
        if (a < lo || a > hi) continue;
        if (out.empty() || a - out.back() > 1e-13 * (1 + std::abs(a))) out.push_back(a);
    }
    return out;
}

struct Cluster {
    std::vector<int> members;  // saddle indices
    double lo, hi;             // height range
    double eps = 0;
};

// heights sorted into clusters of mutually tied saddles
std::vector<Cluster> height_clusters(const std::vector<double>& h, double tie_tol)
{
    std::vector<int> idx(h.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return h[a] < h[b]; });
    std::vector<Cluster> cs;
    for (int i : idx) {
        if (!cs.empty() && h[i] - cs.back().hi < tie_tol * (1 + std::abs(h[i]))) {
            cs.back().members.push_back(i);
            cs.back().hi = h[i];
        } else {
            cs.push_back({{i}, h[i], h[i]});
        }
    }
    for (size_t k = 0; k < cs.size(); ++k) {
        double gap = INFINITY;
        if (k > 0) gap = std::min(gap, cs[k].lo - cs[k - 1].hi);
        if (k + 1 < cs.size()) gap = std::min(gap, cs[k + 1].lo - cs[k].hi);
        cs[k].eps = std::isfinite(gap) ? std::min(std::max(1e-6, 1e-3 * gap), gap / 4) : 1e-3;
    }
    return cs;
}

double focus_spacing(double dh, double curv)
{
    return std::max(0.25 * std::sqrt(dh / std::max(curv, 1e-300)), 1e-9);
}

// near a branch point the quadratic model is useless; the neck scale is the
// distance to the partner saddle
double saddle_gap(const SaddleFan& fan, int k)
{
    double g = INFINITY;
    for (int j = 0; j < fan.size(); ++j)
        if (j != k) g = std::min(g, std::abs(fan.saddles[j] - fan.saddles[k]));
    return g;
}

}  // namespace

ConnectivityGrid make_grid(const PolySpec& spec, cplx z, double t, const std::vector<GridFocus>& focus, int core_cells,
                           bool parallel)
{
    ConnectivityGrid g;
    g.core_cells = core_cells;
    const double margin = std::sqrt(t) + 1;
    g.R = 4 * (spec.lambda_max() + std::sqrt(t) + std::abs(z));
    double x0 = z.real(), x1 = z.real(), y0 = z.imag(), y1 = z.imag();
    auto include = [&](cplx p) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    };
    for (auto l : spec.lambdas()) include(l);
    for (const auto& f : focus) include(f.p);
    x0 -= margin;
    x1 += margin;
    y0 -= margin;
    y1 += margin;
    g.R = std::max({g.R, y1 + 2 * margin, -y0 + 2 * margin, (x1 + 2 * margin) / 2, (-x0 + 2 * margin) / 2});
    const double hc = std::max(x1 - x0, y1 - y0) / core_cells;

    std::vector<std::pair<double, double>> px, py;
    for (auto l : spec.lambdas()) {
        px.emplace_back(l.real(), hc / 64);
        py.emplace_back(l.imag(), hc / 64);
    }
    for (const auto& f : focus) {
        px.emplace_back(f.p.real(), std::min(f.spacing, hc / 2));
        py.emplace_back(f.p.imag(), std::min(f.spacing, hc / 2));
    }
    g.xs = build_axis(-2 * g.R, 2 * g.R, x0, x1, hc, px);
    g.ys = build_axis(-g.R, g.R, y0, y1, hc, py);

    kernels::HeightParams hp;
    hp.lambdas = spec.lambdas();
    for (int a : spec.alphas()) hp.weights.push_back(double(a) / spec.alpha());
    hp.z = z;
    hp.t = t;
    if (parallel) kernels::height_field(hp, g.xs, g.ys, g.field);
    else kernels::height_field_serial(hp, g.xs, g.ys, g.field);
    return g;
}

bool grid_connected(const ConnectivityGrid& g, double h)
{
    const int nx = g.nx(), ny = g.ny();
    std::vector<char> seen(g.field.size(), 0);
    std::deque<int> q;
    for (int i = 0; i < nx; ++i)
        if (g.field[i] <= h) {
            seen[i] = 1;
            q.push_back(i);
        }
    while (!q.empty()) {
        int k = q.front();
        q.pop_front();
        int j = k / nx, i = k % nx;
        if (j == ny - 1) return true;
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                int a = i + di, b = j + dj;
                if (a < 0 || a >= nx || b < 0 || b >= ny) continue;
                int m = b * nx + a;
                if (!seen[m] && g.field[m] <= h) {
                    seen[m] = 1;
                    q.push_back(m);
                }
            }
    }
    return false;
}

bool sublevel_connected(const PolySpec& spec, cplx z, cplx t, double h, const RelevanceConfig& cfg)
{
    Frame f = enter_frame(spec, z, t);
    SaddleFan fan = solve_saddles(f.spec, f.z, f.t);
    int prev = -1;
    for (int level = 0; level <= cfg.max_level; ++level) {
        int cells = cfg.core_cells << level;
        std::vector<GridFocus> focus;
        for (int k = 0; k < fan.size(); ++k) {
            double dh = std::max(std::abs(h - fan.heights[k]), 1e-9);
            double sp = std::min(focus_spacing(dh, curvature(f.spec, f.t, fan.saddles[k])), 0.1 * saddle_gap(fan, k));
            focus.push_back({fan.saddles[k], std::ldexp(sp, -level)});
        }
        bool c = grid_connected(make_grid(f.spec, f.z, f.t, focus, cells, cfg.parallel), h);
        if (level > 0 && int(c) == prev) return c;
        prev = c;
    }
    throw UndecidedError("sublevel connectivity did not stabilise under refinement");
}

RelevanceCertificate select_max_relevant(const PolySpec& spec, cplx z, cplx t, const RelevanceConfig& cfg)
{
    Frame f = enter_frame(spec, z, t);
    SaddleFan fan = solve_saddles(f.spec, f.z, f.t);
    if (fan.degenerate) throw DegenerateFan("z is on the branch locus");
    auto clusters = height_clusters(fan.heights, cfg.tie_tol);

    RelevanceCertificate cert;
    cert.z = z;
    cert.t = t;
    int prev = -2;
    int decided = -1;
    for (int level = 0; level <= cfg.max_level; ++level) {
        const int cells = cfg.core_cells << level;
        std::vector<GridFocus> focus;
        for (const auto& c : clusters)
            for (int k : c.members) {
                double curv = curvature(f.spec, f.t, fan.saddles[k]);
                double sp = std::min(focus_spacing(c.eps, curv), 0.1 * saddle_gap(fan, k));
                focus.push_back({fan.saddles[k], std::ldexp(sp, -level)});
            }
        ConnectivityGrid g = make_grid(f.spec, f.z, f.t, focus, cells, cfg.parallel);
        cert.resolutions.push_back(cells);

        // connectivity below and above every cluster must read F..F T..T with
        // the single flip inside one cluster's bracket
        std::vector<char> seq;
        for (const auto& c : clusters) {
            seq.push_back(grid_connected(g, c.lo - c.eps));
            seq.push_back(grid_connected(g, c.hi + c.eps));
        }
        int result = -1;
        int flips = 0;
        for (size_t k = 1; k < seq.size(); ++k) {
            if (seq[k] != seq[k - 1]) ++flips;
            if (seq[k] < seq[k - 1]) flips += 10;
        }
        if (flips == 1 && !seq.front() && seq.back()) {
            for (size_t k = 0; k < clusters.size(); ++k)
                if (!seq[2 * k] && seq[2 * k + 1]) result = static_cast<int>(k);
        }
        if (level > 0 && result >= 0 && result == prev) {
            decided = result;
            break;
        }
        prev = result;
    }
    if (decided < 0) throw UndecidedError("relevance selection did not stabilise under refinement");
    const Cluster& c = clusters[decided];
    if (c.members.size() > 1) throw TieError("maximally relevant saddle is tied in height");

    cert.fan = fan;
    cert.fan.z = z;
    cert.fan.t = t;
    for (auto& u : cert.fan.saddles) u /= f.w;
    cert.chosen = c.members[0];
    cert.u = cert.fan.saddles[cert.chosen];
    cert.height = fan.heights[cert.chosen];
    cert.eps = c.eps;
    cert.h_low = c.lo - c.eps;
    cert.h_high = c.hi + c.eps;
    for (int k = 0; k < fan.size(); ++k)
        if (fan.heights[k] > cert.height) cert.irrelevant.push_back(k);
    return cert;
}

cplx FieldRegion::cell(int i, int j) const
{
    return {lo.real() + (hi.real() - lo.real()) * (i + 0.5) / nx, lo.imag() + (hi.imag() - lo.imag()) * (j + 0.5) / ny};
}

RelevanceCertificate anchor_certificate(const PolySpec& spec, cplx t, const RelevanceConfig& cfg)
{
    double r = 10 * (spec.lambda_max() + std::sqrt(std::abs(t))) + 1;
    cplx z0 = spec.center_of_mass() + cplx(0, 1) * std::polar(r, 0.5 * std::arg(t));
    return select_max_relevant(spec, z0, t, cfg);
}

RelevanceField relevance_field(const PolySpec& spec, cplx t, const FieldRegion& region,
                               const RelevanceCertificate& seed, const FieldConfig& cfg)
{
    RelevanceField F;
    F.region = region;
    F.t = t;
    const int nx = region.nx, ny = region.ny, n = nx * ny;
    F.state.assign(n, CellState::skipped);
    F.u.assign(n, cplx(NAN, NAN));
    F.branch.assign(n, -1);
    F.fans.resize(n);
    F.chosen.assign(n, -1);

    std::vector<char> active(n, 0), visited(n, 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) active[F.index(i, j)] = !region.mask || region.mask(region.cell(i, j));

    std::mt19937 gen(cfg.seed);
    std::uniform_real_distribution<double> coin(0, 1);

    auto select_cell = [&](int k, cplx z) {
        try {
            auto c = select_max_relevant(spec, z, t, cfg.relevance);
            ++F.selections;
            F.fans[k] = c.fan;
            F.chosen[k] = c.chosen;
            F.u[k] = c.u;
            F.state[k] = CellState::selected;
            return true;
        } catch (const NumericalError&) {
            F.state[k] = CellState::undefined;
            return false;
        }
    };

    auto near_tie = [&](const SaddleFan& fan, int k) {
        for (int j = 0; j < fan.size(); ++j)
            if (j != k && std::abs(fan.heights[j] - fan.heights[k]) < cfg.height_tol * (1 + std::abs(fan.heights[k])))
                return true;
        return false;
    };

    std::deque<int> queue;
    auto start_from = [&](int k, const RelevanceCertificate* anchor) {
        int i = k % nx, j = k / nx;
        cplx z = region.cell(i, j);
        visited[k] = 1;
        bool ok = false;
        if (anchor) {
            try {
                BranchTrack tr{t, {anchor->z}, {anchor->u}};
                continue_along(spec, tr, z);
                SaddleFan fan = solve_saddles(spec, z, t);
                auto idx = continue_root(fan.saddles, tr.u.back());
                if (idx && !fan.degenerate && !near_tie(fan, *idx)) {
                    F.fans[k] = fan;
                    F.chosen[k] = *idx;
                    F.u[k] = fan.saddles[*idx];
                    F.state[k] = CellState::propagated;
                    ok = true;
                }
            } catch (const NumericalError&) {
            }
        }
        if (!ok) ok = select_cell(k, z);
        if (ok) queue.push_back(k);
    };

    // first cell: the active one nearest the anchor
    int first = -1;
    double best = INFINITY;
    for (int k = 0; k < n; ++k)
        if (active[k] && std::abs(region.cell(k % nx, k / nx) - seed.z) < best) {
            best = std::abs(region.cell(k % nx, k / nx) - seed.z);
            first = k;
        }
    if (first < 0) return F;
    start_from(first, &seed);

    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (;;) {
        while (!queue.empty()) {
            int p = queue.front();
            queue.pop_front();
            const SaddleFan& fp = F.fans[p];
            const int cp = F.chosen[p];
            for (int e = 0; e < 4; ++e) {
                int i = p % nx + di[e], j = p / nx + dj[e];
                if (i < 0 || i >= nx || j < 0 || j >= ny) continue;
                int q = F.index(i, j);
                if (!active[q] || visited[q]) continue;
                visited[q] = 1;
                cplx z = region.cell(i, j);
                SaddleFan fq = solve_saddles(spec, z, t);
                if (fq.degenerate) {
                    F.state[q] = CellState::undefined;
                    continue;
                }
                auto perm = match_sheets(fp.saddles, fq.saddles);
                bool reselect = !perm.has_value();
                int k = -1;
                if (!reselect) {
                    k = (*perm)[cp];
                    for (int s = 0; s < fp.size() && !reselect; ++s) {
                        if (s == cp) continue;
                        bool before = fp.heights[cp] > fp.heights[s];
                        bool after = fq.heights[k] > fq.heights[(*perm)[s]];
                        if (before != after) reselect = true;
                    }
                    if (near_tie(fq, k)) reselect = true;
                }
                if (reselect) {
                    if (select_cell(q, z)) queue.push_back(q);
                    continue;
                }
                F.fans[q] = fq;
                F.chosen[q] = k;
                F.u[q] = fq.saddles[k];
                F.state[q] = CellState::propagated;
                if (coin(gen) < cfg.spot_rate) {
                    ++F.spot_checks;
                    int before = k;
                    if (select_cell(q, z)) {
                        if (F.chosen[q] != before) ++F.inconsistencies;
                    } else {
                        continue;
                    }
                }
                queue.push_back(q);
            }
        }
        int next = -1;
        for (int k = 0; k < n; ++k)
            if (active[k] && !visited[k]) {
                next = k;
                break;
            }
        if (next < 0) break;
        start_from(next, nullptr);
    }

    // label components joined by continuation of the chosen sheet
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto defined = [&](int k) { return F.state[k] == CellState::propagated || F.state[k] == CellState::selected; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int a = F.index(i, j);
            if (!defined(a)) continue;
            for (int e = 0; e < 2; ++e) {
                int i2 = i + (e == 0), j2 = j + (e == 1);
                if (i2 >= nx || j2 >= ny) continue;
                int b = F.index(i2, j2);
                if (!defined(b)) continue;
                auto perm = match_sheets(F.fans[a].saddles, F.fans[b].saddles);
                if (perm && (*perm)[F.chosen[a]] == F.chosen[b]) parent[find(a)] = find(b);
            }
        }
    std::vector<int> label(n, -1);
    for (int k = 0; k < n; ++k) {
        if (!defined(k)) continue;
        int r = find(k);
        if (label[r] < 0) label[r] = F.branch_count++;
        F.branch[k] = label[r];
    }
    return F;
}

}  // namespace heatflow
