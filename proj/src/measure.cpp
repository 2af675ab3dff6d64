#include "heatflow/measure.hpp"

#include "heatflow/errors.hpp"
#include "heatflow/roots.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace heatflow {

namespace {

double scale_of(const PolySpec& spec, cplx t) { return 1.0 + spec.lambda_max() + std::sqrt(std::abs(t)); }

struct Point {
    cplx z, ui, uj;
};

std::optional<std::pair<cplx, cplx>> carry(const std::vector<cplx>& saddles, cplx ui, cplx uj)
{
    auto a = continue_root(saddles, ui);
    auto b = continue_root(saddles, uj);
    if (!a || !b || *a == *b) return std::nullopt;
    return std::make_pair(saddles[*a], saddles[*b]);
}

double hdiff(const PolySpec& spec, cplx t, const Point& p)
{
    return height_G(spec, p.z, t, p.ui) - height_G(spec, p.z, t, p.uj);
}

// Newton onto the nodal set of G(z,u_i) - G(z,u_j); the gradient in z is conj((u_j - u_i)/t)
std::optional<Point> correct(const PolySpec& spec, cplx t, cplx z, cplx ui, cplx uj, double cap)
{
    Point p{z, ui, uj};
    for (int it = 0; it < 16; ++it) {
        SaddleFan f = solve_saddles(spec, p.z, t);
        auto c = carry(f.saddles, p.ui, p.uj);
        if (!c) return std::nullopt;
        p.ui = c->first;
        p.uj = c->second;
        double h = hdiff(spec, t, p);
        double g = height_G(spec, p.z, t, p.ui);
        if (std::abs(h) < 1e-12 * (1 + std::abs(g))) return p;
        cplx w = (p.uj - p.ui) / t;
        if (std::abs(w) == 0) return std::nullopt;
        cplx dz = -h * std::conj(w) / std::norm(w);
        if (std::abs(dz) > cap) return std::nullopt;
        p.z += dz;
    }
    return std::nullopt;
}

cplx tangent(cplx t, const Point& p)
{
    cplx w = (p.uj - p.ui) / t;
    return cplx(0, 1) * std::conj(w) / std::abs(w);
}

double rho_of(cplx t, const Point& p) { return std::abs(p.ui - p.uj) / (2 * M_PI * std::abs(t)); }

struct Trace {
    std::vector<Point> pts;
    ArcEnd end = ArcEnd::stall;
};

struct Tracer {
    const PolySpec& spec;
    cplx t;
    const std::vector<BranchPoint>& bps;
    const std::vector<Disk>& region;
    double scale;
    double max_step;
    int max_samples;

    bool inside(cplx z) const
    {
        for (const auto& d : region)
            if (std::abs(z - d.c) <= d.r) return true;
        return false;
    }

    const BranchPoint* nearest_bp(cplx z, double& dist) const
    {
        const BranchPoint* best = nullptr;
        dist = INFINITY;
        for (const auto& b : bps)
            if (std::abs(b.z - z) < dist) {
                dist = std::abs(b.z - z);
                best = &b;
            }
        return best;
    }

    Trace run(const Point& start, double dir) const
    {
        Trace tr;
        Point cur = start;
        cplx tau_prev = dir * tangent(t, cur);
        const double snap = 1e-7 * scale;
        for (int n = 0; n < max_samples; ++n) {
            double dbp;
            const BranchPoint* bp = nearest_bp(cur.z, dbp);
            if (bp && dbp < snap) {
                tr.pts.push_back({bp->z, bp->coalesced_u, bp->coalesced_u});
                tr.end = ArcEnd::branch_point;
                return tr;
            }
            double ds = std::min(max_step, 0.25 * dbp);
            std::optional<Point> next;
            cplx tau_new;
            while (ds > 1e-12 * scale) {
                cplx tau = tangent(t, cur);
                if ((tau * std::conj(tau_prev)).real() < 0) tau = -tau;
                auto q = correct(spec, t, cur.z + ds * tau, cur.ui, cur.uj, 0.5 * ds);
                if (q && std::abs(q->z - cur.z) < 2 * ds) {
                    tau_new = tangent(t, *q);
                    if ((tau_new * std::conj(tau)).real() < 0) tau_new = -tau_new;
                    if (std::abs(std::arg(tau_new * std::conj(tau))) < 0.3) {
                        next = q;
                        break;
                    }
                }
                ds /= 2;
            }
            if (!next) {
                tr.end = ArcEnd::stall;
                return tr;
            }
            cur = *next;
            tau_prev = tau_new;
            tr.pts.push_back(cur);
            if (!inside(cur.z)) {
                tr.end = ArcEnd::region_exit;
                return tr;
            }
            if (n > 8 && std::abs(cur.z - start.z) < 0.5 * ds) {
                tr.end = ArcEnd::closed;
                return tr;
            }
        }
        tr.end = ArcEnd::stall;
        return tr;
    }
};

double trapezoid(const std::vector<ArcSample>& s, int stride)
{
    double m = 0;
    size_t k = 0;
    for (; k + stride < s.size(); k += stride) m += 0.5 * (s[k].rho + s[k + stride].rho) * std::abs(s[k + stride].z - s[k].z);
    if (k + 1 < s.size()) m += 0.5 * (s[k].rho + s.back().rho) * std::abs(s.back().z - s[k].z);
    return m;
}

double primitive_mass(const PolySpec& spec, cplx t, const std::vector<ArcSample>& s)
{
    double total = 0;
    const double a = spec.alpha();
    for (size_t k = 0; k + 1 < s.size(); ++k) {
        cplx d = 0.0;
        for (int j = 0; j < spec.d(); ++j) {
            cplx l = spec.lambdas()[j];
            double w = spec.alphas()[j] / a;
            cplx ri = (s[k + 1].ui - l) / (s[k].ui - l);
            cplx rj = (s[k + 1].uj - l) / (s[k].uj - l);
            d += w * (std::log(ri) - std::log(rj));
        }
        auto sq = [](cplx x) { return x * x; };
        d += (sq(s[k + 1].z - s[k + 1].ui) - sq(s[k].z - s[k].ui) - sq(s[k + 1].z - s[k + 1].uj) + sq(s[k].z - s[k].uj)) /
             (2.0 * t);
        total += d.imag();
    }
    return std::abs(total) / (2 * M_PI);
}

double dist_to_polyline(cplx z, const std::vector<Point>& pl)
{
    double best = INFINITY;
    for (size_t k = 0; k + 1 < pl.size(); ++k) {
        cplx a = pl[k].z, b = pl[k + 1].z;
        cplx ab = b - a;
        double s = std::norm(ab) > 0 ? std::clamp(((z - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0) : 0.0;
        best = std::min(best, std::abs(z - (a + s * ab)));
    }
    if (pl.size() == 1) best = std::abs(z - pl[0].z);
    return best;
}

void finish_arc(const PolySpec& spec, cplx t, SupportArc& arc)
{
    arc.mass_trapezoid = trapezoid(arc.samples, 1);
    if (arc.samples.size() >= 5) {
        double coarse = trapezoid(arc.samples, 2);
        arc.mass = arc.mass_trapezoid + (arc.mass_trapezoid - coarse) / 3;
    } else {
        arc.mass = arc.mass_trapezoid;
    }
    arc.mass_primitive = primitive_mass(spec, t, arc.samples);
}

}  // namespace

std::string to_string(ArcEnd e)
{
    switch (e) {
    case ArcEnd::branch_point: return "branch_point";
    case ArcEnd::junction: return "junction";
    case ArcEnd::region_exit: return "region_exit";
    case ArcEnd::stall: return "stall";
    case ArcEnd::closed: return "closed";
    }
    return "?";
}

double SupportArc::length() const
{
    double L = 0;
    for (size_t k = 0; k + 1 < samples.size(); ++k) L += std::abs(samples[k + 1].z - samples[k].z);
    return L;
}

std::optional<ArcSample> project_to_arc(const PolySpec& spec, cplx t, const SupportArc& arc, cplx z)
{
    if (arc.samples.empty()) return std::nullopt;
    const ArcSample* best = &arc.samples.front();
    for (const auto& s : arc.samples)
        if (std::abs(s.z - z) < std::abs(best->z - z)) best = &s;
    auto p = correct(spec, t, z, best->ui, best->uj, 0.1 * scale_of(spec, t));
    if (!p) return std::nullopt;
    return ArcSample{p->z, p->ui, p->uj, rho_of(t, *p)};
}

StieltjesValue stieltjes(const PolySpec& spec, cplx z, cplx t, const RelevanceConfig& cfg)
{
    StieltjesValue v;
    v.cert = select_max_relevant(spec, z, t, cfg);
    v.m = (z - v.cert.u) / t;
    cplx s = 0.0;
    for (int j = 0; j < spec.d(); ++j) s += double(spec.alphas()[j]) / (z - t * v.m - spec.lambdas()[j]);
    v.residual = std::abs(v.m - s / double(spec.alpha()));
    return v;
}

double log_potential(const PolySpec& spec, cplx z, cplx t, const RelevanceConfig& cfg)
{
    auto c = select_max_relevant(spec, z, t, cfg);
    return height_G(spec, z, t, c.u);
}

std::vector<Disk> default_region(const PolySpec& spec, cplx t)
{
    const double st = std::sqrt(std::abs(t));
    const double a = spec.alpha();
    std::vector<Disk> disks;
    for (int j = 0; j < spec.d(); ++j)
        disks.push_back({spec.lambdas()[j], 2.2 * st * std::sqrt(spec.alphas()[j] / a) + 0.2 * st});
    bool disjoint = true;
    for (size_t i = 0; i < disks.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (std::abs(disks[i].c - disks[j].c) <= disks[i].r + disks[j].r) disjoint = false;
    if (disjoint) return disks;
    cplx c = spec.center_of_mass();
    double spread = 0;
    for (auto l : spec.lambdas()) spread = std::max(spread, std::abs(l - c));
    return {{c, 3 * st + spread}};
}

int switching_at(const PolySpec& spec, cplx t, cplx z, cplx ui, cplx uj, double nu, const RelevanceConfig& cfg)
{
    cplx w = (uj - ui) / t;
    if (std::abs(w) == 0) return -1;
    cplx n = std::conj(w) / std::abs(w);
    int pick[2];
    for (int s = 0; s < 2; ++s) {
        try {
            auto c = select_max_relevant(spec, z + (s ? -nu : nu) * n, t, cfg);
            double di = std::abs(c.u - ui), dj = std::abs(c.u - uj);
            double half = 0.5 * std::abs(ui - uj);
            if (di < half) pick[s] = 0;
            else if (dj < half) pick[s] = 1;
            else pick[s] = 2;
        } catch (const NumericalError&) {
            return -1;
        }
    }
    return (pick[0] != pick[1] && pick[0] < 2 && pick[1] < 2) ? 1 : 0;
}

LimitMeasure trace_support(const PolySpec& spec, cplx t, const TraceConfig& cfg)
{
    LimitMeasure L;
    L.t = t;
    L.branch_points = branch_locus(spec, t).points;
    L.region = cfg.region.empty() ? default_region(spec, t) : cfg.region;
    const double scale = scale_of(spec, t);
    Tracer tracer{spec, t, L.branch_points, L.region, scale, cfg.step * std::sqrt(std::abs(t)), cfg.max_samples};

    auto bp_dist = [&](cplx z) {
        double d;
        tracer.nearest_bp(z, d);
        return d;
    };

    std::vector<std::vector<Point>> traced;
    auto anchor = anchor_certificate(spec, t, cfg.relevance);

    for (const auto& disk : L.region) {
        FieldRegion fr;
        fr.lo = disk.c - cplx(disk.r, disk.r);
        fr.hi = disk.c + cplx(disk.r, disk.r);
        fr.nx = fr.ny = cfg.resolution;
        fr.mask = [&](cplx z) { return std::abs(z - disk.c) <= disk.r; };
        FieldConfig fc;
        fc.relevance = cfg.relevance;
        fc.seed = cfg.seed;
        RelevanceField F = relevance_field(spec, t, fr, anchor, fc);
        const double cell = 2 * disk.r / cfg.resolution;
        auto defined = [&](int k) {
            return F.state[k] == CellState::propagated || F.state[k] == CellState::selected;
        };

        for (int j = 0; j < fr.ny; ++j)
            for (int i = 0; i < fr.nx; ++i)
                for (int e = 0; e < 2; ++e) {
                    int i2 = i + (e == 0), j2 = j + (e == 1);
                    if (i2 >= fr.nx || j2 >= fr.ny) continue;
                    int a = F.index(i, j), b = F.index(i2, j2);
                    if (!defined(a) || !defined(b)) continue;
                    const SaddleFan& fa = F.fans[a];
                    const SaddleFan& fb = F.fans[b];
                    auto perm = match_sheets(fa.saddles, fb.saddles);
                    if (!perm) continue;
                    int ib = (*perm)[F.chosen[a]], jb = F.chosen[b];
                    if (ib == jb) continue;
                    cplx za = fr.cell(i, j), zb = fr.cell(i2, j2);
                    bool seen = false;
                    for (const auto& pl : traced)
                        if (dist_to_polyline(0.5 * (za + zb), pl) < 1.5 * cell) seen = true;
                    if (seen) continue;

                    // bisect the edge for a zero of the height difference
                    auto at = [&](double s) -> std::optional<Point> {
                        cplx z = zb + s * (za - zb);
                        SaddleFan f = solve_saddles(spec, z, t);
                        auto c = carry(f.saddles, fb.saddles[ib], fb.saddles[jb]);
                        if (!c) return std::nullopt;
                        return Point{z, c->first, c->second};
                    };
                    auto p0 = at(0), p1 = at(1);
                    if (!p0 || !p1) continue;
                    double h0 = hdiff(spec, t, *p0), h1 = hdiff(spec, t, *p1);
                    if (!(h0 * h1 < 0)) continue;
                    double lo = 0, hi = 1;
                    Point mid = *p0;
                    bool ok = true;
                    for (int it = 0; it < 40; ++it) {
                        double s = 0.5 * (lo + hi);
                        auto p = at(s);
                        if (!p) {
                            ok = false;
                            break;
                        }
                        mid = *p;
                        if (hdiff(spec, t, *p) * h0 > 0) lo = s;
                        else hi = s;
                    }
                    if (!ok) continue;
                    auto seed = correct(spec, t, mid.z, mid.ui, mid.uj, cell);
                    if (!seed) continue;

                    Trace fwd = tracer.run(*seed, 1.0);
                    Trace bwd;
                    if (fwd.end != ArcEnd::closed) bwd = tracer.run(*seed, -1.0);
                    std::vector<Point> pl(bwd.pts.rbegin(), bwd.pts.rend());
                    pl.push_back(*seed);
                    pl.insert(pl.end(), fwd.pts.begin(), fwd.pts.end());
                    ArcEnd end0 = fwd.end == ArcEnd::closed ? ArcEnd::closed : bwd.end, end1 = fwd.end;
                    traced.push_back(pl);

                    // classify samples by the side test and cut at switching boundaries
                    const int n = static_cast<int>(pl.size());
                    std::vector<int> sw(n, -1);
                    for (int k = 0; k < n; ++k) {
                        double d = bp_dist(pl[k].z);
                        if (d < 1e-3 * scale) continue;
                        double nu = std::min(1e-4 * scale, 0.1 * d);
                        sw[k] = switching_at(spec, t, pl[k].z, pl[k].ui, pl[k].uj, nu, cfg.relevance);
                    }
                    bool any = false;
                    for (int k = 0; k < n; ++k) any |= sw[k] >= 0;
                    if (!any) {
                        L.warnings.push_back("arc with no decidable side test kept as switching");
                        std::fill(sw.begin(), sw.end(), 1);
                    }
                    for (int k = 0; k < n; ++k) {
                        if (sw[k] >= 0) continue;
                        for (int r = 1; r < n; ++r) {
                            if (k - r >= 0 && sw[k - r] >= 0 && sw[k - r] < 2) {
                                sw[k] = sw[k - r] + 2;  // filled, marked by +2
                                break;
                            }
                            if (k + r < n && sw[k + r] >= 0 && sw[k + r] < 2) {
                                sw[k] = sw[k + r] + 2;
                                break;
                            }
                        }
                    }
                    for (auto& v : sw) v %= 2;


                    int k = 0;
                    while (k < n) {
                        if (!sw[k]) {
                            ++k;
                            continue;
                        }
                        int s = k;
                        while (k < n && sw[k]) ++k;
                        int e = k - 1;
                        SupportArc arc;
                        arc.ends[0] = s == 0 ? end0 : ArcEnd::junction;
                        arc.ends[1] = e == n - 1 ? end1 : ArcEnd::junction;
                        std::vector<Point> seg(pl.begin() + s, pl.begin() + e + 1);
                        auto refine_end = [&](const Point& in, const Point& out) {
                            Point a = in, b = out;
                            for (int it = 0; it < 14; ++it) {
                                auto m = correct(spec, t, 0.5 * (a.z + b.z), a.ui, a.uj, std::abs(b.z - a.z));
                                if (!m) break;
                                double d = bp_dist(m->z);
                                int v = switching_at(spec, t, m->z, m->ui, m->uj, std::min(1e-4 * scale, 0.1 * d),
                                                     cfg.relevance);
                                if (v < 0) break;
                                if (v) a = *m;
                                else b = *m;
                            }
                            return a;
                        };
                        if (s > 0) seg.insert(seg.begin(), refine_end(pl[s], pl[s - 1]));
                        if (e < n - 1) seg.push_back(refine_end(pl[e], pl[e + 1]));
                        for (const auto& p : seg) arc.samples.push_back({p.z, p.ui, p.uj, rho_of(t, p)});
                        if (arc.samples.size() < 2) continue;
                        const ArcSample& mid = arc.samples[arc.samples.size() / 2];
                        SaddleFan f0 = solve_saddles(spec, mid.z, t);
                        auto ia = continue_root(f0.saddles, mid.ui);
                        auto ja = continue_root(f0.saddles, mid.uj);
                        arc.pair = {ia.value_or(-1), ja.value_or(-1)};
                        finish_arc(spec, t, arc);
                        for (int q = 0; q < 2; ++q)
                            if (arc.ends[q] == ArcEnd::region_exit)
                                L.warnings.push_back("open arc leaves the region");
                            else if (arc.ends[q] == ArcEnd::stall)
                                L.warnings.push_back("arc tracing stalled");
                        L.arcs.push_back(std::move(arc));
                    }
                }
    }
    for (const auto& a : L.arcs) {
        L.total_mass += a.mass;
        L.total_trapezoid += a.mass_trapezoid;
        L.total_primitive += a.mass_primitive;
    }
    return L;
}

std::pair<cplx, cplx> joukowski_pm(cplx z, cplx t)
{
    cplx r = 4.0 * t - z * z;
    if (std::abs(r.imag()) <= 1e-14 * (1 + std::abs(r)) && r.real() < 0)
        throw BranchCutError("z lies on the excluded rays");
    cplx s = cplx(0, 1) * std::sqrt(r);
    return {(z + s) / 2.0, (z - s) / 2.0};
}

namespace semicircle {

double density(double x, double t)
{
    double r = 4 * t - x * x;
    return r <= 0 ? 0.0 : std::sqrt(r) / (2 * M_PI * t);
}

double cdf(double x)
{
    if (x <= -2) return 0;
    if (x >= 2) return 1;
    return 0.5 + x * std::sqrt(4 - x * x) / (4 * M_PI) + std::asin(x / 2) / M_PI;
}

double psi(cplx z)
{
    cplx s = std::sqrt(z * z - 4.0);
    cplx u1 = (z + s) / 2.0, u2 = (z - s) / 2.0;
    double a1 = std::abs(u1), a2 = std::abs(u2);
    cplx u;
    if (std::abs(a1 - a2) < 1e-14 * (a1 + a2)) u = u1.imag() >= u2.imag() ? u1 : u2;
    else u = a1 > a2 ? u1 : u2;
    cplx w = z - u;
    return std::log(std::abs(u)) + (w * w).real() / 2;
}

double H(cplx z)
{
    auto [up, um] = joukowski_pm(z, 1.0);
    (void)um;
    cplx s = 2.0 * up - z;
    return 2 * std::log(std::abs(up)) - (z * s).real() / 2;
}

}  // namespace semicircle

double ks_semicircle(std::vector<double> x)
{
    std::sort(x.begin(), x.end());
    const double n = x.size();
    double d = 0;
    for (size_t k = 0; k < x.size(); ++k) {
        double F = semicircle::cdf(x[k]);
        d = std::max({d, std::abs(F - k / n), std::abs(F - (k + 1) / n)});
    }
    return d;
}

namespace {

double point_segment_distance(cplx z, cplx a, cplx b)
{
    cplx ab = b - a;
    double s = std::clamp(((z - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
    return std::abs(z - (a + s * ab));
}

}  // namespace

AsymptoticReport asymptotic_checks(const PolySpec& spec, cplx t, AsymptoticMode mode, const AsymptoticConfig& cfg)
{
    AsymptoticReport R;
    R.mode = mode;
    R.t = t;
    R.disk_radius = cfg.disk_radius;
    const double a = spec.alpha();
    const double st = std::sqrt(std::abs(t));

    if (mode == AsymptoticMode::small) {
        auto disks = default_region(spec, t);
        if (static_cast<int>(disks.size()) != spec.d() && spec.d() > 1)
            throw RegimeError("clusters have merged; t is too large for the small-t check");
        TraceConfig tc = cfg.trace;
        if (tc.region.empty()) tc.region = disks;
        R.measure = trace_support(spec, t, tc);
        for (int j = 0; j < spec.d(); ++j) {
            ClusterReport c;
            c.centre = j;
            const double w = spec.alphas()[j] / a;
            const double s = std::sqrt(std::abs(t) * w);
            const cplx rot = std::polar(1.0, -0.5 * std::arg(t));
            std::vector<cplx> pts;
            for (const auto& arc : R.measure.arcs) {
                if (std::abs(arc.samples[arc.samples.size() / 2].z - spec.lambdas()[j]) > disks[j].r) continue;
                c.mass += arc.mass;
                for (const auto& smp : arc.samples) {
                    cplx zt = rot * (smp.z - spec.lambdas()[j]) / s;
                    pts.push_back(zt);
                    c.hausdorff = std::max(c.hausdorff, point_segment_distance(zt, -2.0, 2.0));
                    c.density_error =
                        std::max(c.density_error, std::abs(smp.rho * s - w * semicircle::density(zt.real(), 1.0)));
                }
            }
            if (pts.empty()) throw RegimeError("no support arc found near a centre");
            // other direction of the Hausdorff distance: points of [-2, 2] to the arc samples
            for (int k = 0; k <= 400; ++k) {
                cplx x = -2.0 + 4.0 * k / 400;
                double best = INFINITY;
                for (size_t q = 0; q + 1 < pts.size(); ++q) best = std::min(best, point_segment_distance(x, pts[q], pts[q + 1]));
                c.hausdorff = std::max(c.hausdorff, best);
            }
            R.clusters.push_back(c);
        }
        return R;
    }

    if (spec.d() > 1 && st < spec.delta())
        throw RegimeError("t is below the merge scale for the large-t check");
    R.measure = trace_support(spec, t, cfg.trace);
    const cplx c = spec.center_of_mass();
    const cplx rot = std::polar(1.0, -0.5 * std::arg(t));
    for (const auto& arc : R.measure.arcs)
        for (const auto& s : arc.samples)
            if (std::abs(s.z - c) <= cfg.disk_radius)
                R.max_im_deviation = std::max(R.max_im_deviation, std::abs((rot * (s.z - c)).imag()));
    if (cfg.with_zeros) {
        auto m = zeros_at(spec, t);
        std::vector<double> x;
        for (auto z : m.zeros) x.push_back((rot * (z - c)).real() / st);
        R.ks = ks_semicircle(x);
    }
    return R;
}

RayReport equiangular_ray_check(const PolySpec& spec, cplx t, const BranchPoint& bp, const RelevanceConfig& cfg)
{
    RayReport r;
    if (bp.order != 2) {
        r.note = "branch point is not simple; ray count not asserted";
        return r;
    }
    const double scale = scale_of(spec, t);
    double room = INFINITY;
    for (auto l : spec.lambdas()) room = std::min(room, std::abs(l - bp.z));
    for (const auto& b : branch_locus(spec, t).points)
        if (std::abs(b.z - bp.z) > 1e-9 * scale) room = std::min(room, std::abs(b.z - bp.z));
    r.radius = std::min(1e-3 * scale, 0.1 * room);

    const int M = 720;
    SaddleFan f0 = solve_saddles(spec, bp.z + r.radius, t);
    std::vector<int> idx(f0.size());
    for (int k = 0; k < f0.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](int x, int y) {
        return std::abs(f0.saddles[x] - bp.coalesced_u) < std::abs(f0.saddles[y] - bp.coalesced_u);
    });
    cplx ua = f0.saddles[idx[0]], ub = f0.saddles[idx[1]];
    const cplx ua0 = ua, ub0 = ub;
    std::vector<double> h(M + 1);
    std::vector<Point> pts(M + 1);
    for (int k = 0; k <= M; ++k) {
        cplx z = bp.z + std::polar(r.radius, 2 * M_PI * k / M);
        SaddleFan f = solve_saddles(spec, z, t);
        auto c = carry(f.saddles, ua, ub);
        if (!c) {
            r.note = "continuation around the circle is ambiguous";
            return r;
        }
        ua = c->first;
        ub = c->second;
        pts[k] = {z, ua, ub};
        h[k] = hdiff(spec, t, pts[k]);
    }
    bool swapped = std::abs(ua - ub0) < std::abs(ua - ua0);
    if (!swapped) {
        r.note = "the pair does not swap around this point; not a simple branch point";
        return r;
    }
    for (int k = 0; k < M; ++k) {
        if (h[k] == 0 || h[k] * h[k + 1] < 0) {
            double s = h[k] == 0 ? 0.0 : h[k] / (h[k] - h[k + 1]);
            r.angles.push_back(2 * M_PI * (k + s) / M);
        }
    }
    std::sort(r.angles.begin(), r.angles.end());
    const int n = static_cast<int>(r.angles.size());
    for (int k = 0; k < n; ++k) {
        double g = (k + 1 < n ? r.angles[k + 1] : r.angles[0] + 2 * M_PI) - r.angles[k];
        r.gaps.push_back(g);
    }
    r.valid = n == 3;
    if (!r.valid) r.note = "expected three nodal rays";

    for (double phi : r.angles) {
        int k = static_cast<int>(std::lround(phi / (2 * M_PI) * M)) % M;
        cplx z = bp.z + std::polar(3 * r.radius, phi);
        auto p = correct(spec, t, z, pts[k].ui, pts[k].uj, r.radius);
        if (!p) {
            r.carries_support.push_back(-1);
            continue;
        }
        r.carries_support.push_back(switching_at(spec, t, p->z, p->ui, p->uj, 0.3 * r.radius, cfg));
    }
    return r;
}

}  // namespace heatflow
