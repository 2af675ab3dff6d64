#include "heatflow/io.hpp"

#include "heatflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace heatflow::io {

PolySpec spec_from_json(const json& j)
{
    try {
        std::vector<cplx> lambdas;
        for (const auto& l : j.at("lambdas")) {
            if (l.is_number()) lambdas.emplace_back(l.get<double>(), 0.0);
            else if (l.is_array() && l.size() == 2) lambdas.emplace_back(l[0].get<double>(), l[1].get<double>());
            else throw ConfigError("each lambda must be a number or [re, im]");
        }
        auto alphas = j.at("alphas").get<std::vector<int>>();
        int n = j.at("n").get<int>();
        return PolySpec(std::move(lambdas), std::move(alphas), n);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("spec: ") + e.what());
    }
}

PolySpec read_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return spec_from_json(j);
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const PolySpec& s)
{
    json l = json::array();
    for (auto z : s.lambdas()) l.push_back(to_json(z));
    return {{"lambdas", l}, {"alphas", s.alphas()}, {"n", s.n()}};
}

cplx parse_complex(const std::string& s)
{
    auto bad = [&] { return ConfigError("cannot parse complex value '" + s + "' (use a,b or m@deg)"); };
    auto num = [&](const std::string& x) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(x, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != x.size()) throw bad();
        return v;
    };
    if (auto at = s.find('@'); at != std::string::npos)
        return std::polar(num(s.substr(0, at)), num(s.substr(at + 1)) * M_PI / 180);
    if (auto c = s.find(','); c != std::string::npos) return {num(s.substr(0, c)), num(s.substr(c + 1))};
    return {num(s), 0.0};
}

namespace {

json points(const std::vector<cplx>& zs)
{
    json a = json::array();
    for (auto z : zs) a.push_back(to_json(z));
    return a;
}

}  // namespace

json to_json(const EmpiricalMeasure& m)
{
    json pts = json::array();
    for (int k = 0; k < m.size(); ++k)
        pts.push_back({{"z", to_json(m.zeros[k])}, {"log_residual", m.log_residuals[k]}, {"backward_error", m.backward_errors[k]}});
    json cl = json::array();
    for (const auto& c : m.clusters)
        cl.push_back({{"members", c.members}, {"center", to_json(c.center)}, {"radius", c.radius}});
    return {{"degree", m.size()},   {"weight", m.weight()},         {"precision", m.precision},
            {"iterations", m.iterations}, {"accept_threshold", m.accept_threshold}, {"points", pts},
            {"clusters", cl}};
}

json to_json(const SupportBoundReport& r)
{
    return {{"radius", r.radius},
            {"outside", r.outside},
            {"max_excess", r.max_excess},
            {"disks_disjoint", r.disks_disjoint},
            {"disk_counts", r.disk_counts},
            {"expected_counts", r.expected_counts},
            {"pass", r.pass}};
}

json to_json(const SaddleFan& f)
{
    return {{"z", to_json(f.z)},
            {"t", to_json(f.t)},
            {"saddles", points(f.saddles)},
            {"heights", f.heights},
            {"log_residuals", f.log_residuals},
            {"min_gap", f.min_gap},
            {"degenerate", f.degenerate}};
}

json to_json(const BranchLocus& b)
{
    json a = json::array();
    for (const auto& p : b.points) a.push_back({{"z", to_json(p.z)}, {"order", p.order}, {"u", to_json(p.coalesced_u)}});
    return a;
}

json to_json(const RelevanceCertificate& c)
{
    return {{"z", to_json(c.z)},
            {"t", to_json(c.t)},
            {"saddles", points(c.fan.saddles)},
            {"heights", c.fan.heights},
            {"chosen", c.chosen},
            {"u", to_json(c.u)},
            {"height", c.height},
            {"h_low", c.h_low},
            {"h_high", c.h_high},
            {"eps", c.eps},
            {"resolutions", c.resolutions},
            {"irrelevant", c.irrelevant}};
}

json to_json(const LimitMeasure& L)
{
    json arcs = json::array();
    for (const auto& a : L.arcs) {
        json s = json::array();
        for (const auto& p : a.samples) s.push_back({p.z.real(), p.z.imag(), p.rho});
        json ends = json::array();
        for (int e = 0; e < 2; ++e) {
            cplx z = a.samples.empty() ? cplx() : (e == 0 ? a.samples.front().z : a.samples.back().z);
            ends.push_back({{"z", to_json(z)}, {"kind", to_string(a.ends[e])}});
        }
        arcs.push_back({{"pair", {a.pair.first, a.pair.second}},
                        {"samples", s},
                        {"mass", a.mass},
                        {"mass_trapezoid", a.mass_trapezoid},
                        {"mass_primitive", a.mass_primitive},
                        {"length", a.length()},
                        {"endpoints", ends}});
    }
    json disks = json::array();
    for (const auto& d : L.region) disks.push_back({{"c", to_json(d.c)}, {"r", d.r}});
    return {{"t", to_json(L.t)},
            {"arcs", arcs},
            {"branch_points", to_json(BranchLocus{L.branch_points, {}, 0, false})},
            {"region", disks},
            {"total_mass", L.total_mass},
            {"total_trapezoid", L.total_trapezoid},
            {"total_primitive", L.total_primitive},
            {"warnings", L.warnings}};
}

json to_json(const AsymptoticReport& r)
{
    json cl = json::array();
    for (const auto& c : r.clusters)
        cl.push_back({{"centre", c.centre}, {"hausdorff", c.hausdorff}, {"density_error", c.density_error}, {"mass", c.mass}});
    json j = {{"mode", r.mode == AsymptoticMode::small ? "small" : "large"}, {"t", to_json(r.t)}};
    if (r.mode == AsymptoticMode::small) {
        j["clusters"] = cl;
    } else {
        j["disk_radius"] = r.disk_radius;
        j["max_im_deviation"] = r.max_im_deviation;
        if (r.ks >= 0) j["ks"] = r.ks;
    }
    j["total_mass"] = r.measure.total_mass;
    return j;
}

json to_json(const RayReport& r)
{
    return {{"valid", r.valid},   {"note", r.note}, {"radius", r.radius},
            {"angles", r.angles}, {"gaps", r.gaps}, {"carries_support", r.carries_support}};
}

json to_json(const ResidualReport& r)
{
    json j = {{"name", r.name},
              {"pass", r.pass},
              {"max_residual", r.max_residual},
              {"threshold", r.threshold},
              {"samples", points(r.samples)},
              {"residuals", r.residuals}};
    if (!r.ratios.empty()) {
        j["ratios"] = r.ratios;
        if (r.ratio_hi > 0) j["ratio_band"] = {r.ratio_lo, r.ratio_hi};
    }
    j["skipped"] = r.skipped;
    j["notes"] = r.notes;
    return j;
}

json to_json(const TrajectoryBundle& b)
{
    json frames = json::array();
    for (size_t k = 0; k < b.times.size(); ++k)
        frames.push_back({{"t", b.times[k]}, {"min_gap", b.min_gaps[k]}, {"z", points(b.positions[k])}});
    return {{"guard", b.guard}, {"accepted", b.accepted}, {"rejected", b.rejected}, {"frames", frames}};
}

void write_coefficients_csv(std::ostream& os, const ScaledCoeffPoly& p)
{
    os << "k,log_modulus,phase_re,phase_im\n" << std::setprecision(17);
    for (int k = 0; k <= p.degree(); ++k) {
        cplx ph = p.phase(k).to_cd();
        os << k << ',' << p.log_modulus(k).to_double() << ',' << ph.real() << ',' << ph.imag() << '\n';
    }
}

void write_zeros_csv(std::ostream& os, const EmpiricalMeasure& m)
{
    os << "re,im,log_residual\n" << std::setprecision(17);
    for (int k = 0; k < m.size(); ++k)
        os << m.zeros[k].real() << ',' << m.zeros[k].imag() << ',' << m.log_residuals[k] << '\n';
}

void write_density_csv(std::ostream& os, const LimitMeasure& L)
{
    os << "arc,k,re,im,rho\n" << std::setprecision(17);
    for (size_t a = 0; a < L.arcs.size(); ++a)
        for (size_t k = 0; k < L.arcs[a].samples.size(); ++k) {
            const auto& s = L.arcs[a].samples[k];
            os << a << ',' << k << ',' << s.z.real() << ',' << s.z.imag() << ',' << s.rho << '\n';
        }
}

void Svg::polyline(const std::vector<cplx>& pts, const std::string& colour, double width)
{
    items_.push_back({Item::line, pts, colour, width});
}

void Svg::dots(const std::vector<cplx>& pts, const std::string& colour, double radius)
{
    items_.push_back({Item::dot, pts, colour, radius});
}

void Svg::circle(cplx c, double r, const std::string& colour) { items_.push_back({Item::ring, {c}, colour, r}); }

void Svg::write(std::ostream& os, int pixels) const
{
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& it : items_) {
        double pad = it.kind == Item::ring ? it.size : 0;
        for (auto z : it.pts) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
            x0 = std::min(x0, z.real() - pad);
            x1 = std::max(x1, z.real() + pad);
            y0 = std::min(y0, z.imag() - pad);
            y1 = std::max(y1, z.imag() + pad);
        }
    }
    if (!(x0 <= x1)) x0 = -1, x1 = 1, y0 = -1, y1 = 1;
    double w = std::max(x1 - x0, 1e-9), h = std::max(y1 - y0, 1e-9);
    x0 -= 0.1 * w;
    y0 -= 0.1 * h;
    w *= 1.2;
    h *= 1.2;
    const double px = std::max(w, h) / pixels;  // data units per pixel

    std::ostringstream s;
    s << std::setprecision(9);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\""
      << static_cast<int>(std::lround(pixels * h / std::max(w, h))) << "\" viewBox=\"" << x0 << ' ' << -(y0 + h) << ' '
      << w << ' ' << h << "\">\n";
    s << "<rect x=\"" << x0 << "\" y=\"" << -(y0 + h) << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
    for (const auto& it : items_) {
        switch (it.kind) {
        case Item::line:
            s << "<polyline fill=\"none\" stroke=\"" << it.colour << "\" stroke-width=\"" << it.size * px
              << "\" points=\"";
            for (size_t k = 0; k < it.pts.size(); ++k) s << (k ? " " : "") << it.pts[k].real() << ',' << -it.pts[k].imag();
            s << "\"/>\n";
            break;
        case Item::dot:
            for (auto z : it.pts)
                s << "<circle cx=\"" << z.real() << "\" cy=\"" << -z.imag() << "\" r=\"" << it.size * px << "\" fill=\""
                  << it.colour << "\"/>\n";
            break;
        case Item::ring:
            s << "<circle cx=\"" << it.pts[0].real() << "\" cy=\"" << -it.pts[0].imag() << "\" r=\"" << it.size
              << "\" fill=\"none\" stroke=\"" << it.colour << "\" stroke-width=\"" << px << "\" stroke-dasharray=\""
              << 4 * px << ' ' << 4 * px << "\"/>\n";
            break;
        }
    }
    s << "</svg>\n";
    os << s.str();
}

Svg support_figure(const LimitMeasure& L, const std::vector<cplx>& zeros)
{
    Svg svg;
    for (const auto& d : L.region) svg.circle(d.c, d.r, "#999999");
    for (const auto& a : L.arcs) {
        std::vector<cplx> pts;
        for (const auto& s : a.samples) pts.push_back(s.z);
        svg.polyline(pts, "#1f4fd0", 2);
    }
    if (!zeros.empty()) svg.dots(zeros, "black", 1.5);
    std::vector<cplx> bp;
    for (const auto& b : L.branch_points) bp.push_back(b.z);
    svg.dots(bp, "#d01f1f", 4);
    return svg;
}

Svg trajectory_figure(const TrajectoryBundle& b)
{
    Svg svg;
    if (b.positions.empty()) return svg;
    for (size_t j = 0; j < b.positions[0].size(); ++j) {
        std::vector<cplx> path;
        for (const auto& frame : b.positions) path.push_back(frame[j]);
        svg.polyline(path, "#1f4fd0", 1);
    }
    svg.dots(b.positions.front(), "#999999", 1.5);
    svg.dots(b.positions.back(), "black", 2);
    return svg;
}

}  // namespace heatflow::io
