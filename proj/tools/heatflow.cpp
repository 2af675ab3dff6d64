#include "heatflow/errors.hpp"
#include "heatflow/io.hpp"

#include <CLI11.hpp>

#ifdef HEATFLOW_HAVE_OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

using namespace heatflow;
namespace fs = std::filesystem;
using io::json;

namespace {

struct RunConfig {
    std::string spec_path;
    std::string t = "1,0";
    std::string z;
    std::string region;
    std::string out;
    std::string format = "json";
    int n = 0;
    int precision = 0;
    int resolution = 64;
    int workers = 0;
    unsigned seed = 1;

    // per-command
    std::string mode = "large";
    bool with_zeros = false;
    bool all = false;
    std::vector<std::string> suites;
    double record_dt = 0;
};

struct Emitter {
    const RunConfig& cfg;
    std::string stem;
    std::vector<std::string> formats;

    bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

    // With --out every requested format goes to <out>/<stem>.<ext>; without it
    // only the first requested format is printed.
    void emit(const std::string& fmt, const std::function<void(std::ostream&)>& body) const
    {
        if (!wants(fmt)) return;
        if (cfg.out.empty()) {
            if (fmt == formats.front()) body(std::cout);
            return;
        }
        fs::create_directories(cfg.out);
        auto path = fs::path(cfg.out) / (stem + "." + fmt);
        std::ofstream os(path);
        if (!os) throw ConfigError("cannot write " + path.string());
        body(os);
    }
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string p;
    while (std::getline(in, p, sep))
        if (!p.empty()) parts.push_back(p);
    return parts;
}

PolySpec load_spec(const RunConfig& c)
{
    if (c.spec_path.empty()) throw ConfigError("--spec is required");
    auto s = io::read_spec(c.spec_path);
    return c.n > 0 ? s.with_n(c.n) : s;
}

std::vector<Disk> parse_region(const std::string& s)
{
    std::vector<Disk> disks;
    for (const auto& part : split(s, ';')) {
        auto v = split(part, ',');
        if (v.size() != 3) throw ConfigError("--region wants cx,cy,r");
        try {
            Disk d{{std::stod(v[0]), std::stod(v[1])}, std::stod(v[2])};
            if (!(d.r > 0)) throw ConfigError("--region radius must be positive");
            disks.push_back(d);
        } catch (const std::invalid_argument&) {
            throw ConfigError("--region wants numbers");
        }
    }
    return disks;
}

void print_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

TraceConfig trace_config(const RunConfig& c)
{
    TraceConfig tc;
    if (!c.region.empty()) tc.region = parse_region(c.region);
    tc.resolution = c.resolution;
    tc.seed = c.seed;
    return tc;
}

// Grid of potential or Stieltjes values; the selected sheet is propagated by the relevance field.
void grid_values(const PolySpec& spec, cplx t, const RunConfig& c, const Emitter& em, bool stieltjes_values)
{
    auto disks = c.region.empty() ? default_region(spec, t) : parse_region(c.region);
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& d : disks) {
        x0 = std::min(x0, d.c.real() - d.r);
        x1 = std::max(x1, d.c.real() + d.r);
        y0 = std::min(y0, d.c.imag() - d.r);
        y1 = std::max(y1, d.c.imag() + d.r);
    }
    FieldRegion region{{x0, y0}, {x1, y1}, c.resolution, c.resolution, {}};
    FieldConfig fc;
    fc.seed = c.seed;
    auto field = relevance_field(spec, t, region, anchor_certificate(spec, t), fc);
    em.emit("csv", [&](std::ostream& os) {
        os << (stieltjes_values ? "re,im,m_re,m_im\n" : "re,im,U\n") << std::setprecision(17);
        for (int j = 0; j < region.ny; ++j)
            for (int i = 0; i < region.nx; ++i) {
                cplx z = region.cell(i, j);
                int k = field.index(i, j);
                os << z.real() << ',' << z.imag() << ',';
                if (field.state[k] == CellState::undefined || field.state[k] == CellState::skipped) {
                    os << (stieltjes_values ? "nan,nan" : "nan") << '\n';
                } else if (stieltjes_values) {
                    cplx m = (z - field.u[k]) / t;
                    os << m.real() << ',' << m.imag() << '\n';
                } else {
                    os << height_G(spec, z, t, field.u[k]) << '\n';
                }
            }
    });
    em.emit("json", [&](std::ostream& os) {
        print_json(os, {{"lo", io::to_json(region.lo)},
                        {"hi", io::to_json(region.hi)},
                        {"nx", region.nx},
                        {"ny", region.ny},
                        {"selections", field.selections},
                        {"inconsistencies", field.inconsistencies},
                        {"note", "values in the csv output"}});
    });
}

int run_verify(const PolySpec& spec, cplx t, const RunConfig& c, const Emitter& em)
{
    std::set<std::string> want(c.suites.begin(), c.suites.end());
    const std::set<std::string> known{"hermite", "pde", "rotation", "convergence"};
    for (const auto& s : want)
        if (!known.count(s)) throw ConfigError("unknown suite " + s);
    if (c.all || want.empty()) want = known;

    const double tr = std::abs(t) > 0 ? std::abs(t) : 1.0;
    json reports = json::array();
    bool ok = true;
    auto add = [&](const ResidualReport& r) {
        ok = ok && r.pass;
        reports.push_back(io::to_json(r));
    };

    // the one-centre oracle runs first and gates the rest
    {
        PolySpec one = spec.d() == 1 ? spec : PolySpec({0.0}, {1}, 1);
        OracleConfig oc;
        oc.trace = trace_config(c);
        oc.trace.region.clear();
        add(hermite_oracle(one, tr, oc));
    }
    if (ok) {
        if (want.count("pde")) {
            std::vector<cplx> zs;
            const double R = spec.lambda_max() + 3 * std::sqrt(tr) + 1;
            for (int k = 0; k < 10; ++k)
                zs.push_back(spec.center_of_mass() + R * std::polar(1.0, 2 * M_PI * (k + 0.5) / 10 + 0.3));
            for (auto kind : {PdeKind::hamilton_jacobi, PdeKind::burgers, PdeKind::burgers_conjugate})
                add(pde_residuals(spec, {tr}, zs, kind));
        }
        if (want.count("rotation")) {
            int n = std::max(1, std::min(spec.n(), 40 / spec.alpha()));
            for (cplx tt : {cplx(0, 1), cplx(-1, 0), std::polar(2.0, M_PI / 3)})
                add(rotation_identity(spec.with_n(n), tt, {cplx(0.5, 0.25), cplx(-1, 1.5), cplx(2, -0.5)}));
        }
        if (want.count("convergence")) {
            ConvergenceConfig cc;
            cc.trace = trace_config(c);
            if (spec.d() == 1) {
                cc.final_threshold = 0.05;
                add(convergence_report(spec, tr, {25, 50, 100, 200}, ConvergenceMetric::ks_semicircle, cc));
            } else {
                add(convergence_report(spec, tr, {10, 20, 40}, ConvergenceMetric::arc_distance, cc));
            }
        }
    }
    em.emit("json", [&](std::ostream& os) { print_json(os, reports); });
    return ok ? 0 : 1;
}

int dispatch(const std::string& cmd, const RunConfig& c)
{
    if (c.precision != 0 && c.precision < 64) throw ConfigError("--precision must be at least 64");
    if (c.resolution < 64) throw ConfigError("--resolution must be at least 64");
    std::vector<std::string> formats = split(c.format, ',');
    for (const auto& f : formats)
        if (f != "json" && f != "csv" && f != "svg") throw ConfigError("unknown format " + f);
    if (formats.empty()) throw ConfigError("--format is empty");
#ifdef HEATFLOW_HAVE_OPENMP
    if (c.workers > 0) omp_set_num_threads(c.workers);
#endif
    Emitter em{c, cmd, formats};
    const PolySpec spec = load_spec(c);
    const cplx t = io::parse_complex(c.t);
    const int bits = c.precision;

    auto need_z = [&] {
        if (c.z.empty()) throw ConfigError(cmd + " needs --z");
        return io::parse_complex(c.z);
    };
    auto positive_t = [&] {
        if (t.imag() != 0 || !(t.real() > 0)) throw ConfigError(cmd + " needs a positive real --t");
        return t.real();
    };

    if (cmd == "evolve") {
        int b = bits > 0 ? bits : mp::default_precision(spec.total_degree());
        mp::PrecisionScope scope(b);
        auto p = heat_evolve(expand_power(spec, b), t, spec.total_degree());
        em.emit("csv", [&](std::ostream& os) { io::write_coefficients_csv(os, p); });
        em.emit("json", [&](std::ostream& os) {
            json rows = json::array();
            for (int k = 0; k <= p.degree(); ++k) {
                cplx ph = p.phase(k).to_cd();
                rows.push_back({k, p.log_modulus(k).to_double(), ph.real(), ph.imag()});
            }
            print_json(os, {{"spec", io::to_json(spec)}, {"t", io::to_json(t)}, {"precision", b}, {"coefficients", rows}});
        });
    } else if (cmd == "zeros") {
        auto m = zeros_at(spec, t, bits);
        em.emit("csv", [&](std::ostream& os) { io::write_zeros_csv(os, m); });
        em.emit("json", [&](std::ostream& os) {
            auto j = io::to_json(m);
            j["support_bound"] = io::to_json(support_bound_check(m, spec, t));
            print_json(os, j);
        });
        em.emit("svg", [&](std::ostream& os) {
            io::Svg svg;
            svg.dots(m.zeros, "black", 2);
            svg.dots(spec.lambdas(), "#d01f1f", 3);
            svg.write(os);
        });
    } else if (cmd == "saddles") {
        cplx z = need_z();
        auto fan = solve_saddles(spec, z, t);
        auto cert = select_max_relevant(spec, z, t);
        em.emit("json", [&](std::ostream& os) {
            print_json(os, {{"fan", io::to_json(fan)}, {"certificate", io::to_json(cert)}});
        });
        em.emit("csv", [&](std::ostream& os) {
            os << "j,re,im,height,chosen\n" << std::setprecision(17);
            for (int j = 0; j < cert.fan.size(); ++j)
                os << j << ',' << cert.fan.saddles[j].real() << ',' << cert.fan.saddles[j].imag() << ','
                   << cert.fan.heights[j] << ',' << (j == cert.chosen) << '\n';
        });
    } else if (cmd == "branch-points") {
        auto B = branch_locus(spec, t);
        em.emit("json", [&](std::ostream& os) { print_json(os, io::to_json(B)); });
        em.emit("csv", [&](std::ostream& os) {
            os << "re,im,order\n" << std::setprecision(17);
            for (const auto& p : B.points) os << p.z.real() << ',' << p.z.imag() << ',' << p.order << '\n';
        });
        if (B.unstable) std::cerr << "warning: resultant interpolation unstable (" << B.consistency_error << ")\n";
    } else if (cmd == "support" || cmd == "density") {
        auto L = trace_support(spec, t, trace_config(c));
        std::vector<cplx> zeros;
        if (c.with_zeros) zeros = zeros_at(spec, t, bits).zeros;
        em.emit("json", [&](std::ostream& os) {
            auto j = io::to_json(L);
            if (!zeros.empty()) {
                json zj = json::array();
                for (auto z : zeros) zj.push_back(io::to_json(z));
                j["zeros"] = zj;
            }
            print_json(os, j);
        });
        em.emit("csv", [&](std::ostream& os) { io::write_density_csv(os, L); });
        em.emit("svg", [&](std::ostream& os) { io::support_figure(L, zeros).write(os); });
        for (const auto& w : L.warnings) std::cerr << "warning: " << w << '\n';
    } else if (cmd == "potential" || cmd == "stieltjes") {
        const bool st = cmd == "stieltjes";
        if (c.z.empty()) {
            grid_values(spec, t, c, em, st);
        } else {
            cplx z = io::parse_complex(c.z);
            json j;
            if (st) {
                auto v = stieltjes(spec, z, t);
                j = {{"z", io::to_json(z)}, {"m", io::to_json(v.m)}, {"residual", v.residual}, {"certificate", io::to_json(v.cert)}};
            } else {
                auto cert = select_max_relevant(spec, z, t);
                j = {{"z", io::to_json(z)}, {"U", cert.height}, {"certificate", io::to_json(cert)}};
            }
            em.emit("json", [&](std::ostream& os) { print_json(os, j); });
        }
    } else if (cmd == "trajectories") {
        TrajectoryConfig tc;
        tc.record_dt = c.record_dt;
        auto B = integrate(spec, positive_t(), tc);
        em.emit("csv", [&](std::ostream& os) { write_trajectory_csv(os, B); });
        em.emit("json", [&](std::ostream& os) { print_json(os, io::to_json(B)); });
        em.emit("svg", [&](std::ostream& os) { io::trajectory_figure(B).write(os); });
    } else if (cmd == "asymptotics") {
        if (c.mode != "small" && c.mode != "large") throw ConfigError("--mode is small or large");
        AsymptoticConfig ac;
        ac.trace = trace_config(c);
        ac.with_zeros = c.with_zeros;
        auto r = asymptotic_checks(spec, t, c.mode == "small" ? AsymptoticMode::small : AsymptoticMode::large, ac);
        em.emit("json", [&](std::ostream& os) { print_json(os, io::to_json(r)); });
        em.emit("svg", [&](std::ostream& os) { io::support_figure(r.measure).write(os); });
    } else if (cmd == "verify") {
        return run_verify(spec, t, c, em);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zeros of heat-evolved polynomial powers and their limiting distribution"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* s) {
        s->add_option("--spec", cfg.spec_path, "polynomial JSON file")->required();
        s->add_option("--t", cfg.t, "heat time, a,b or m@deg");
        s->add_option("--n-override,--n", cfg.n, "replace the power n");
        s->add_option("--precision", cfg.precision, "working precision in bits (>= 64)");
        s->add_option("--resolution", cfg.resolution, "grid resolution (>= 64)");
        s->add_option("--region", cfg.region, "disk cx,cy,r; several separated by ';'");
        s->add_option("--out", cfg.out, "output directory; stdout when absent");
        s->add_option("--format", cfg.format, "comma list of json,csv,svg");
        s->add_option("--workers", cfg.workers, "OpenMP threads");
        s->add_option("--seed", cfg.seed, "seed for spot checks");
        return s;
    };

    const std::vector<std::pair<std::string, std::string>> commands{
        {"evolve", "coefficients of the heat-evolved power"},
        {"zeros", "all zeros with residual certificates"},
        {"saddles", "saddle points and the maximally relevant one at --z"},
        {"branch-points", "branch locus"},
        {"support", "support curves of the limit measure"},
        {"density", "density along the support curves"},
        {"potential", "logarithmic potential at --z or on a grid"},
        {"stieltjes", "Stieltjes transform at --z or on a grid"},
        {"trajectories", "zero trajectories of the particle ODE up to --t"},
        {"asymptotics", "small or large time checks"},
        {"verify", "oracle and residual suites"},
    };
    for (const auto& [name, help] : commands) {
        auto* s = common(app.add_subcommand(name, help));
        if (name == "saddles" || name == "potential" || name == "stieltjes") s->add_option("--z", cfg.z, "point a,b or m@deg");
        if (name == "support" || name == "density" || name == "asymptotics")
            s->add_flag("--with-zeros", cfg.with_zeros, "also compute the finite-n zeros");
        if (name == "asymptotics") s->add_option("--mode", cfg.mode, "small or large");
        if (name == "trajectories") s->add_option("--record-dt", cfg.record_dt, "sampling interval of the output");
        if (name == "verify") {
            s->add_flag("--all", cfg.all, "run every suite");
            s->add_option("--suite", cfg.suites, "hermite, pde, rotation, convergence");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cmd, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    }
}
