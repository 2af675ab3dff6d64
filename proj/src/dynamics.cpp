#include "heatflow/dynamics.hpp"

#include "heatflow/errors.hpp"
#include "heatflow/kernels.hpp"
#include "heatflow/roots.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace heatflow {

double min_gap(const std::vector<cplx>& z, int* i, int* j)
{
    double g = INFINITY;
    for (size_t a = 0; a < z.size(); ++a)
        for (size_t b = 0; b < a; ++b) {
            double d = std::abs(z[a] - z[b]);
            if (d < g) {
                g = d;
                if (i) *i = static_cast<int>(b);
                if (j) *j = static_cast<int>(a);
            }
        }
    return g;
}

std::vector<cplx> ode_rhs(const std::vector<cplx>& z, double N, double guard, bool parallel)
{
    if (guard > 0) {
        int i = -1, j = -1;
        if (min_gap(z, &i, &j) < guard) throw CollisionError("zeros collided", i, j, NAN);
    }
    std::vector<cplx> v;
    if (parallel) kernels::zero_velocity(z, N, v);
    else kernels::zero_velocity_serial(z, N, v);
    return v;
}

namespace {

// Dormand-Prince 5(4); autonomous, so the nodes c_i are not needed
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

TrajectoryBundle integrate_from(std::vector<cplx> z, double N, double t0, double t_end, const TrajectoryConfig& cfg)
{
    TrajectoryBundle B;
    const size_t n = z.size();
    B.guard = cfg.guard_factor * min_gap(z);
    B.times.push_back(t0);
    B.positions.push_back(z);
    B.min_gaps.push_back(min_gap(z));
    if (n < 2 || t_end <= t0) return B;

    auto f = [&](const std::vector<cplx>& y) { return ode_rhs(y, N, 0, cfg.parallel); };
    auto axpy = [&](const std::vector<cplx>& y, std::initializer_list<std::pair<double, const std::vector<cplx>*>> terms,
                    double h) {
        std::vector<cplx> r = y;
        for (auto [c, k] : terms)
            for (size_t i = 0; i < n; ++i) r[i] += h * c * (*k)[i];
        return r;
    };

    double t = t0;
    const double g0 = B.min_gaps[0];
    double h = std::clamp(0.01 * N * g0 * g0, 1e-12 * (t_end - t0), t_end - t0);
    std::vector<cplx> k1 = f(z);
    double next_record = t0 + cfg.record_dt;
    for (int step = 0; step < cfg.max_steps && t < t_end; ++step) {
        if (t + h > t_end) h = t_end - t;
        auto k2 = f(axpy(z, {{a21, &k1}}, h));
        auto k3 = f(axpy(z, {{a31, &k1}, {a32, &k2}}, h));
        auto k4 = f(axpy(z, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
        auto k5 = f(axpy(z, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
        auto k6 = f(axpy(z, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
        auto y = axpy(z, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
        auto k7 = f(y);
        double err = 0;
        for (size_t i = 0; i < n; ++i) {
            cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = cfg.atol + cfg.rtol * std::max(std::abs(z[i]), std::abs(y[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        int ci = -1, cj = -1;
        double gap = min_gap(y, &ci, &cj);
        bool finite = std::isfinite(err);
        if (finite && err <= 1 && gap > B.guard) {
            t += h;
            z = std::move(y);
            k1 = std::move(k7);
            ++B.accepted;
            if (cfg.record_dt <= 0 || t >= next_record || t >= t_end) {
                B.times.push_back(t);
                B.positions.push_back(z);
                B.min_gaps.push_back(gap);
                next_record += cfg.record_dt;
            }
            double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            ++B.rejected;
            double fac = finite && err > 1 ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.25;
            h *= fac;
            if (h < 1e-15 * std::max(1.0, t)) {
                min_gap(z, &ci, &cj);
                throw CollisionError("zero trajectories collide", ci, cj, t);
            }
        }
    }
    if (t < t_end) throw NumericalError("trajectory integration exceeded the step budget");
    return B;
}

TrajectoryBundle integrate(const PolySpec& spec, double t_end, const TrajectoryConfig& cfg)
{
    double t0 = cfg.t0 > 0 ? cfg.t0 : 1e-3 * std::min(spec.delta() * spec.delta(), 1.0);
    auto m = zeros_at(spec, t0);
    return integrate_from(m.zeros, spec.total_degree(), t0, t_end, cfg);
}

std::vector<int> optimal_matching(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    // Kuhn-Munkres with potentials, 1-based
    const int n = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != n) throw ConfigError("matching needs equal sizes");
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, INFINITY);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = INFINITY;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = std::abs(a[i0 - 1] - b[j - 1]) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> perm(n);
    for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

double matched_max_distance(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    auto perm = optimal_matching(a, b);
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[perm[i]]));
    return m;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryBundle& b)
{
    os << "t,j,re,im\n";
    os.precision(17);
    for (size_t k = 0; k < b.times.size(); ++k)
        for (size_t j = 0; j < b.positions[k].size(); ++j)
            os << b.times[k] << ',' << j << ',' << b.positions[k][j].real() << ',' << b.positions[k][j].imag() << '\n';
}

}  // namespace heatflow
