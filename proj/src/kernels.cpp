#include "heatflow/kernels.hpp"

#include <cmath>

namespace heatflow::kernels {

namespace {

inline double height_at(const HeightParams& p, cplx inv2t, double x, double y)
{
    double s = 0;
    for (size_t j = 0; j < p.lambdas.size(); ++j) {
        double dx = x - p.lambdas[j].real(), dy = y - p.lambdas[j].imag();
        s += p.weights[j] * 0.5 * std::log(dx * dx + dy * dy);
    }
    cplx w(p.z.real() - x, p.z.imag() - y);
    return s + (w * w * inv2t).real();
}

inline cplx velocity_at(const std::vector<cplx>& z, double N, size_t j)
{
    cplx v = 0.0;
    for (size_t k = 0; k < z.size(); ++k)
        if (k != j) v += 1.0 / (z[j] - z[k]);
    return v / N;
}

}  // namespace

void height_field_serial(const HeightParams& p, const std::vector<double>& xs, const std::vector<double>& ys,
                         std::vector<double>& out)
{
    const size_t nx = xs.size(), ny = ys.size();
    out.resize(nx * ny);
    const cplx inv2t = 1.0 / (2.0 * p.t);
    for (size_t j = 0; j < ny; ++j)
        for (size_t i = 0; i < nx; ++i) out[j * nx + i] = height_at(p, inv2t, xs[i], ys[j]);
}

void height_field(const HeightParams& p, const std::vector<double>& xs, const std::vector<double>& ys,
                  std::vector<double>& out)
{
    const long nx = static_cast<long>(xs.size()), ny = static_cast<long>(ys.size());
    out.resize(nx * ny);
    const cplx inv2t = 1.0 / (2.0 * p.t);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < ny; ++j)
        for (long i = 0; i < nx; ++i) out[j * nx + i] = height_at(p, inv2t, xs[i], ys[j]);
}

void zero_velocity_serial(const std::vector<cplx>& z, double N, std::vector<cplx>& out)
{
    out.resize(z.size());
    for (size_t j = 0; j < z.size(); ++j) out[j] = velocity_at(z, N, j);
}

void zero_velocity(const std::vector<cplx>& z, double N, std::vector<cplx>& out)
{
    const long n = static_cast<long>(z.size());
    out.resize(n);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < n; ++j) out[j] = velocity_at(z, N, j);
}

}  // namespace heatflow::kernels
