#pragma once

// Hot loops with an OpenMP version and a serial reference. The two must agree
// bit for bit; the benchmark target compares their speed.

#include <complex>
#include <vector>

namespace heatflow::kernels {

using cplx = std::complex<double>;

struct HeightParams {
    std::vector<cplx> lambdas;
    std::vector<double> weights;  // alpha_j / alpha
    cplx z;
    cplx t;
};

// G(z, x + iy) on the tensor grid, row-major with y as the slow index.
void height_field_serial(const HeightParams& p, const std::vector<double>& xs, const std::vector<double>& ys,
                         std::vector<double>& out);
void height_field(const HeightParams& p, const std::vector<double>& xs, const std::vector<double>& ys,
                  std::vector<double>& out);

// dz_j/dt = (1/N) sum_{k != j} 1/(z_j - z_k)
void zero_velocity_serial(const std::vector<cplx>& z, double N, std::vector<cplx>& out);
void zero_velocity(const std::vector<cplx>& z, double N, std::vector<cplx>& out);

}  // namespace heatflow::kernels
