#pragma once

// Aberth-Ehrlich iteration shared by the double-precision saddle solver and the
// multiprecision zero finder. Coefficients are ascending.

#include "heatflow/mp.hpp"

#include <cmath>
#include <complex>
#include <vector>

#ifdef HEATFLOW_HAVE_OPENMP
#include <omp.h>
#endif

namespace heatflow::detail {

template <class C>
struct Arith;

template <>
struct Arith<std::complex<double>> {
    using C = std::complex<double>;
    using R = double;
    static R abs(const C& z) { return std::abs(z); }
    static double to_double(const R& r) { return r; }
    static C guard(const C& z) { return z; }
    static C from(std::complex<double> z, int) { return z; }
    static std::complex<double> to_cd(const C& z) { return z; }
    static R zero_real(int) { return 0.0; }
    static double roundoff(int) { return 0x1p-53; }
    static int bits_of(const C&) { return 53; }
    static void round(C&, int) {}
};

template <>
struct Arith<mp::Complex> {
    using C = mp::Complex;
    using R = mp::Real;
    static R abs(const C& z) { return mp::abs(z); }
    static double to_double(const R& r) { return r.to_double(); }
    // evaluate with 32 guard bits so rounding in Horner stays below the acceptance threshold
    static C guard(const C& z)
    {
        C g = z;
        g.set_precision(z.precision() + 32);
        return g;
    }
    static C from(std::complex<double> z, int bits) { return {z, bits}; }
    static std::complex<double> to_cd(const C& z) { return z.to_cd(); }
    static R zero_real(int bits) { return R(0.0, bits); }
    static double roundoff(int bits) { return std::ldexp(1.0, -bits); }
    static int bits_of(const C& z) { return z.precision(); }
    static void round(C& z, int bits) { z.set_precision(bits); }
};

// One Jacobi sweep: every active root gets its correction from the previous
// positions. Returns the number of roots still active afterwards.
template <class C>
int aberth_sweep(const std::vector<C>& a, std::vector<C>& z, std::vector<char>& done, std::vector<double>& berr,
                 int bits, double accept, bool parallel)
{
    using A = Arith<C>;
    const int N = static_cast<int>(z.size());
    std::vector<C> w(N);
    std::vector<char> ok(N, 1);

    auto body = [&](int k) {
        if (done[k]) return;
        mp::PrecisionScope scope(bits);
        C x = A::guard(z[k]);
        C p = a[N];
        C dp = C(0.0);
        typename A::R ax = A::abs(x);
        typename A::R s = A::abs(a[N]);
        for (int i = N - 1; i >= 0; --i) {
            dp *= x;
            dp += p;
            p *= x;
            p += a[i];
            s *= ax;
            s += A::abs(a[i]);
        }
        typename A::R ap = A::abs(p);
        double be = A::to_double(ap) == 0.0 ? 0.0 : A::to_double(ap / s);
        berr[k] = be;
        if (be < accept) {
            w[k] = C(0.0);
            return;
        }
        C ratio = p / dp;
        C sum = C(0.0);
        for (int j = 0; j < N; ++j) {
            if (j == k) continue;
            C diff = z[k] - z[j];
            sum += C(1.0) / diff;
        }
        C denom = C(1.0) - ratio * sum;
        w[k] = ratio / denom;
        std::complex<double> wd = A::to_cd(w[k]);
        if (!std::isfinite(wd.real()) || !std::isfinite(wd.imag())) ok[k] = 0;
    };

    if (parallel) {
#ifdef HEATFLOW_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 4)
        for (int k = 0; k < N; ++k) body(k);
#else
        for (int k = 0; k < N; ++k) body(k);
#endif
    } else {
        for (int k = 0; k < N; ++k) body(k);
    }

    int active = 0;
    for (int k = 0; k < N; ++k) {
        if (done[k]) continue;
        if (berr[k] < accept) {
            done[k] = 1;
            continue;
        }
        if (!ok[k]) {
            z[k] *= C(std::complex<double>(1.0 + 1e-3, 1e-3));
            ++active;
            continue;
        }
        std::complex<double> wd = A::to_cd(w[k]), zd = A::to_cd(z[k]);
        z[k] -= w[k];
        A::round(z[k], bits);
        // correction below the representable spacing: nothing left to gain
        if (std::abs(wd) <= 4 * A::roundoff(bits) * std::abs(zd)) done[k] = 1;
        else ++active;
    }
    return active;
}

}  // namespace heatflow::detail
