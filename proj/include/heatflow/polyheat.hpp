#pragma once

#include "heatflow/mp.hpp"

#include <complex>
#include <string>
#include <vector>

namespace heatflow {

using cplx = std::complex<double>;

// P(z) = prod_j (z - lambda_j)^alpha_j, raised to the power n.
class PolySpec {
public:
    PolySpec(std::vector<cplx> lambdas, std::vector<int> alphas, int n);

    const std::vector<cplx>& lambdas() const { return lambdas_; }
    const std::vector<int>& alphas() const { return alphas_; }
    int n() const { return n_; }
    int d() const { return static_cast<int>(lambdas_.size()); }
    int alpha() const { return alpha_; }
    int total_degree() const { return alpha_ * n_; }
    // minimal pairwise distance; +inf when d == 1
    double delta() const { return delta_; }
    double lambda_max() const { return lambda_max_; }
    cplx center_of_mass() const;

    PolySpec with_n(int n) const { return {lambdas_, alphas_, n}; }
    // spec with every lambda multiplied by w
    PolySpec rotated(cplx w) const;

private:
    std::vector<cplx> lambdas_;
    std::vector<int> alphas_;
    int n_;
    int alpha_ = 0;
    double delta_ = 0;
    double lambda_max_ = 0;
};

// Complex heat time; the flow is exp(-t/(2N) d^2) with N the original degree.
struct HeatTime {
    cplx t;
    double modulus() const { return std::abs(t); }
    double theta() const { return std::arg(t); }
    bool is_positive_real() const { return t.imag() == 0.0 && t.real() > 0.0; }
};

// Coefficients of sum_k c_k z^k stored as log|c_k| and c_k/|c_k|.
// A zero coefficient has log_modulus -inf and phase 1.
class ScaledCoeffPoly {
public:
    ScaledCoeffPoly() = default;
    static ScaledCoeffPoly from_coefficients(const std::vector<mp::Complex>& c, int bits);

    int degree() const { return static_cast<int>(log_modulus_.size()) - 1; }
    int precision() const { return bits_; }
    const mp::Real& log_modulus(int k) const { return log_modulus_[k]; }
    const mp::Complex& phase(int k) const { return phase_[k]; }

    mp::Complex coefficient(int k) const;
    std::vector<mp::Complex> coefficients() const;

private:
    std::vector<mp::Real> log_modulus_;
    std::vector<mp::Complex> phase_;
    int bits_ = 0;
};

struct LogValue {
    mp::Real log_modulus;
    mp::Complex phase;
    double log_abs() const { return log_modulus.to_double(); }
    cplx value() const;  // exp(log|p|) phase in double, may overflow
};

// Coefficients of P^n, ascending powers.
ScaledCoeffPoly expand_power(const PolySpec& spec, int bits);

// exp(-t/(2 scale) d^2) p via the monic scaled Hermite recurrence.
ScaledCoeffPoly heat_evolve(const ScaledCoeffPoly& p, cplx t, int scale);
// Same operator by the truncated derivative series; used as a cross-check.
ScaledCoeffPoly heat_evolve_series(const ScaledCoeffPoly& p, cplx t, int scale);

// Fujiwara bound 2 max_k |c_{N-k}/c_N|^{1/k} on the root moduli.
double root_radius_bound(const ScaledCoeffPoly& p);

// Bits lost to cancellation when comparing |sum c_k r^k| against the same sum
// built from absolute values (the magnitude that rounding errors scale with).
double cancellation_bits(const std::vector<mp::Complex>& c, const std::vector<mp::Real>& abs_c, double r);

LogValue eval_log(const ScaledCoeffPoly& p, cplx z);
LogValue eval_log(const std::vector<mp::Complex>& c, const mp::Complex& z);

struct QuadratureConfig {
    double eps = 1e-12;
    int max_doublings = 12;
};

struct ContourResult {
    LogValue value;
    int nodes = 0;
    double rel_change = 0;
    bool converged = false;
};

// Gaussian integral representation along the imaginary axis, for t > 0.
ContourResult contour_eval(const PolySpec& spec, double t, cplx z, const QuadratureConfig& q = {});

}  // namespace heatflow
