#include "heatflow/polyheat.hpp"

#include "heatflow/errors.hpp"

#include <cmath>
#include <limits>

namespace heatflow {

PolySpec::PolySpec(std::vector<cplx> lambdas, std::vector<int> alphas, int n)
    : lambdas_(std::move(lambdas)), alphas_(std::move(alphas)), n_(n)
{
    if (lambdas_.empty()) throw ConfigError("spec needs at least one lambda");
    if (lambdas_.size() != alphas_.size()) throw ConfigError("lambda/alpha length mismatch");
    if (n_ < 1) throw ConfigError("n must be >= 1");
    for (int a : alphas_) {
        if (a < 1) throw ConfigError("multiplicities must be positive integers");
        alpha_ += a;
    }
    delta_ = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < lambdas_.size(); ++i) {
        if (!std::isfinite(lambdas_[i].real()) || !std::isfinite(lambdas_[i].imag()))
            throw ConfigError("non-finite lambda");
        lambda_max_ = std::max(lambda_max_, std::abs(lambdas_[i]));
        for (size_t j = 0; j < i; ++j) delta_ = std::min(delta_, std::abs(lambdas_[i] - lambdas_[j]));
    }
    if (delta_ == 0.0) throw ConfigError("lambdas must be distinct");
}

cplx PolySpec::center_of_mass() const
{
    cplx c = 0;
    for (int j = 0; j < d(); ++j) c += double(alphas_[j]) * lambdas_[j];
    return c / double(alpha_);
}

PolySpec PolySpec::rotated(cplx w) const
{
    std::vector<cplx> l = lambdas_;
    for (auto& x : l) x *= w;
    return {l, alphas_, n_};
}

ScaledCoeffPoly ScaledCoeffPoly::from_coefficients(const std::vector<mp::Complex>& c, int bits)
{
    ScaledCoeffPoly p;
    p.bits_ = bits;
    p.log_modulus_.reserve(c.size());
    p.phase_.reserve(c.size());
    for (const auto& ck : c) {
        mp::Complex x = ck;
        x.set_precision(bits + 32);
        mp::Real r = mp::abs(x);
        if (r.is_zero()) {
            p.log_modulus_.push_back(mp::Real::infinity(-1));
            p.phase_.emplace_back(mp::Real(1.0, bits), mp::Real(0.0, bits));
            continue;
        }
        // the guard bits keep exp(log|c|) accurate to the working precision
        p.log_modulus_.push_back(mp::log(r));
        mp::Complex ph = x / r;
        ph.set_precision(bits);
        p.phase_.push_back(std::move(ph));
    }
    return p;
}

mp::Complex ScaledCoeffPoly::coefficient(int k) const
{
    if (log_modulus_[k].is_inf()) return {mp::Real(0.0, bits_), mp::Real(0.0, bits_)};
    mp::Complex c = mp::exp(log_modulus_[k]) * phase_[k];
    c.set_precision(bits_);
    return c;
}

std::vector<mp::Complex> ScaledCoeffPoly::coefficients() const
{
    std::vector<mp::Complex> c;
    c.reserve(log_modulus_.size());
    for (int k = 0; k <= degree(); ++k) c.push_back(coefficient(k));
    return c;
}

cplx LogValue::value() const
{
    if (log_modulus.is_inf()) return 0.0;
    return std::exp(log_modulus.to_double()) * phase.to_cd();
}

double root_radius_bound(const ScaledCoeffPoly& p)
{
    int N = p.degree();
    if (N < 1) return 0.0;
    double best = 0.0;
    const mp::Real& lead = p.log_modulus(N);
    for (int k = 1; k <= N; ++k) {
        const mp::Real& lk = p.log_modulus(N - k);
        if (lk.is_inf()) continue;
        double v = ((lk - lead) / double(k)).to_double();
        if (k == N) v -= std::log(2.0) / N;
        best = std::max(best, std::exp(v));
    }
    return 2.0 * best;
}

double cancellation_bits(const std::vector<mp::Complex>& c, const std::vector<mp::Real>& abs_c, double r)
{
    mp::Real num(0.0, 64), den(0.0, 64), rk(1.0, 64);
    for (size_t k = 0; k < c.size(); ++k) {
        num += abs_c[k] * rk;
        den += mp::abs(c[k]) * rk;
        rk *= r;
    }
    if (den.is_zero()) return num.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    return mp::log2(num / den).to_double();
}

namespace {

void check_loss(double lost, int bits, const char* where)
{
    if (lost > bits - 53)
        throw PrecisionExhausted(std::string(where) + ": cancellation consumed " + std::to_string(int(lost)) +
                                 " of " + std::to_string(bits) + " bits");
}

}  // namespace

ScaledCoeffPoly expand_power(const PolySpec& spec, int bits)
{
    if (bits < 64) throw PrecisionExhausted("working precision below 64 bits");
    mp::PrecisionScope scope(bits + 16);
    const int N = spec.total_degree();
    std::vector<mp::Complex> c(N + 1, mp::Complex(0.0));
    std::vector<mp::Real> a(N + 1, mp::Real(0.0));
    c[0] = mp::Complex(1.0);
    a[0] = 1.0;
    int deg = 0;
    mp::Complex tmp;
    for (int j = 0; j < spec.d(); ++j) {
        mp::Complex lam(spec.lambdas()[j]);
        double alam = std::abs(spec.lambdas()[j]);
        for (int rep = 0; rep < spec.alphas()[j] * spec.n(); ++rep) {
            // multiply by (z - lambda)
            for (int k = deg + 1; k >= 0; --k) {
                tmp = k > 0 ? c[k - 1] : mp::Complex(0.0);
                if (k <= deg) tmp -= lam * c[k];
                c[k] = tmp;
                mp::Real at = k > 0 ? a[k - 1] : mp::Real(0.0);
                if (k <= deg) at += a[k] * alam;
                a[k] = std::move(at);
            }
            ++deg;
        }
    }
    double r = 1.0 + spec.lambda_max();
    check_loss(cancellation_bits(c, a, r), bits, "expand_power");
    return ScaledCoeffPoly::from_coefficients(c, bits);
}

ScaledCoeffPoly heat_evolve(const ScaledCoeffPoly& p, cplx t, int scale)
{
    const int N = p.degree();
    if (N <= 0 || t == 0.0) return p;
    if (scale < 1) throw ConfigError("heat scale must be positive");
    const int bits = p.precision();
    mp::PrecisionScope scope(bits + 16);
    std::vector<mp::Complex> a = p.coefficients();
    mp::Complex s = mp::Complex(t) / mp::Real(double(scale));
    mp::Real as = mp::abs(s);

    // H_{m+1} = z H_m - m s H_{m-1}, H_m = s^{m/2} He_m(z / sqrt s)
    std::vector<mp::Complex> prev(N + 1, mp::Complex(0.0)), cur(N + 1, mp::Complex(0.0)), next(N + 1);
    std::vector<mp::Real> aprev(N + 1, mp::Real(0.0)), acur(N + 1, mp::Real(0.0)), anext(N + 1);
    std::vector<mp::Complex> out(N + 1, mp::Complex(0.0));
    std::vector<mp::Real> aout(N + 1, mp::Real(0.0));
    cur[0] = mp::Complex(1.0);
    acur[0] = 1.0;
    mp::Complex ms;
    mp::Real ams;
    for (int m = 0; m <= N; ++m) {
        if (!a[m].is_zero()) {
            mp::Real am = mp::abs(a[m]);
            for (int k = m % 2; k <= m; k += 2) {
                out[k].add_mul(a[m], cur[k]);
                aout[k] += am * acur[k];
            }
        }
        if (m == N) break;
        ms = s * double(m);
        ams = as * double(m);
        for (int k = (m + 1) % 2; k <= m + 1; k += 2) {
            next[k] = k > 0 ? cur[k - 1] : mp::Complex(0.0);
            anext[k] = k > 0 ? acur[k - 1] : mp::Real(0.0);
            if (m > 0 && k <= m - 1) {
                next[k] -= ms * prev[k];
                anext[k] += ams * aprev[k];
            }
        }
        std::swap(prev, cur);
        std::swap(cur, next);
        std::swap(aprev, acur);
        std::swap(acur, anext);
    }
    double r = 1.0 + root_radius_bound(p) + 2.0 * std::sqrt(std::abs(t));
    check_loss(cancellation_bits(out, aout, r), bits, "heat_evolve");
    return ScaledCoeffPoly::from_coefficients(out, bits);
}

ScaledCoeffPoly heat_evolve_series(const ScaledCoeffPoly& p, cplx t, int scale)
{
    const int N = p.degree();
    if (N <= 0 || t == 0.0) return p;
    if (scale < 1) throw ConfigError("heat scale must be positive");
    const int bits = p.precision();
    mp::PrecisionScope scope(bits + 16);
    std::vector<mp::Complex> a = p.coefficients();
    // c_j = sum_k (-s/2)^k / k! (j+2k)!/j! a_{j+2k}
    mp::Complex q = mp::Complex(-t) / mp::Real(2.0 * scale);
    std::vector<mp::Complex> out(N + 1, mp::Complex(0.0));
    std::vector<mp::Real> aout(N + 1, mp::Real(0.0));
    mp::Complex term;
    for (int j = 0; j <= N; ++j) {
        mp::Complex w(1.0);
        for (int k = 0; j + 2 * k <= N; ++k) {
            if (k > 0) {
                w *= q * double(long(j + 2 * k) * (j + 2 * k - 1));
                w /= mp::Real(double(k));
            }
            if (a[j + 2 * k].is_zero()) continue;
            term = w * a[j + 2 * k];
            aout[j] += mp::abs(term);
            out[j] += term;
        }
    }
    double r = 1.0 + root_radius_bound(p) + 2.0 * std::sqrt(std::abs(t));
    check_loss(cancellation_bits(out, aout, r), bits, "heat_evolve_series");
    return ScaledCoeffPoly::from_coefficients(out, bits);
}

LogValue eval_log(const std::vector<mp::Complex>& c, const mp::Complex& z)
{
    mp::Complex acc = c.back();
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
        acc *= z;
        acc += c[k];
    }
    int bits = acc.precision();
    if (acc.is_zero()) return {mp::Real::infinity(-1), mp::Complex(mp::Real(1.0, bits), mp::Real(0.0, bits))};
    mp::Real r = mp::abs(acc);
    return {mp::log(r), acc / r};
}

LogValue eval_log(const ScaledCoeffPoly& p, cplx z)
{
    mp::PrecisionScope scope(p.precision());
    return eval_log(p.coefficients(), mp::Complex(z));
}

ContourResult contour_eval(const PolySpec& spec, double t, cplx z, const QuadratureConfig& q)
{
    if (!(t > 0)) throw ConfigError("contour_eval requires t > 0");
    const int N = spec.total_degree();
    const double s = t / N;
    // the integrand peaks near exp(Re(z)^2 / 2s) times the result scale
    const int bits = mp::default_precision(N) + 32 + int(std::ceil(z.real() * z.real() / (2 * s) / std::log(2.0)));
    mp::PrecisionScope scope(bits);
    const double C = std::sqrt(2.0 * t * N * std::log(1.0 / q.eps)) + spec.lambda_max() + std::abs(z);

    mp::Complex zz(z);
    mp::Real two_s(2.0 * s);
    std::vector<mp::Complex> lam;
    for (auto l : spec.lambdas()) lam.emplace_back(l);

    // node positions are formed in multiprecision: the integrand can exceed the
    // result by many orders of magnitude, so rounding y in double is not enough
    auto f = [&](const mp::Real& y) {
        mp::Complex iy(mp::Real(0.0), y);
        mp::Complex w = zz - iy;
        mp::Complex v = mp::exp(w * w / two_s);
        for (int j = 0; j < spec.d(); ++j) v *= mp::pow(iy - lam[j], long(spec.alphas()[j]) * spec.n());
        return v;
    };

    double h0 = std::min(std::sqrt(s) / 2, s / (1 + std::abs(z.real())));
    int half = static_cast<int>(std::ceil(C / h0));
    mp::Real h = mp::Real(C) / double(half);
    mp::Complex sum(0.0);
    for (int k = -half; k <= half; ++k) sum += f(h * double(k));
    mp::Complex T = sum * h;
    int nodes = 2 * half + 1;

    ContourResult res;
    for (int it = 0; it < q.max_doublings; ++it) {
        mp::Complex mid(0.0);
        for (int k = -half; k < half; ++k) mid += f(h * (k + 0.5));
        sum += mid;
        nodes += 2 * half;
        h /= 2.0;
        half *= 2;
        mp::Complex Tn = sum * h;
        mp::Real denom = mp::abs(Tn);
        res.rel_change = denom.is_zero() ? 0.0 : (mp::abs(Tn - T) / denom).to_double();
        T = std::move(Tn);
        if (res.rel_change < q.eps) {
            res.converged = true;
            break;
        }
    }
    T /= mp::sqrt(mp::Real(2.0) * mp::Real::pi() * mp::Real(s));
    res.nodes = nodes;
    mp::Real r = mp::abs(T);
    if (r.is_zero()) res.value = {mp::Real::infinity(-1), mp::Complex(1.0)};
    else res.value = {mp::log(r), T / r};
    return res;
}

}  // namespace heatflow
