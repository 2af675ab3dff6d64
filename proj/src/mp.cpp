#include "heatflow/mp.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace heatflow::mp {

namespace {

thread_local int tl_precision = 128;

constexpr mpfr_rnd_t R = MPFR_RNDN;

int max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

void promote(Real& a, int bits)
{
    if (a.precision() < bits) a.set_precision(bits);
}

}  // namespace

int working_precision() { return tl_precision; }

void set_working_precision(int bits)
{
    if (bits < MPFR_PREC_MIN || bits > 1 << 24) throw std::invalid_argument("precision out of range");
    tl_precision = bits;
}

int default_precision(int total_degree)
{
    if (const char* env = std::getenv("HEATFLOW_PRECISION")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 64) return static_cast<int>(v);
    }
    return std::max(128, static_cast<int>(std::ceil(2.5 * total_degree)));
}

PrecisionScope::PrecisionScope(int bits) : previous_(tl_precision) { set_working_precision(bits); }
PrecisionScope::~PrecisionScope() { tl_precision = previous_; }

Real::Real()
{
    mpfr_init2(v_, tl_precision);
    mpfr_set_zero(v_, 1);
}

Real::Real(double x)
{
    mpfr_init2(v_, tl_precision);
    mpfr_set_d(v_, x, R);
}

Real::Real(double x, int bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, x, R);
}

Real::Real(long x)
{
    mpfr_init2(v_, tl_precision);
    mpfr_set_si(v_, x, R);
}

Real::Real(const std::string& s)
{
    mpfr_init2(v_, tl_precision);
    if (mpfr_set_str(v_, s.c_str(), 10, R) != 0 && mpfr_nan_p(v_))
        throw std::invalid_argument("bad number: " + s);
}

Real::Real(const Real& o)
{
    mpfr_init2(v_, o.precision());
    mpfr_set(v_, o.v_, R);
}

Real::Real(Real&& o) noexcept
{
    // steal the limbs; the moved-from object is left without storage
    v_[0] = o.v_[0];
    o.v_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& o)
{
    if (this == &o) return *this;
    if (v_[0]._mpfr_d == nullptr) mpfr_init2(v_, o.precision());
    else if (precision() < o.precision()) mpfr_set_prec(v_, o.precision());
    mpfr_set(v_, o.v_, R);
    return *this;
}

Real& Real::operator=(Real&& o) noexcept
{
    std::swap(v_[0], o.v_[0]);
    return *this;
}

Real& Real::operator=(double x)
{
    if (v_[0]._mpfr_d == nullptr) mpfr_init2(v_, tl_precision);
    mpfr_set_d(v_, x, R);
    return *this;
}

Real::~Real()
{
    if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
}

void Real::set_precision(int bits) { mpfr_prec_round(v_, bits, R); }

std::string Real::to_string(int digits) const
{
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, R);
    std::string m(s);
    mpfr_free_str(s);
    if (!is_finite()) return m;
    bool neg = !m.empty() && m[0] == '-';
    if (neg) m.erase(0, 1);
    std::string out = neg ? "-" : "";
    out += "0." + m + "e" + std::to_string(static_cast<long>(e));
    return out;
}

Real Real::infinity(int sign)
{
    Real r;
    mpfr_set_inf(r.v_, sign);
    return r;
}

Real Real::pi()
{
    Real r;
    mpfr_const_pi(r.v_, R);
    return r;
}

Real& Real::operator+=(const Real& o)
{
    promote(*this, o.precision());
    mpfr_add(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator-=(const Real& o)
{
    promote(*this, o.precision());
    mpfr_sub(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator*=(const Real& o)
{
    promote(*this, o.precision());
    mpfr_mul(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator/=(const Real& o)
{
    promote(*this, o.precision());
    mpfr_div(v_, v_, o.v_, R);
    return *this;
}

Real& Real::operator+=(double o)
{
    mpfr_add_d(v_, v_, o, R);
    return *this;
}

Real& Real::operator-=(double o)
{
    mpfr_sub_d(v_, v_, o, R);
    return *this;
}

Real& Real::operator*=(double o)
{
    mpfr_mul_d(v_, v_, o, R);
    return *this;
}

Real& Real::operator/=(double o)
{
    mpfr_div_d(v_, v_, o, R);
    return *this;
}

Real Real::operator-() const
{
    Real r(*this);
    mpfr_neg(r.v_, r.v_, R);
    return r;
}

#define HEATFLOW_BINOP(OP, FN)                                   \
    Real operator OP(const Real& a, const Real& b)               \
    {                                                            \
        Real r(0.0, max_prec(a, b));                             \
        FN(r.get(), a.get(), b.get(), R);                        \
        return r;                                                \
    }                                                            \
    Real operator OP(Real&& a, const Real& b)                    \
    {                                                            \
        promote(a, b.precision());                               \
        FN(a.get(), a.get(), b.get(), R);                        \
        return std::move(a);                                     \
    }

HEATFLOW_BINOP(+, mpfr_add)
HEATFLOW_BINOP(-, mpfr_sub)
HEATFLOW_BINOP(*, mpfr_mul)
HEATFLOW_BINOP(/, mpfr_div)
#undef HEATFLOW_BINOP

Real operator+(Real&& a, double b) { return std::move(a += b); }
Real operator-(Real&& a, double b) { return std::move(a -= b); }
Real operator*(Real&& a, double b) { return std::move(a *= b); }
Real operator/(Real&& a, double b) { return std::move(a /= b); }

Real operator+(const Real& a, double b)
{
    Real r(0.0, a.precision());
    mpfr_add_d(r.get(), a.get(), b, R);
    return r;
}

Real operator-(const Real& a, double b)
{
    Real r(0.0, a.precision());
    mpfr_sub_d(r.get(), a.get(), b, R);
    return r;
}

Real operator*(const Real& a, double b)
{
    Real r(0.0, a.precision());
    mpfr_mul_d(r.get(), a.get(), b, R);
    return r;
}

Real operator/(const Real& a, double b)
{
    Real r(0.0, a.precision());
    mpfr_div_d(r.get(), a.get(), b, R);
    return r;
}

Real operator+(double a, const Real& b) { return b + a; }
Real operator*(double a, const Real& b) { return b * a; }

Real operator-(double a, const Real& b)
{
    Real r(0.0, b.precision());
    mpfr_d_sub(r.get(), a, b.get(), R);
    return r;
}

Real operator/(double a, const Real& b)
{
    Real r(0.0, b.precision());
    mpfr_d_div(r.get(), a, b.get(), R);
    return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator!=(const Real& a, const Real& b) { return !(a == b); }
bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }

#define HEATFLOW_UNARY(NAME, FN)               \
    Real NAME(const Real& x)                   \
    {                                          \
        Real r(0.0, x.precision());            \
        FN(r.get(), x.get(), R);               \
        return r;                              \
    }

HEATFLOW_UNARY(abs, mpfr_abs)
HEATFLOW_UNARY(sqrt, mpfr_sqrt)
HEATFLOW_UNARY(log, mpfr_log)
HEATFLOW_UNARY(log2, mpfr_log2)
HEATFLOW_UNARY(exp, mpfr_exp)
HEATFLOW_UNARY(sin, mpfr_sin)
HEATFLOW_UNARY(cos, mpfr_cos)
#undef HEATFLOW_UNARY

Real atan2(const Real& y, const Real& x)
{
    Real r(0.0, max_prec(x, y));
    mpfr_atan2(r.get(), y.get(), x.get(), R);
    return r;
}

Real hypot(const Real& x, const Real& y)
{
    Real r(0.0, max_prec(x, y));
    mpfr_hypot(r.get(), x.get(), y.get(), R);
    return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real ldexp(const Real& x, long e)
{
    Real r(0.0, x.precision());
    mpfr_mul_2si(r.get(), x.get(), e, R);
    return r;
}

Real log_factorial(long n)
{
    Real r(static_cast<double>(n + 1));
    int sign = 0;
    mpfr_lgamma(r.get(), &sign, r.get(), R);
    return r;
}

void Complex::set_precision(int bits)
{
    re_.set_precision(bits);
    im_.set_precision(bits);
}

Complex& Complex::operator+=(const Complex& o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Complex& Complex::operator-=(const Complex& o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Complex& Complex::operator*=(const Complex& o)
{
    if (&o == this) {
        Complex c(o);
        return *this *= c;
    }
    int p = std::max(precision(), o.precision());
    Real t1(0.0, p), t2(0.0, p);
    mpfr_mul(t1.get(), re_.get(), o.re_.get(), R);
    mpfr_mul(t2.get(), im_.get(), o.im_.get(), R);
    promote(re_, p);
    promote(im_, p);
    // im = re*o.im + im*o.re computed before re is overwritten
    mpfr_mul(im_.get(), im_.get(), o.re_.get(), R);
    mpfr_fma(im_.get(), re_.get(), o.im_.get(), im_.get(), R);
    mpfr_sub(re_.get(), t1.get(), t2.get(), R);
    return *this;
}

Complex& Complex::operator/=(const Complex& o)
{
    Real d = norm(o);
    *this *= conj(o);
    re_ /= d;
    im_ /= d;
    return *this;
}

Complex& Complex::operator*=(const Real& o)
{
    re_ *= o;
    im_ *= o;
    return *this;
}

Complex& Complex::operator/=(const Real& o)
{
    re_ /= o;
    im_ /= o;
    return *this;
}

Complex& Complex::operator*=(double o)
{
    re_ *= o;
    im_ *= o;
    return *this;
}

void Complex::add_mul(const Complex& a, const Complex& b)
{
    int p = std::max({precision(), a.precision(), b.precision()});
    promote(re_, p);
    promote(im_, p);
    Real t(0.0, p);
    mpfr_mul(t.get(), a.re_.get(), b.re_.get(), R);
    mpfr_add(re_.get(), re_.get(), t.get(), R);
    mpfr_mul(t.get(), a.im_.get(), b.im_.get(), R);
    mpfr_sub(re_.get(), re_.get(), t.get(), R);
    mpfr_mul(t.get(), a.re_.get(), b.im_.get(), R);
    mpfr_add(im_.get(), im_.get(), t.get(), R);
    mpfr_mul(t.get(), a.im_.get(), b.re_.get(), R);
    mpfr_add(im_.get(), im_.get(), t.get(), R);
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }

Complex operator*(const Complex& a, const Complex& b)
{
    Complex r = a;
    r *= b;
    return r;
}

Complex operator/(Complex a, const Complex& b) { return a /= b; }
Complex operator*(Complex a, const Real& b) { return a *= b; }
Complex operator*(const Real& a, Complex b) { return b *= a; }
Complex operator/(Complex a, const Real& b) { return a /= b; }
Complex operator*(Complex a, double b) { return a *= b; }
Complex operator*(double a, Complex b) { return b *= a; }

Complex conj(const Complex& z) { return {z.re(), -z.im()}; }

Real norm(const Complex& z)
{
    Real r(0.0, z.precision());
    mpfr_sqr(r.get(), z.re().get(), R);
    Real t(0.0, z.precision());
    mpfr_sqr(t.get(), z.im().get(), R);
    r += t;
    return r;
}

Real abs(const Complex& z) { return hypot(z.re(), z.im()); }
Real arg(const Complex& z) { return atan2(z.im(), z.re()); }

Complex polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }

Complex exp(const Complex& z) { return polar(exp(z.re()), z.im()); }

Complex pow(const Complex& z, long k)
{
    if (k < 0) return Complex(Real(1.0, z.precision())) / pow(z, -k);
    Complex result(Real(1.0, z.precision()));
    Complex base = z;
    while (k > 0) {
        if (k & 1) result *= base;
        k >>= 1;
        if (k) base *= Complex(base);
    }
    return result;
}

Complex sqrt(const Complex& z)
{
    // principal branch via |z| and half-angle formulas, stable for Re z < 0
    Real r = abs(z);
    if (r.is_zero()) return z;
    Real a = sqrt((r + abs(z.re())) / 2.0);
    if (z.re().sign() >= 0) return {a, z.im() / (a * 2.0)};
    Real b = z.im().sign() < 0 ? -a : a;
    return {abs(z.im()) / (a * 2.0), b};
}

}  // namespace heatflow::mp
