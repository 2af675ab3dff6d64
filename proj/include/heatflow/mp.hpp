#pragma once

#include <mpfr.h>

#include <algorithm>
#include <complex>
#include <string>
#include <utility>

namespace heatflow::mp {

// Working precision in bits for newly created values on this thread.
int working_precision();
void set_working_precision(int bits);

// Default precision for a problem of total degree N: max(128, ceil(2.5 N)),
// overridden by HEATFLOW_PRECISION when set.
int default_precision(int total_degree);

class PrecisionScope {
public:
    explicit PrecisionScope(int bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    int previous_;
};

class Real {
public:
    Real();
    Real(double x);
    Real(double x, int bits);
    explicit Real(long x);
    explicit Real(const std::string& s);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    Real& operator=(double x);
    ~Real();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
    // Changes precision keeping the value (rounded).
    void set_precision(int bits);

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    std::string to_string(int digits = 0) const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_inf() const { return mpfr_inf_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    // Binary exponent e with value = m 2^e, 0.5 <= |m| < 1. Undefined for zero.
    long exponent() const { return mpfr_get_exp(v_); }

    static Real infinity(int sign);
    static Real pi();

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator+=(double o);
    Real& operator-=(double o);
    Real& operator*=(double o);
    Real& operator/=(double o);
    Real operator-() const;

private:
    mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(Real&& a, const Real& b);
Real operator-(Real&& a, const Real& b);
Real operator*(Real&& a, const Real& b);
Real operator/(Real&& a, const Real& b);
Real operator+(Real&& a, double b);
Real operator-(Real&& a, double b);
Real operator*(Real&& a, double b);
Real operator/(Real&& a, double b);
Real operator+(const Real& a, double b);
Real operator-(const Real& a, double b);
Real operator*(const Real& a, double b);
Real operator/(const Real& a, double b);
Real operator+(double a, const Real& b);
Real operator-(double a, const Real& b);
Real operator*(double a, const Real& b);
Real operator/(double a, const Real& b);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator!=(const Real& a, const Real& b);
bool operator<(const Real& a, double b);
bool operator>(const Real& a, double b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real exp(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
Real max(const Real& a, const Real& b);
// x * 2^e
Real ldexp(const Real& x, long e);
// log(n!) via lgamma
Real log_factorial(long n);

class Complex {
public:
    Complex() = default;
    Complex(double re) : re_(re), im_(0.0) {}
    Complex(const Real& re) : re_(re), im_(0.0, re.precision()) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    Complex(std::complex<double> z) : re_(z.real()), im_(z.imag()) {}
    Complex(std::complex<double> z, int bits) : re_(z.real(), bits), im_(z.imag(), bits) {}

    Real& re() { return re_; }
    Real& im() { return im_; }
    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    int precision() const { return std::max(re_.precision(), im_.precision()); }
    void set_precision(int bits);

    std::complex<double> to_cd() const { return {re_.to_double(), im_.to_double()}; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& o);
    Complex& operator/=(const Real& o);
    Complex& operator*=(double o);
    Complex operator-() const { return {-re_, -im_}; }

    // this += a * b without temporaries beyond two scratch values
    void add_mul(const Complex& a, const Complex& b);

private:
    Real re_, im_;
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
Complex operator*(Complex a, const Real& b);
Complex operator*(const Real& a, Complex b);
Complex operator/(Complex a, const Real& b);
Complex operator*(Complex a, double b);
Complex operator*(double a, Complex b);

Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex polar(const Real& r, const Real& theta);
Complex exp(const Complex& z);
Complex pow(const Complex& z, long k);
Complex sqrt(const Complex& z);  // principal branch

}  // namespace heatflow::mp
