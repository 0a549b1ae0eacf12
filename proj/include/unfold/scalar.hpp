#pragma once
// Scalar kinds shared by the exact and numeric code paths.

#include <boost/multiprecision/gmp.hpp>
#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

namespace unfold {

using Rational = boost::multiprecision::mpq_rational;
using Complex = std::complex<double>;

/// Gaussian rational a + b i with exact field arithmetic.
struct QQi {
    Rational re, im;

    QQi() = default;
    QQi(int r) : re(r), im(0) {}
    QQi(long r) : re(r), im(0) {}
    QQi(long long r) : re(r), im(0) {}
    QQi(Rational r) : re(std::move(r)), im(0) {}
    QQi(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    QQi conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }

    QQi& operator+=(const QQi& o) { re += o.re; im += o.im; return *this; }
    QQi& operator-=(const QQi& o) { re -= o.re; im -= o.im; return *this; }
    QQi& operator*=(const QQi& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    QQi& operator/=(const QQi& o);

    friend QQi operator+(QQi a, const QQi& b) { return a += b; }
    friend QQi operator-(QQi a, const QQi& b) { return a -= b; }
    friend QQi operator*(QQi a, const QQi& b) { return a *= b; }
    friend QQi operator/(QQi a, const QQi& b) { return a /= b; }
    friend QQi operator-(const QQi& a) { return {-a.re, -a.im}; }
    friend bool operator==(const QQi& a, const QQi& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const QQi& a, const QQi& b) { return !(a == b); }

    /// Order used for sorting coordinates: a precedes b iff Re a > Re b,
    /// or the real parts agree and Im a > Im b.
    friend bool precedes(const QQi& a, const QQi& b) {
        if (a.re != b.re) return a.re > b.re;
        return a.im > b.im;
    }

    bool is_integer() const;

    Complex to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    std::string str() const;
    /// Accepts "a", "a/b", "c i", "a/b+c/d i", "a-c i", "i", "-i".
    static QQi parse(const std::string& s);
};

std::ostream& operator<<(std::ostream& os, const QQi& q);

/// Forward-mode dual number over the complex field; d carries a directional derivative.
struct Dual {
    Complex v, d;
    Dual() = default;
    Dual(int x) : v(x), d(0) {}
    Dual(double x) : v(x), d(0) {}
    Dual(Complex x) : v(x), d(0) {}
    Dual(Complex x, Complex dx) : v(x), d(dx) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) {
        d = (d * o.v - v * o.d) / (o.v * o.v);
        v /= o.v;
        return *this;
    }
    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
    friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
    friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
};

// Uniform helpers used by templated kernels.
inline bool is_zero(const QQi& x) { return x.is_zero(); }
inline bool is_zero(const Complex& x) { return x == Complex(0); }
inline bool is_zero(const Dual& x) { return x.v == Complex(0) && x.d == Complex(0); }

inline double magnitude(const QQi& x) { return is_zero(x) ? 0.0 : 1.0 + std::abs(x.to_complex()); }
inline double magnitude(const Complex& x) { return std::abs(x); }
inline double magnitude(const Dual& x) { return std::abs(x.v); }

inline Complex to_complex(const QQi& x) { return x.to_complex(); }
inline Complex to_complex(const Complex& x) { return x; }
inline Complex to_complex(const Dual& x) { return x.v; }

template <class T> T scalar_from(const QQi& q);
template <> inline QQi scalar_from<QQi>(const QQi& q) { return q; }
template <> inline Complex scalar_from<Complex>(const QQi& q) { return q.to_complex(); }
template <> inline Dual scalar_from<Dual>(const QQi& q) { return Dual(q.to_complex()); }

}  // namespace unfold
