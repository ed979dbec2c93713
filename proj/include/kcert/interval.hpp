#pragma once

// Real and rectangular complex interval arithmetic over the binary64 and MPFR
// backends. Bounds are rounded outward on every operation, so the computed
// interval always contains the exact set {x op y}.

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "kcert/scalar.hpp"

namespace kcert {

/// Raised for operations that are undefined on the given intervals, such as
/// dividing by an interval that contains zero, or when a bound overflows.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

template <class T>
class RealInterval {
public:
    RealInterval() : lo_(), hi_() {}

    RealInterval(T lo, T hi) : lo_(std::move(lo)), hi_(std::move(hi))
    {
        if (!ScalarTraits<T>::is_finite(lo_) || !ScalarTraits<T>::is_finite(hi_)) {
            throw std::invalid_argument("interval bounds must be finite");
        }
        if (hi_ < lo_) {
            throw std::invalid_argument("interval lower bound exceeds upper bound");
        }
    }

    static RealInterval point(const T& x) { return RealInterval(x, x); }

    const T& lo() const { return lo_; }
    const T& hi() const { return hi_; }

    bool contains(const T& x) const { return lo_ <= x && x <= hi_; }
    bool contains_zero() const { return ScalarTraits<T>::sign(lo_) <= 0 && ScalarTraits<T>::sign(hi_) >= 0; }
    bool is_point() const { return lo_ == hi_; }
    bool subset_of(const RealInterval& outer) const { return outer.lo_ <= lo_ && hi_ <= outer.hi_; }
    /// Strict containment in the interior of `outer`.
    bool interior_of(const RealInterval& outer) const { return outer.lo_ < lo_ && hi_ < outer.hi_; }
    bool intersects(const RealInterval& other) const { return lo_ <= other.hi_ && other.lo_ <= hi_; }

    /// Upper bound on max |x|.
    T mag() const
    {
        T a = abs(lo_);
        T b = abs(hi_);
        return a < b ? b : a;
    }

    friend bool operator==(const RealInterval& a, const RealInterval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

    // Builds a result interval, reporting overflow as a domain error.
    static RealInterval checked(T lo, T hi, const char* op)
    {
        if (!ScalarTraits<T>::is_finite(lo) || !ScalarTraits<T>::is_finite(hi)) {
            throw DomainError(std::string("overflow in interval ") + op);
        }
        RealInterval out;
        out.lo_ = std::move(lo);
        out.hi_ = std::move(hi);
        return out;
    }

private:
    T lo_;
    T hi_;
};

template <class T>
RealInterval<T> operator+(const RealInterval<T>& a, const RealInterval<T>& b)
{
    return RealInterval<T>::checked(add(a.lo(), b.lo(), Rounding::down), add(a.hi(), b.hi(), Rounding::up), "add");
}

template <class T>
RealInterval<T> operator-(const RealInterval<T>& a, const RealInterval<T>& b)
{
    return RealInterval<T>::checked(sub(a.lo(), b.hi(), Rounding::down), sub(a.hi(), b.lo(), Rounding::up), "sub");
}

template <class T>
RealInterval<T> operator-(const RealInterval<T>& a)
{
    return RealInterval<T>::checked(-a.hi(), -a.lo(), "neg");
}

template <class T>
RealInterval<T> operator*(const RealInterval<T>& a, const RealInterval<T>& b)
{
    const T* xs[2] = {&a.lo(), &a.hi()};
    const T* ys[2] = {&b.lo(), &b.hi()};
    T lo = mul(*xs[0], *ys[0], Rounding::down);
    T hi = mul(*xs[0], *ys[0], Rounding::up);
    for (int k = 1; k < 4; ++k) {
        const T& x = *xs[k >> 1];
        const T& y = *ys[k & 1];
        T d = mul(x, y, Rounding::down);
        T u = mul(x, y, Rounding::up);
        if (d < lo) {
            lo = std::move(d);
        }
        if (hi < u) {
            hi = std::move(u);
        }
    }
    return RealInterval<T>::checked(std::move(lo), std::move(hi), "mul");
}

template <class T>
RealInterval<T> operator/(const RealInterval<T>& a, const RealInterval<T>& b)
{
    if (b.contains_zero()) {
        throw DomainError("interval division: divisor contains zero");
    }
    const T* xs[2] = {&a.lo(), &a.hi()};
    const T* ys[2] = {&b.lo(), &b.hi()};
    T lo = div(*xs[0], *ys[0], Rounding::down);
    T hi = div(*xs[0], *ys[0], Rounding::up);
    for (int k = 1; k < 4; ++k) {
        const T& x = *xs[k >> 1];
        const T& y = *ys[k & 1];
        T d = div(x, y, Rounding::down);
        T u = div(x, y, Rounding::up);
        if (d < lo) {
            lo = std::move(d);
        }
        if (hi < u) {
            hi = std::move(u);
        }
    }
    return RealInterval<T>::checked(std::move(lo), std::move(hi), "div");
}

/// Exact range of x^2 over the interval, outward rounded. Unlike X*X this
/// never produces negative values.
template <class T>
RealInterval<T> square(const RealInterval<T>& x)
{
    const int slo = ScalarTraits<T>::sign(x.lo());
    const int shi = ScalarTraits<T>::sign(x.hi());
    if (slo >= 0) {
        return RealInterval<T>::checked(mul(x.lo(), x.lo(), Rounding::down), mul(x.hi(), x.hi(), Rounding::up), "square");
    }
    if (shi <= 0) {
        return RealInterval<T>::checked(mul(x.hi(), x.hi(), Rounding::down), mul(x.lo(), x.lo(), Rounding::up), "square");
    }
    const T m = x.mag();
    return RealInterval<T>::checked(sub(m, m, Rounding::nearest), mul(m, m, Rounding::up), "square");
}

template <class T>
std::ostream& operator<<(std::ostream& os, const RealInterval<T>& x)
{
    return os << '[' << ScalarTraits<T>::to_double(x.lo(), Rounding::down) << ", "
              << ScalarTraits<T>::to_double(x.hi(), Rounding::up) << ']';
}

/// Point complex number; arithmetic is round-to-nearest with no enclosure
/// guarantee.
template <class T>
struct Complex {
    T re{};
    T im{};

    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

template <class T>
Complex<T> operator+(const Complex<T>& a, const Complex<T>& b)
{
    return {add(a.re, b.re, Rounding::nearest), add(a.im, b.im, Rounding::nearest)};
}

template <class T>
Complex<T> operator-(const Complex<T>& a, const Complex<T>& b)
{
    return {sub(a.re, b.re, Rounding::nearest), sub(a.im, b.im, Rounding::nearest)};
}

template <class T>
Complex<T> operator-(const Complex<T>& a)
{
    return {-a.re, -a.im};
}

template <class T>
Complex<T> operator*(const Complex<T>& a, const Complex<T>& b)
{
    constexpr Rounding n = Rounding::nearest;
    return {sub(mul(a.re, b.re, n), mul(a.im, b.im, n), n), add(mul(a.re, b.im, n), mul(a.im, b.re, n), n)};
}

/// Smith's algorithm. Throws DomainError on an exactly zero divisor.
template <class T>
Complex<T> operator/(const Complex<T>& a, const Complex<T>& b)
{
    constexpr Rounding n = Rounding::nearest;
    if (ScalarTraits<T>::sign(b.re) == 0 && ScalarTraits<T>::sign(b.im) == 0) {
        throw DomainError("complex division by zero");
    }
    if (abs(b.im) <= abs(b.re)) {
        const T r = div(b.im, b.re, n);
        const T d = add(b.re, mul(b.im, r, n), n);
        return {div(add(a.re, mul(a.im, r, n), n), d, n), div(sub(a.im, mul(a.re, r, n), n), d, n)};
    }
    const T r = div(b.re, b.im, n);
    const T d = add(b.im, mul(b.re, r, n), n);
    return {div(add(mul(a.re, r, n), a.im, n), d, n), div(sub(mul(a.im, r, n), a.re, n), d, n)};
}

template <class T>
Complex<T> square(const Complex<T>& z)
{
    return z * z;
}

/// |Re z| + |Im z|, a cheap magnitude used for pivoting and norms of updates.
template <class T>
T abs1(const Complex<T>& z)
{
    return add(abs(z.re), abs(z.im), Rounding::nearest);
}

/// Upper bound on |z|.
template <class T>
T modulus_up(const Complex<T>& z)
{
    return sqrt_rounded(add(mul(z.re, z.re, Rounding::up), mul(z.im, z.im, Rounding::up), Rounding::up), Rounding::up);
}

/// Rectangular complex interval X + iY.
template <class T>
class ComplexInterval {
public:
    ComplexInterval() = default;
    ComplexInterval(RealInterval<T> re, RealInterval<T> im) : re_(std::move(re)), im_(std::move(im)) {}

    static ComplexInterval point(const Complex<T>& z)
    {
        return {RealInterval<T>::point(z.re), RealInterval<T>::point(z.im)};
    }

    const RealInterval<T>& re() const { return re_; }
    const RealInterval<T>& im() const { return im_; }

    bool contains(const Complex<T>& z) const { return re_.contains(z.re) && im_.contains(z.im); }
    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
    bool subset_of(const ComplexInterval& outer) const { return re_.subset_of(outer.re_) && im_.subset_of(outer.im_); }
    bool interior_of(const ComplexInterval& outer) const
    {
        return re_.interior_of(outer.re_) && im_.interior_of(outer.im_);
    }
    bool intersects(const ComplexInterval& other) const
    {
        return re_.intersects(other.re_) && im_.intersects(other.im_);
    }

    friend bool operator==(const ComplexInterval& a, const ComplexInterval& b) = default;

private:
    RealInterval<T> re_;
    RealInterval<T> im_;
};

template <class T>
ComplexInterval<T> operator+(const ComplexInterval<T>& a, const ComplexInterval<T>& b)
{
    return {a.re() + b.re(), a.im() + b.im()};
}

template <class T>
ComplexInterval<T> operator-(const ComplexInterval<T>& a, const ComplexInterval<T>& b)
{
    return {a.re() - b.re(), a.im() - b.im()};
}

template <class T>
ComplexInterval<T> operator-(const ComplexInterval<T>& a)
{
    return {-a.re(), -a.im()};
}

/// (X+iY)(W+iZ) = (XW - YZ) + i(XZ + YW), built from real interval operations.
template <class T>
ComplexInterval<T> operator*(const ComplexInterval<T>& a, const ComplexInterval<T>& b)
{
    const auto& x = a.re();
    const auto& y = a.im();
    const auto& w = b.re();
    const auto& z = b.im();
    return {x * w - y * z, x * z + y * w};
}

/// (X+iY)/(W+iZ) with denominator W^2 + Z^2. Throws DomainError when that
/// denominator interval contains zero.
template <class T>
ComplexInterval<T> operator/(const ComplexInterval<T>& a, const ComplexInterval<T>& b)
{
    const auto& x = a.re();
    const auto& y = a.im();
    const auto& w = b.re();
    const auto& z = b.im();
    const RealInterval<T> den = square(w) + square(z);
    if (den.contains_zero()) {
        throw DomainError("complex interval division: denominator contains zero");
    }
    return {(x * w + y * z) / den, (y * w - x * z) / den};
}

/// (X+iY)^2 = (X^2 - Y^2) + i 2XY using the real square primitive.
template <class T>
ComplexInterval<T> square(const ComplexInterval<T>& a)
{
    const RealInterval<T> xy = a.re() * a.im();
    return {square(a.re()) - square(a.im()), xy + xy};
}

/// Upper bound on max{|z| : z in I}.
template <class T>
T mag(const ComplexInterval<T>& a)
{
    const T r = a.re().mag();
    const T i = a.im().mag();
    return sqrt_rounded(add(mul(r, r, Rounding::up), mul(i, i, Rounding::up), Rounding::up), Rounding::up);
}

template <class T>
std::ostream& operator<<(std::ostream& os, const ComplexInterval<T>& a)
{
    return os << a.re() << " + i" << a.im();
}

}  // namespace kcert
