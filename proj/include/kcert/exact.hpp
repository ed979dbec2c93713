#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace kcert {

/// Complex number with exact rational parts. Used for literal coefficients so
/// that every constant can later be enclosed at whatever precision is active.
struct ExactComplex {
    mpq_class re{0};
    mpq_class im{0};

    ExactComplex() = default;
    ExactComplex(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator<(const ExactComplex& a, const ExactComplex& b)
    {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    }
};

ExactComplex operator+(const ExactComplex& a, const ExactComplex& b);
ExactComplex operator-(const ExactComplex& a, const ExactComplex& b);
ExactComplex operator*(const ExactComplex& a, const ExactComplex& b);
ExactComplex operator-(const ExactComplex& a);
/// Throws std::domain_error when `b` is zero.
ExactComplex operator/(const ExactComplex& a, const ExactComplex& b);
ExactComplex pow(const ExactComplex& base, int exponent);

/// Exact value of a decimal literal such as "12", "0.7", "-1.5e-3".
/// Throws std::invalid_argument on malformed input.
mpq_class parse_decimal(std::string_view text);

/// Exact rational value of a binary64 number.
mpq_class exact_value(double x);

std::string to_string(const ExactComplex& z);

}  // namespace kcert
