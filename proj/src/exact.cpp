#include "kcert/exact.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace kcert {

ExactComplex operator+(const ExactComplex& a, const ExactComplex& b)
{
    return {a.re + b.re, a.im + b.im};
}

ExactComplex operator-(const ExactComplex& a, const ExactComplex& b)
{
    return {a.re - b.re, a.im - b.im};
}

ExactComplex operator*(const ExactComplex& a, const ExactComplex& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ExactComplex operator-(const ExactComplex& a)
{
    return {-a.re, -a.im};
}

ExactComplex operator/(const ExactComplex& a, const ExactComplex& b)
{
    if (b.is_zero()) {
        throw std::domain_error("division by exact zero constant");
    }
    const mpq_class den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

ExactComplex pow(const ExactComplex& base, int exponent)
{
    if (exponent < 0) {
        return ExactComplex{1} / pow(base, -exponent);
    }
    ExactComplex result{1};
    ExactComplex square = base;
    for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
        if (e & 1U) {
            result = result * square;
        }
        if (e > 1) {
            square = square * square;
        }
    }
    return result;
}

mpq_class parse_decimal(std::string_view text)
{
    std::size_t pos = 0;
    const bool minus = !text.empty() && text[0] == '-';
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        ++pos;
    }
    std::string digits;
    long scale = 0;
    bool seen_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits.push_back(text[pos++]);
        seen_digit = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits.push_back(text[pos++]);
            --scale;
            seen_digit = true;
        }
    }
    if (!seen_digit) {
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            negative = text[pos] == '-';
            ++pos;
        }
        if (pos == text.size()) {
            throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
        }
        long exponent = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            exponent = exponent * 10 + (text[pos++] - '0');
            if (exponent > 100000) {
                throw std::invalid_argument("exponent out of range in '" + std::string(text) + "'");
            }
        }
        scale += negative ? -exponent : exponent;
    }
    if (pos != text.size()) {
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }

    mpz_class numerator(digits, 10);
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    mpq_class value;
    if (scale >= 0) {
        value = mpq_class(numerator * power);
    } else {
        value = mpq_class(numerator, power);
        value.canonicalize();
    }
    return minus ? mpq_class(-value) : value;
}

mpq_class exact_value(double x)
{
    if (!std::isfinite(x)) {
        throw std::invalid_argument("non-finite value has no exact rational form");
    }
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

std::string to_string(const ExactComplex& z)
{
    if (z.is_real()) {
        return z.re.get_str();
    }
    return "(" + z.re.get_str() + ")+(" + z.im.get_str() + ")*i";
}

}  // namespace kcert
