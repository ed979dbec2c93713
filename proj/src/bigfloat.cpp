#include "kcert/bigfloat.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "kcert/precision.hpp"

namespace kcert {

BigFloat::BigFloat(mpfr_prec_t precision)
{
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value, mpfr_prec_t precision)
{
    mpfr_init2(value_, precision);
    mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other)
{
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept
{
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other)
{
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept
{
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat()
{
    mpfr_clear(value_);
}

double BigFloat::to_double(Rounding r) const
{
    return mpfr_get_d(value_, to_mpfr(r));
}

BigFloat BigFloat::operator-() const
{
    BigFloat out(precision());
    mpfr_neg(out.value_, value_, MPFR_RNDN);
    return out;
}

mpfr_rnd_t to_mpfr(Rounding r)
{
    switch (r) {
    case Rounding::down:
        return MPFR_RNDD;
    case Rounding::up:
        return MPFR_RNDU;
    default:
        return MPFR_RNDN;
    }
}

namespace {

template <class Fn>
BigFloat binary(const BigFloat& a, const BigFloat& b, Rounding r, Fn fn)
{
    BigFloat out(std::max(a.precision(), b.precision()));
    fn(out.get(), a.get(), b.get(), to_mpfr(r));
    return out;
}

}  // namespace

BigFloat add(const BigFloat& a, const BigFloat& b, Rounding r)
{
    return binary(a, b, r, mpfr_add);
}

BigFloat sub(const BigFloat& a, const BigFloat& b, Rounding r)
{
    return binary(a, b, r, mpfr_sub);
}

BigFloat mul(const BigFloat& a, const BigFloat& b, Rounding r)
{
    return binary(a, b, r, mpfr_mul);
}

BigFloat div(const BigFloat& a, const BigFloat& b, Rounding r)
{
    return binary(a, b, r, mpfr_div);
}

BigFloat sqrt_rounded(const BigFloat& a, Rounding r)
{
    BigFloat out(a.precision());
    mpfr_sqrt(out.get(), a.get(), to_mpfr(r));
    return out;
}

BigFloat abs(const BigFloat& a)
{
    BigFloat out(a.precision());
    mpfr_abs(out.get(), a.get(), MPFR_RNDN);
    return out;
}

int round_trip_digits(mpfr_prec_t bits)
{
    return static_cast<int>(mpfr_get_str_ndigits(10, bits));
}

std::string to_decimal(const BigFloat& x, Rounding r, int digits)
{
    if (x.is_zero()) {
        return "0";
    }
    if (!x.is_finite()) {
        return mpfr_nan_p(x.get()) ? "nan" : (x.sign() > 0 ? "inf" : "-inf");
    }
    if (digits <= 0) {
        digits = round_trip_digits(x.precision());
    }
    mpfr_exp_t exponent = 0;
    char* raw = mpfr_get_str(nullptr, &exponent, 10, static_cast<size_t>(digits), x.get(), to_mpfr(r));
    std::string mantissa(raw);
    mpfr_free_str(raw);

    std::string out;
    if (mantissa.front() == '-') {
        out.push_back('-');
        mantissa.erase(0, 1);
    }
    while (mantissa.size() > 1 && mantissa.back() == '0') {
        mantissa.pop_back();
    }
    out.push_back(mantissa[0]);
    if (mantissa.size() > 1) {
        out.push_back('.');
        out.append(mantissa, 1, std::string::npos);
    }
    // mpfr reports value = 0.d1d2... * 10^exponent
    const long e = static_cast<long>(exponent) - 1;
    if (e != 0) {
        out += 'e';
        out += std::to_string(e);
    }
    return out;
}

std::vector<PrecisionLevel> default_ladder(int max_bits)
{
    std::vector<PrecisionLevel> ladder{PrecisionLevel{kNativeBits}};
    for (int bits = 128; bits <= max_bits; bits *= 2) {
        ladder.push_back(PrecisionLevel{bits});
    }
    return ladder;
}

}  // namespace kcert
