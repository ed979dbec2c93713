#pragma once

#include <mpfr.h>

#include <string>

#include "kcert/rounding.hpp"

namespace kcert {

/// Owning wrapper around an mpfr_t. Arithmetic results take the larger
/// precision of the two operands; the rounding direction is passed per call,
/// so no process-wide rounding state is involved.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t precision = 53);
    BigFloat(double value, mpfr_prec_t precision);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

    double to_double(Rounding r = Rounding::nearest) const;
    bool is_finite() const { return mpfr_number_p(value_) != 0; }
    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    int sign() const { return mpfr_sgn(value_); }

    BigFloat operator-() const;

    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.value_, b.value_) != 0; }

private:
    mpfr_t value_;
};

mpfr_rnd_t to_mpfr(Rounding r);

BigFloat add(const BigFloat& a, const BigFloat& b, Rounding r);
BigFloat sub(const BigFloat& a, const BigFloat& b, Rounding r);
BigFloat mul(const BigFloat& a, const BigFloat& b, Rounding r);
BigFloat div(const BigFloat& a, const BigFloat& b, Rounding r);
BigFloat sqrt_rounded(const BigFloat& a, Rounding r);
BigFloat abs(const BigFloat& a);

/// Shortest-style scientific decimal with `digits` significant digits,
/// rounded in direction `r` (so that parsing it back stays on the same side).
std::string to_decimal(const BigFloat& x, Rounding r, int digits = 0);

/// Number of decimal digits that round-trip a binary significand of `bits`.
int round_trip_digits(mpfr_prec_t bits);

}  // namespace kcert
