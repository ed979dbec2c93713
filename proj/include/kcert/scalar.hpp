#pragma once

#include <gmpxx.h>

#include <cmath>

#include "kcert/bigfloat.hpp"
#include "kcert/precision.hpp"
#include "kcert/rounding.hpp"

namespace kcert {

/// Construction and conversion hooks for the two interval backends. The
/// arithmetic itself is reached through the overloaded free functions
/// add/sub/mul/div/sqrt_rounded taking an explicit Rounding.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static double from_double(double v, PrecisionLevel) { return v; }
    static double from_rational(const mpq_class& q, Rounding r, PrecisionLevel)
    {
        mpfr_t tmp;
        mpfr_init2(tmp, 53);
        mpfr_set_q(tmp, q.get_mpq_t(), to_mpfr(r));
        const double out = mpfr_get_d(tmp, MPFR_RNDN);
        mpfr_clear(tmp);
        return out;
    }
    static double to_double(double v, Rounding) { return v; }
    static BigFloat to_big(double v) { return BigFloat(v, 53); }
    static bool is_finite(double v) { return std::isfinite(v); }
    static int sign(double v) { return (v > 0.0) - (v < 0.0); }
    static double zero(PrecisionLevel) { return 0.0; }
};

template <>
struct ScalarTraits<BigFloat> {
    static BigFloat from_double(double v, PrecisionLevel p) { return BigFloat(v, p.significand_bits); }
    static BigFloat from_rational(const mpq_class& q, Rounding r, PrecisionLevel p)
    {
        BigFloat out(p.significand_bits);
        mpfr_set_q(out.get(), q.get_mpq_t(), to_mpfr(r));
        return out;
    }
    static double to_double(const BigFloat& v, Rounding r) { return v.to_double(r); }
    static BigFloat to_big(const BigFloat& v) { return v; }
    static bool is_finite(const BigFloat& v) { return v.is_finite(); }
    static int sign(const BigFloat& v) { return v.sign(); }
    static BigFloat zero(PrecisionLevel p) { return BigFloat(p.significand_bits); }
};

inline double abs(double x)
{
    return std::fabs(x);
}

/// Precision carried by a scalar value.
inline PrecisionLevel precision_of(double)
{
    return PrecisionLevel{kNativeBits};
}

inline PrecisionLevel precision_of(const BigFloat& x)
{
    return PrecisionLevel{static_cast<int>(x.precision())};
}

}  // namespace kcert
