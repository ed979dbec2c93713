#include "kcert/rounding.hpp"

#include <cmath>
#include <limits>

namespace kcert {

namespace {

// Below this magnitude products and quotients may lose bits to underflow,
// so FMA residuals no longer describe the rounding error exactly.
constexpr double kTiny = 0x1p-960;

// `err` is (exact - rounded). Returns the rounded value moved outward when needed.
double settle(double rounded, double err, Rounding r)
{
    if (r == Rounding::nearest || err == 0.0) {
        return rounded;
    }
    if (r == Rounding::down) {
        return err < 0.0 ? next_down(rounded) : rounded;
    }
    return err > 0.0 ? next_up(rounded) : rounded;
}

double widen(double rounded, Rounding r)
{
    switch (r) {
    case Rounding::down:
        return next_down(rounded);
    case Rounding::up:
        return next_up(rounded);
    default:
        return rounded;
    }
}

bool unsafe_for_residual(double x)
{
    return x != 0.0 && std::fabs(x) < kTiny;
}

}  // namespace

double next_down(double x)
{
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

double next_up(double x)
{
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

double add(double a, double b, Rounding r)
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return s;
    }
    // TwoSum (Knuth): exact for any finite operands without overflow.
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return settle(s, err, r);
}

double sub(double a, double b, Rounding r)
{
    return add(a, -b, r);
}

double mul(double a, double b, Rounding r)
{
    const double p = a * b;
    if (!std::isfinite(p) || r == Rounding::nearest) {
        return p;
    }
    if (p == 0.0) {
        // Either an operand is zero (exact) or the product underflowed.
        if (a == 0.0 || b == 0.0) {
            return p;
        }
        const bool positive = (a > 0.0) == (b > 0.0);
        return (positive == (r == Rounding::up)) ? widen(0.0, r) : 0.0;
    }
    if (unsafe_for_residual(p)) {
        return widen(p, r);
    }
    return settle(p, std::fma(a, b, -p), r);
}

double div(double a, double b, Rounding r)
{
    const double q = a / b;
    if (!std::isfinite(q) || r == Rounding::nearest) {
        return q;
    }
    if (q == 0.0) {
        if (a == 0.0) {
            return q;
        }
        const bool positive = (a > 0.0) == (b > 0.0);
        return (positive == (r == Rounding::up)) ? widen(0.0, r) : 0.0;
    }
    if (unsafe_for_residual(q) || unsafe_for_residual(a)) {
        return widen(q, r);
    }
    // rem = a - q*b exactly; sign(a/b - q) = sign(rem) * sign(b).
    const double rem = std::fma(-q, b, a);
    const double err = b > 0.0 ? rem : -rem;
    return settle(q, err, r);
}

double sqrt_rounded(double a, Rounding r)
{
    const double s = std::sqrt(a);
    if (!std::isfinite(s) || r == Rounding::nearest || s == 0.0) {
        return s;
    }
    if (unsafe_for_residual(a)) {
        return widen(s, r);
    }
    // rem = a - s*s exactly; sign(sqrt(a) - s) = sign(rem).
    return settle(s, std::fma(-s, s, a), r);
}

}  // namespace kcert
