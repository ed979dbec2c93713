#pragma once

// Directed rounding for IEEE binary64 without touching the FPU rounding mode.
//
// Every primitive computes the round-to-nearest result and an error-free
// transform of it (TwoSum, FMA residual). When the residual shows the result
// was inexact, the bound is moved one ulp outward in the requested direction.
// Near the underflow threshold the residual is not exact, so the bound is
// widened unconditionally there.

namespace kcert {

enum class Rounding { nearest, down, up };

inline constexpr Rounding opposite(Rounding r) noexcept
{
    return r == Rounding::down ? Rounding::up : r == Rounding::up ? Rounding::down : r;
}

double add(double a, double b, Rounding r);
double sub(double a, double b, Rounding r);
double mul(double a, double b, Rounding r);
double div(double a, double b, Rounding r);
double sqrt_rounded(double a, Rounding r);

double next_down(double x);
double next_up(double x);

}  // namespace kcert
