#pragma once

#include <cmath>
#include <vector>

namespace kcert {

/// A working precision on the escalation ladder. The binary64 backend is the
/// level with 53 significand bits; every other level runs on MPFR.
struct PrecisionLevel {
    int significand_bits = 53;

    /// Relative unit roundoff of one correctly rounded operation, 2^-bits.
    double unit_roundoff() const { return std::ldexp(1.0, -significand_bits); }
    bool is_native() const { return significand_bits == 53; }

    friend bool operator==(const PrecisionLevel&, const PrecisionLevel&) = default;
};

inline constexpr int kNativeBits = 53;
inline constexpr int kDefaultMaxBits = 512;

/// 53, 128, 256, 512, ... truncated at `max_bits`. A cap below 53 still yields
/// the native level so that at least one attempt is made.
std::vector<PrecisionLevel> default_ladder(int max_bits = kDefaultMaxBits);

}  // namespace kcert
