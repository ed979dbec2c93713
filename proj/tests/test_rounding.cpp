#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "kcert/bigfloat.hpp"
#include "kcert/precision.hpp"
#include "kcert/rounding.hpp"
#include "oracle.hpp"

using kcert::Rounding;
using oracle::exact;

namespace {

double random_operand(oracle::Rng& rng)
{
    switch (rng.integer(0, 5)) {
    case 0:
        return rng.dyadic(16);
    case 1:
        return std::ldexp(rng.uniform(-1.0, 1.0), rng.integer(-1070, -1000));
    case 2:
        return std::ldexp(rng.uniform(-1.0, 1.0), rng.integer(-600, 600));
    default:
        return rng.uniform(-10.0, 10.0);
    }
}

void check_bracket(double down, double up, const mpq_class& truth)
{
    REQUIRE(exact(down) <= truth);
    REQUIRE(truth <= exact(up));
    // at most one ulp on each side of the nearest value
    CHECK(std::nextafter(std::nextafter(down, INFINITY), INFINITY) >= up);
}

}  // namespace

TEST_CASE("directed binary64 operations bracket the exact rational result")
{
    oracle::Rng rng(1234);
    for (int k = 0; k < 20000; ++k) {
        const double a = random_operand(rng);
        const double b = random_operand(rng);
        check_bracket(kcert::add(a, b, Rounding::down), kcert::add(a, b, Rounding::up), exact(a) + exact(b));
        check_bracket(kcert::sub(a, b, Rounding::down), kcert::sub(a, b, Rounding::up), exact(a) - exact(b));
        const double pd = kcert::mul(a, b, Rounding::down);
        const double pu = kcert::mul(a, b, Rounding::up);
        if (std::isfinite(pd) && std::isfinite(pu)) {
            check_bracket(pd, pu, exact(a) * exact(b));
        }
        if (b != 0.0) {
            const double qd = kcert::div(a, b, Rounding::down);
            const double qu = kcert::div(a, b, Rounding::up);
            if (std::isfinite(qd) && std::isfinite(qu)) {
                check_bracket(qd, qu, exact(a) / exact(b));
            }
        }
        const double s = std::fabs(a);
        const double sd = kcert::sqrt_rounded(s, Rounding::down);
        const double su = kcert::sqrt_rounded(s, Rounding::up);
        REQUIRE(exact(sd) * exact(sd) <= exact(s));
        REQUIRE(exact(s) <= exact(su) * exact(su));
    }
}

TEST_CASE("exact operations are not widened")
{
    CHECK(kcert::add(1.0, 3.0, Rounding::down) == 4.0);
    CHECK(kcert::add(2.0, 4.0, Rounding::up) == 6.0);
    CHECK(kcert::mul(-1.0, 4.0, Rounding::down) == -4.0);
    CHECK(kcert::div(1.0, 4.0, Rounding::up) == 0.25);
    CHECK(kcert::sqrt_rounded(4.0, Rounding::down) == 2.0);
    CHECK(kcert::mul(0.0, 5.0, Rounding::down) == 0.0);
}

TEST_CASE("inexact operations move one ulp outward")
{
    const double third_down = kcert::div(1.0, 3.0, Rounding::down);
    const double third_up = kcert::div(1.0, 3.0, Rounding::up);
    CHECK(third_down < third_up);
    CHECK(std::nextafter(third_down, 1.0) == third_up);
    CHECK(exact(third_down) < mpq_class(1, 3));
    CHECK(mpq_class(1, 3) < exact(third_up));

    const double tiny = std::numeric_limits<double>::denorm_min();
    CHECK(kcert::mul(tiny, 0.5, Rounding::down) == 0.0);
    CHECK(kcert::mul(tiny, 0.5, Rounding::up) > 0.0);
}

TEST_CASE("BigFloat operations follow the requested direction")
{
    const kcert::BigFloat one(1.0, 128);
    const kcert::BigFloat three(3.0, 128);
    const auto lo = kcert::div(one, three, Rounding::down);
    const auto hi = kcert::div(one, three, Rounding::up);
    CHECK(lo.precision() == 128);
    CHECK(exact(lo) < mpq_class(1, 3));
    CHECK(mpq_class(1, 3) < exact(hi));

    const kcert::BigFloat low_prec(1.0, 64);
    CHECK(kcert::add(low_prec, three, Rounding::nearest).precision() == 128);
}

TEST_CASE("decimal printing is directed and round-trips outward")
{
    oracle::Rng rng(99);
    for (int k = 0; k < 500; ++k) {
        const int bits = rng.coin() ? 53 : 200;
        kcert::BigFloat x(bits);
        mpfr_set_d(x.get(), std::ldexp(rng.uniform(-1.0, 1.0), rng.integer(-40, 40)), MPFR_RNDN);
        kcert::BigFloat third = kcert::div(x, kcert::BigFloat(3.0, bits), Rounding::nearest);
        const std::string lo = kcert::to_decimal(third, Rounding::down);
        const std::string hi = kcert::to_decimal(third, Rounding::up);
        kcert::BigFloat lo_back(bits);
        kcert::BigFloat hi_back(bits);
        mpfr_set_str(lo_back.get(), lo.c_str(), 10, MPFR_RNDN);
        mpfr_set_str(hi_back.get(), hi.c_str(), 10, MPFR_RNDN);
        CHECK(lo_back <= third);
        CHECK(third <= hi_back);
    }
    CHECK(kcert::to_decimal(kcert::BigFloat(0.25, 53), Rounding::down) == "2.5e-1");
    CHECK(kcert::to_decimal(kcert::BigFloat(-3.0, 53), Rounding::up) == "-3");
}

TEST_CASE("default precision ladder")
{
    const auto ladder = kcert::default_ladder();
    REQUIRE(ladder.size() == 4);
    CHECK(ladder[0].significand_bits == 53);
    CHECK(ladder[3].significand_bits == 512);
    CHECK(kcert::default_ladder(200).size() == 2);
    CHECK(kcert::default_ladder(10).size() == 1);
    for (std::size_t k = 1; k < ladder.size(); ++k) {
        CHECK(ladder[k].unit_roundoff() < ladder[k - 1].unit_roundoff());
    }
    CHECK(ladder[0].unit_roundoff() == std::ldexp(1.0, -53));
}
